#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergo/cstar.hpp"

namespace ergo {

struct ScheduleSpec {
    enum class Type { Geometric, List };
    Type type = Type::Geometric;
    std::size_t kmax = 100;
    std::vector<std::size_t> ks; // List only

    // Geometric: k = ceil(1.5^j), deduplicated, capped at kmax, always ending
    // at kmax itself.
    std::vector<std::size_t> resolve() const;
};

// Config parse errors carry the offending field path.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what) {}
};

struct ExperimentConfig {
    std::string name;

    GroupKind group_kind = GroupKind::Zd;
    int group_dim = 1;                        // Zd only
    std::vector<std::vector<int>> table;      // Finite only
    std::vector<int> finite_generators;       // Finite only

    std::vector<int> dims;                    // domain algebra signature
    std::vector<int> kernel_blocks;
    BlockState rho;                           // on surviving blocks
    std::vector<BlockElement> theta_unitaries; // per generator, domain blocks
    BlockElement element_a;

    ScheduleSpec schedule;
    double tolerance = 1e-3;
    std::uint64_t seed = 1;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    static ExperimentConfig load(const std::filesystem::path& p);
    void save(const std::filesystem::path& p) const;

    // Builds the group, target W*-system, and C*-model. Throws ConfigError
    // on structural problems; numerical invariants are left to
    // validate_system / validate_model.
    CStarModel build_model() const;
};

} // namespace ergo
