#pragma once

#include <filesystem>
#include <iosfwd>

#include "ergo/config.hpp"
#include "ergo/invariant.hpp"

namespace ergo {

struct ReportRow {
    std::size_t k = 0;
    std::size_t folner_size = 0;
    double norm_avg = 0;
    double m_target = 0;
    double abs_gap = 0;
    double max_defect = 0;
};

struct RunReport {
    std::string name;
    std::vector<ReportRow> rows;
    MaxResult m_primary; // fixed-point backend, annihilator constraint
    MaxResult m_cross;   // Frank-Wolfe backend
    double tolerance = 0;
    double tail_gap = 0; // max abs_gap over the last 5 scheduled k
    bool theorem_pass = false;
    std::vector<CheckResult> suites;
    bool suites_pass = true;
    double wall_seconds = 0;
};

// Validation gate, both m backends, the norm sweep over the schedule, and
// the tail-window convergence verdict.
RunReport run_experiment(const ExperimentConfig& cfg);

// Runs every module's invariant suite against this system. A failed
// validation skips the numeric suites. Defect-sensitive sweeps cap k at
// min(schedule kmax, 200).
std::vector<CheckResult> check_inequalities(const ExperimentConfig& cfg);

// Seeded valid configs: rho-invariance by construction (unitaries share an
// eigenbasis with delta), relations exact by construction. dim <= 64.
ExperimentConfig generate_example(const std::string& kind, std::uint64_t seed, int dim);

void emit_csv(const RunReport& report, std::ostream& out);
void emit_csv(const RunReport& report, const std::filesystem::path& path);

} // namespace ergo
