#include "ergo/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace ergo {

namespace {

using nlohmann::json;

const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(path + "." + key, "missing field");
    return j.at(key);
}

ComplexMatrix parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty row array");
    const int n = static_cast<int>(j.size());
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i) {
        const json& row = j.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ConfigError(path + "[" + std::to_string(i) + "]", "row length != dimension");
        for (int k = 0; k < n; ++k) {
            const json& e = row.at(k);
            if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() || !e.at(1).is_number())
                throw ConfigError(path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]",
                                  "expected [re, im]");
            m(i, k) = cplx{e.at(0).get<double>(), e.at(1).get<double>()};
        }
    }
    return m;
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.dim(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::vector<std::size_t> ScheduleSpec::resolve() const {
    if (type == Type::List) {
        if (ks.empty()) throw ConfigError("schedule.ks", "empty k list");
        for (std::size_t k : ks)
            if (k == 0) throw ConfigError("schedule.ks", "k must be >= 1");
        std::vector<std::size_t> out = ks;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    if (kmax == 0) throw ConfigError("schedule.kmax", "kmax must be >= 1");
    std::set<std::size_t> s;
    for (int j = 0;; ++j) {
        const auto k = static_cast<std::size_t>(std::ceil(std::pow(1.5, j)));
        if (k > kmax) break;
        s.insert(k);
    }
    s.insert(kmax);
    return {s.begin(), s.end()};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    c.name = field(j, "name", "$").get<std::string>();

    const json& g = field(j, "group", "$");
    const std::string kind = field(g, "kind", "group").get<std::string>();
    std::size_t n_gens = 0;
    if (kind == "zd") {
        c.group_kind = GroupKind::Zd;
        c.group_dim = field(g, "dim", "group").get<int>();
        if (c.group_dim < 1) throw ConfigError("group.dim", "must be >= 1");
        n_gens = static_cast<std::size_t>(c.group_dim);
    } else if (kind == "heisenberg") {
        c.group_kind = GroupKind::Heisenberg;
        n_gens = 3;
    } else if (kind == "finite") {
        c.group_kind = GroupKind::Finite;
        c.table = field(g, "table", "group").get<std::vector<std::vector<int>>>();
        c.finite_generators = field(g, "generators", "group").get<std::vector<int>>();
        n_gens = c.finite_generators.size();
    } else {
        throw ConfigError("group.kind", "expected zd|finite|heisenberg");
    }

    const json& alg = field(j, "algebra", "$");
    c.dims = field(alg, "dims", "algebra").get<std::vector<int>>();
    if (c.dims.empty()) throw ConfigError("algebra.dims", "empty signature");
    for (int d : c.dims)
        if (d < 1) throw ConfigError("algebra.dims", "block dimension must be >= 1");
    if (alg.contains("kernel_blocks"))
        c.kernel_blocks = alg.at("kernel_blocks").get<std::vector<int>>();
    std::sort(c.kernel_blocks.begin(), c.kernel_blocks.end());
    for (int kb : c.kernel_blocks)
        if (kb < 0 || kb >= static_cast<int>(c.dims.size()))
            throw ConfigError("algebra.kernel_blocks", "index out of range");
    if (c.kernel_blocks.size() >= c.dims.size())
        throw ConfigError("algebra.kernel_blocks", "no surviving block");

    const json& r = field(j, "rho", "$");
    c.rho.weights = field(r, "weights", "rho").get<std::vector<double>>();
    const json& dens = field(r, "densities", "rho");
    for (std::size_t i = 0; i < dens.size(); ++i)
        c.rho.densities.push_back(
            parse_matrix(dens.at(i), "rho.densities[" + std::to_string(i) + "]"));
    if (c.rho.weights.size() != c.rho.densities.size())
        throw ConfigError("rho", "weight/density count mismatch");

    const json& thetas = field(j, "theta_unitaries", "$");
    if (thetas.size() != n_gens)
        throw ConfigError("theta_unitaries", "expected one entry per group generator (" +
                                                 std::to_string(n_gens) + ")");
    for (std::size_t gi = 0; gi < thetas.size(); ++gi) {
        const json& blocks = thetas.at(gi);
        if (blocks.size() != c.dims.size())
            throw ConfigError("theta_unitaries[" + std::to_string(gi) + "]",
                              "expected one matrix per algebra block");
        BlockElement u;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const std::string p =
                "theta_unitaries[" + std::to_string(gi) + "][" + std::to_string(b) + "]";
            ComplexMatrix m = parse_matrix(blocks.at(b), p);
            if (m.dim() != c.dims[b]) throw ConfigError(p, "dimension != algebra block");
            u.blocks.push_back(std::move(m));
        }
        c.theta_unitaries.push_back(std::move(u));
    }

    const json& a = field(j, "element_a", "$");
    if (a.size() != c.dims.size())
        throw ConfigError("element_a", "expected one matrix per algebra block");
    for (std::size_t b = 0; b < a.size(); ++b) {
        const std::string p = "element_a[" + std::to_string(b) + "]";
        ComplexMatrix m = parse_matrix(a.at(b), p);
        if (m.dim() != c.dims[b]) throw ConfigError(p, "dimension != algebra block");
        c.element_a.blocks.push_back(std::move(m));
    }

    const json& sched = field(j, "schedule", "$");
    const std::string stype = field(sched, "type", "schedule").get<std::string>();
    if (stype == "geometric") {
        c.schedule.type = ScheduleSpec::Type::Geometric;
        c.schedule.kmax = field(sched, "kmax", "schedule").get<std::size_t>();
    } else if (stype == "list") {
        c.schedule.type = ScheduleSpec::Type::List;
        c.schedule.ks = field(sched, "ks", "schedule").get<std::vector<std::size_t>>();
    } else {
        throw ConfigError("schedule.type", "expected geometric|list");
    }

    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
    if (c.tolerance <= 0) throw ConfigError("tolerance", "must be positive");
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

json ExperimentConfig::to_json() const {
    json j;
    j["name"] = name;
    json g;
    switch (group_kind) {
    case GroupKind::Zd:
        g["kind"] = "zd";
        g["dim"] = group_dim;
        break;
    case GroupKind::Heisenberg:
        g["kind"] = "heisenberg";
        break;
    case GroupKind::Finite:
        g["kind"] = "finite";
        g["table"] = table;
        g["generators"] = finite_generators;
        break;
    }
    j["group"] = std::move(g);
    j["algebra"] = {{"dims", dims}, {"kernel_blocks", kernel_blocks}};
    json dens = json::array();
    for (const auto& d : rho.densities) dens.push_back(matrix_to_json(d));
    j["rho"] = {{"weights", rho.weights}, {"densities", std::move(dens)}};
    json thetas = json::array();
    for (const auto& u : theta_unitaries) {
        json blocks = json::array();
        for (const auto& b : u.blocks) blocks.push_back(matrix_to_json(b));
        thetas.push_back(std::move(blocks));
    }
    j["theta_unitaries"] = std::move(thetas);
    json a = json::array();
    for (const auto& b : element_a.blocks) a.push_back(matrix_to_json(b));
    j["element_a"] = std::move(a);
    if (schedule.type == ScheduleSpec::Type::Geometric)
        j["schedule"] = {{"type", "geometric"}, {"kmax", schedule.kmax}};
    else
        j["schedule"] = {{"type", "list"}, {"ks", schedule.ks}};
    j["tolerance"] = tolerance;
    j["seed"] = seed;
    return j;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError(p.string(), "cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(p.string(), std::string("JSON parse error: ") + e.what());
    }
    return from_json(j);
}

void ExperimentConfig::save(const std::filesystem::path& p) const {
    std::ofstream out(p);
    if (!out) throw ConfigError(p.string(), "cannot open file for writing");
    out << to_json().dump(2) << "\n";
}

CStarModel ExperimentConfig::build_model() const {
    std::shared_ptr<const GroupModel> group;
    switch (group_kind) {
    case GroupKind::Zd:
        group = std::make_shared<const GroupModel>(GroupModel::zd(group_dim));
        break;
    case GroupKind::Heisenberg:
        group = std::make_shared<const GroupModel>(GroupModel::heisenberg());
        break;
    case GroupKind::Finite:
        try {
            group = std::make_shared<const GroupModel>(
                GroupModel::finite(table, finite_generators));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("group.table", e.what());
        }
        break;
    }

    CStarModel m;
    m.domain_dims = dims;
    m.kernel_blocks = kernel_blocks;
    m.theta_gen_unitaries = theta_unitaries;

    m.target.group = group;
    const auto survivors = m.surviving_blocks();
    for (int s : survivors) m.target.dims.push_back(dims[s]);
    if (rho.densities.size() != m.target.dims.size())
        throw ConfigError("rho.densities", "expected one density per surviving block");
    for (std::size_t s = 0; s < survivors.size(); ++s)
        if (rho.densities[s].dim() != m.target.dims[s])
            throw ConfigError("rho.densities[" + std::to_string(s) + "]",
                              "dimension != surviving block");
    m.target.rho = rho;
    for (const auto& theta : theta_unitaries) {
        BlockElement u;
        for (int s : survivors) u.blocks.push_back(theta.blocks[s]);
        m.target.gen_unitaries.push_back(std::move(u));
    }
    return m;
}

} // namespace ergo
