// Acceptance gate: runs every bundled system through the full pipeline and
// checks the release criteria at pinned tolerances, one verdict line each.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <vector>

#include "ergo/harness.hpp"

using namespace ergo;

namespace {

int g_failures = 0;

void verdict(int idx, const std::string& what, bool pass, const std::string& detail) {
    std::printf("%s  criterion %d: %s  [%s]\n", pass ? "PASS" : "FAIL", idx, what.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

bool suite_pass(const std::vector<CheckResult>& suites, const std::string& name,
                double* worst = nullptr) {
    bool found = false, ok = true;
    for (const auto& c : suites) {
        if (c.name != name) continue;
        found = true;
        ok = ok && c.pass;
        if (worst) *worst = std::max(*worst, c.residual);
    }
    return found && ok;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <config-dir>\n");
        return 2;
    }
    const std::filesystem::path dir = argv[1];

    std::vector<ExperimentConfig> configs;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".json")
            configs.push_back(ExperimentConfig::load(entry.path()));
    std::sort(configs.begin(), configs.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    if (configs.size() < 5) {
        std::fprintf(stderr, "expected at least 5 bundled configs, found %zu\n", configs.size());
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::map<std::string, RunReport> reports;
    std::map<std::string, std::vector<CheckResult>> suites;
    for (const auto& cfg : configs) {
        reports.emplace(cfg.name, run_experiment(cfg));
        suites.emplace(cfg.name, check_inequalities(cfg));
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // 1. convergence of the averaged norms to m on every bundled system
    {
        bool pass = true;
        double worst = 0;
        for (const auto& [name, rep] : reports) {
            pass = pass && rep.theorem_pass;
            worst = std::max(worst, rep.tail_gap);
        }
        pass = pass && elapsed < 60.0;
        verdict(1, "norm convergence on all bundled systems", pass,
                "worst tail gap " + fmt(worst) + ", " + fmt(elapsed) + "s");
    }

    // 2. closed form for the alternating M_2 system, k = 1..200
    {
        const auto it = std::find_if(configs.begin(), configs.end(),
                                     [](const auto& c) { return c.name == "alternating_m2"; });
        bool pass = it != configs.end();
        double worst = 0;
        if (pass) {
            const CStarModel model = it->build_model();
            ActionEvaluator eval(model.target);
            std::vector<std::size_t> ks(200);
            for (std::size_t k = 1; k <= 200; ++k) ks[k - 1] = k;
            const auto pts = norm_sequence(eval, apply_iota(model, it->element_a), ks);
            for (const auto& p : pts) {
                const double expect =
                    (p.k % 2 == 1) ? 1.0 + 1.0 / static_cast<double>(p.k) : 1.0;
                worst = std::max(worst, std::abs(p.norm - expect));
            }
            pass = worst <= 1e-9;
        }
        verdict(2, "alternating system matches 1 + 1/k closed form", pass,
                "max deviation " + fmt(worst));
    }

    // 3. the two m backends agree on bundled and generated systems
    {
        bool pass = true;
        double worst = 0;
        for (const auto& [name, rep] : reports) {
            worst = std::max(worst, std::abs(rep.m_primary.value - rep.m_cross.value));
        }
        const char* kinds[] = {"zd", "finite", "heisenberg", "kernel"};
        for (const char* kind : kinds) {
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                const auto cfg = generate_example(kind, seed, 4);
                const CStarModel model = cfg.build_model();
                const auto fp = m_value(model, cfg.element_a, Constraint::Annihilator);
                const CStarModel quot = quotient_model(model);
                const auto fw = sdp_cross_check(quot.domain_dims, quot.theta_gen_unitaries,
                                                apply_iota(model, cfg.element_a));
                worst = std::max(worst, std::abs(fp.value - fw.value));
            }
        }
        pass = worst <= 1e-6;
        verdict(3, "fixed-point and Frank-Wolfe backends agree (5 bundled + 20 generated)",
                pass, "max |difference| " + fmt(worst));
    }

    // 4-7. invariant suites on every bundled system
    const struct {
        int idx;
        const char* what;
        std::vector<const char*> names;
    } suite_criteria[] = {
        {4, "defect-Lipschitz bound along the sweeps", {"defect_lipschitz"}},
        {5, "sandwich bounds for sampled invariant states", {"sandwich"}},
        {6, "norming states attain the norm (100 seeded x each)", {"norming_identity"}},
        {7,
         "quotient correspondence (round trips, annihilator vs full)",
         {"quotient_roundtrip", "quotient_invariance_preserved", "annihilator_vs_full"}},
    };
    for (const auto& crit : suite_criteria) {
        bool pass = true;
        double worst = 0;
        for (const auto& [name, checks] : suites)
            for (const char* sname : crit.names) {
                // iota_isometric_faithful only exists on faithful models, all
                // listed names here are emitted unconditionally
                pass = pass && suite_pass(checks, sname, &worst);
            }
        verdict(crit.idx, crit.what, pass, "worst residual " + fmt(worst));
    }

    // 7 (second half): the kernel model reports m from surviving blocks only.
    // Folded into criterion 7's verdict above via annihilator_vs_full; also
    // assert it directly on the bundled kernel config.
    {
        const auto it = std::find_if(configs.begin(), configs.end(),
                                     [](const auto& c) { return !c.kernel_blocks.empty(); });
        if (it == configs.end() || std::abs(reports.at(it->name).m_primary.value - 1.0) > 1e-8) {
            std::printf("FAIL  criterion 7 (addendum): kernel model m from surviving blocks\n");
            ++g_failures;
        }
    }

    // 8. finite groups: F_k = G makes every scheduled average exact
    {
        bool pass = true;
        double worst = 0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto cfg = generate_example("finite", seed, 4);
            const auto rep = run_experiment(cfg);
            for (const auto& row : rep.rows) worst = std::max(worst, row.abs_gap);
        }
        pass = worst <= 1e-10;
        verdict(8, "exactness on finite groups at every k", pass, "max gap " + fmt(worst));
    }

    // 9. determinism: byte-identical CSV across two runs of the same config
    {
        bool pass = true;
        for (const auto& cfg : configs) {
            std::ostringstream s1, s2;
            emit_csv(reports.at(cfg.name), s1);
            emit_csv(run_experiment(cfg), s2);
            pass = pass && s1.str() == s2.str();
        }
        verdict(9, "byte-identical CSV across repeated runs", pass,
                pass ? "all configs identical" : "mismatch");
    }

    if (g_failures == 0) std::printf("acceptance: all criteria passed\n");
    else std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
