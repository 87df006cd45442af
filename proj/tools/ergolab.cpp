// ergolab: config-driven runner for Folner-average norm convergence
// experiments on finite-dimensional W*-dynamical systems.
//
// Exit codes: 0 pass, 1 verdict failure, 2 validation/config error.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "ergo/harness.hpp"

namespace {

int cmd_validate(const std::string& path) {
    const auto cfg = ergo::ExperimentConfig::load(path);
    const auto model = cfg.build_model();
    const auto sys_rep = ergo::validate_system(model.target);
    const auto mod_rep = ergo::validate_model(model);
    bool ok = true;
    for (const auto& reps : {sys_rep.checks, mod_rep.checks})
        for (const auto& c : reps) {
            std::printf("%-44s residual %.3e  tol %.3e  %s%s%s\n", c.name.c_str(), c.residual,
                        c.tol, c.pass ? "ok" : "FAIL", c.detail.empty() ? "" : "  ",
                        c.detail.c_str());
            ok = ok && c.pass;
        }
    if (!ergo::is_psd(cfg.element_a, 1e-9)) {
        std::printf("%-44s FAIL\n", "element_a_positive");
        ok = false;
    }
    std::printf("validation: %s\n", ok ? "pass" : "fail");
    return ok ? 0 : 2;
}

int cmd_run(const std::string& path, const std::string& out, std::size_t kmax_override,
            const std::string& schedule_override) {
    auto cfg = ergo::ExperimentConfig::load(path);
    if (!schedule_override.empty()) {
        if (schedule_override == "geometric") {
            cfg.schedule.type = ergo::ScheduleSpec::Type::Geometric;
            if (cfg.schedule.kmax == 0 && !cfg.schedule.ks.empty())
                cfg.schedule.kmax = cfg.schedule.ks.back();
        } else if (schedule_override == "list") {
            cfg.schedule.type = ergo::ScheduleSpec::Type::List;
        } else {
            throw ergo::ConfigError("--schedule", "expected geometric|list");
        }
    }
    if (kmax_override > 0) {
        cfg.schedule.type = ergo::ScheduleSpec::Type::Geometric;
        cfg.schedule.kmax = kmax_override;
    }
    const auto report = ergo::run_experiment(cfg);
    if (!out.empty()) ergo::emit_csv(report, std::filesystem::path(out));
    std::printf("system: %s\n", report.name.c_str());
    std::printf("m (fixed-point backend):  %.12f\n", report.m_primary.value);
    std::printf("m (Frank-Wolfe backend):  %.12f  (gap %.2e, %d iters)\n", report.m_cross.value,
                report.m_cross.final_gap, report.m_cross.iterations);
    for (const auto& r : report.rows)
        std::printf("  k=%-6zu |F_k|=%-10zu norm=%.12f gap=%.3e defect=%.3e\n", r.k,
                    r.folner_size, r.norm_avg, r.abs_gap, r.max_defect);
    std::printf("tail gap (last 5 k): %.3e  tolerance %.3e  -> %s\n", report.tail_gap,
                report.tolerance, report.theorem_pass ? "pass" : "FAIL");
    std::printf("wall time: %.2fs\n", report.wall_seconds);
    return report.theorem_pass ? 0 : 1;
}

int cmd_check(const std::string& path) {
    const auto cfg = ergo::ExperimentConfig::load(path);
    const auto suites = ergo::check_inequalities(cfg);
    bool ok = true;
    for (const auto& c : suites) {
        std::printf("%-44s residual %.3e  tol %.3e  %s%s%s\n", c.name.c_str(), c.residual, c.tol,
                    c.pass ? "ok" : "FAIL", c.detail.empty() ? "" : "  ", c.detail.c_str());
        ok = ok && c.pass;
    }
    std::printf("check: %s\n", ok ? "pass" : "fail");
    return ok ? 0 : 1;
}

int cmd_gen(const std::string& kind, std::uint64_t seed, int dim, const std::string& out) {
    const auto cfg = ergo::generate_example(kind, seed, dim);
    cfg.save(out);
    std::printf("wrote %s (%s)\n", out.c_str(), cfg.name.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Folner-average norm convergence laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_path, schedule_override, kind = "zd", kernels = "auto";
    std::size_t kmax = 0;
    std::uint64_t seed = 1;
    int dim = 4;

    app.add_option("--kernels", kernels, "force kernel backend: scalar|avx2|auto");

    auto* validate = app.add_subcommand("validate", "validate a config");
    validate->add_option("config", config_path)->required();

    auto* run = app.add_subcommand("run", "run the convergence experiment");
    run->add_option("config", config_path)->required();
    run->add_option("--out", out_path, "CSV output path");
    run->add_option("--kmax", kmax, "override: geometric schedule up to kmax");
    run->add_option("--schedule", schedule_override, "override schedule type: geometric|list");

    auto* check = app.add_subcommand("check", "run every inequality suite");
    check->add_option("config", config_path)->required();

    auto* gen = app.add_subcommand("gen", "generate a seeded example config");
    gen->add_option("--kind", kind, "zd|finite|heisenberg|kernel")->required();
    gen->add_option("--seed", seed)->required();
    gen->add_option("--dim", dim)->required();
    gen->add_option("--out", config_path)->required();

    // let the global --kernels flag appear after the subcommand too
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e); // prints help/message
        return rc == 0 ? 0 : 2;    // any parse failure is a config/usage error
    }

    try {
        ergo::kernels::force_backend(kernels);
        if (validate->parsed()) return cmd_validate(config_path);
        if (run->parsed()) return cmd_run(config_path, out_path, kmax, schedule_override);
        if (check->parsed()) return cmd_check(config_path);
        if (gen->parsed()) return cmd_gen(kind, seed, dim, config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
