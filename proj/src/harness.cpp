#include "ergo/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_set>

namespace ergo {

namespace {

double max_generator_defect(const FolnerFamily& fam, std::size_t k) {
    double worst = 0;
    for (const auto& g : fam.model().generators())
        worst = std::max(worst, fam.defect(k, g).as_double());
    return worst;
}

// k cap for the defect-sensitive sweeps: |F_k| = k^4 for Heisenberg makes
// k = 200 unreachable on a desk machine, so that family stops at 12; large
// block dimensions shorten the Zd sweep (superoperator cost grows as n^4).
std::size_t lipschitz_kmax(const ExperimentConfig& cfg) {
    switch (cfg.group_kind) {
    case GroupKind::Zd: {
        const int n = *std::max_element(cfg.dims.begin(), cfg.dims.end());
        return n <= 8 ? 200 : (n <= 16 ? 50 : 20);
    }
    case GroupKind::Heisenberg: return 12;
    case GroupKind::Finite: return 5;
    }
    return 1;
}

BlockState sample_invariant_state(const std::vector<int>& dims,
                                  const FixedPointProjector& proj, std::mt19937_64& rng) {
    std::exponential_distribution<double> expd(1.0);
    BlockState s;
    double total = 0;
    for (std::size_t b = 0; b < dims.size(); ++b) {
        s.weights.push_back(expd(rng));
        total += s.weights.back();
    }
    for (auto& w : s.weights) w /= total;
    BlockElement dens;
    for (int n : dims) dens.blocks.push_back(random_density(n, rng));
    dens = proj.apply(dens).hermitized();
    for (auto& d : dens.blocks) {
        const double tr = d.trace().real();
        d.scale(1.0 / tr);
    }
    s.densities = std::move(dens.blocks);
    return s;
}

struct SuiteCollector {
    std::vector<CheckResult> out;
    void add(std::string name, double residual, double tol, std::string detail = {}) {
        out.push_back({std::move(name), residual, tol, residual <= tol, std::move(detail)});
    }
    void skip(std::string name) {
        out.push_back({std::move(name), 0.0, 0.0, false, "skipped: validation failed"});
    }
};

} // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    rep.name = cfg.name;
    rep.tolerance = cfg.tolerance;

    const CStarModel model = cfg.build_model();
    const ValidationReport sys_val = validate_system(model.target);
    if (!sys_val.ok())
        throw std::runtime_error("system validation failed: " + sys_val.first_failure());
    const ValidationReport mod_val = validate_model(model);
    if (!mod_val.ok())
        throw std::runtime_error("model validation failed: " + mod_val.first_failure());
    if (!is_psd(cfg.element_a, 1e-9))
        throw std::runtime_error("element_a is not positive");

    rep.m_primary = m_value(model, cfg.element_a, Constraint::Annihilator);
    const CStarModel quot = quotient_model(model);
    const BlockElement ia = apply_iota(model, cfg.element_a);
    rep.m_cross = sdp_cross_check(quot.domain_dims, quot.theta_gen_unitaries, ia);

    const auto ks = cfg.schedule.resolve();
    ActionEvaluator eval(model.target);
    AverageSweep sweep(eval);
    const FolnerFamily fam = model.target.folner();
    for (std::size_t k : ks) {
        sweep.advance_to(k);
        ReportRow row;
        row.k = k;
        row.folner_size = sweep.folner_size();
        row.norm_avg = operator_norm(sweep.average(ia));
        row.m_target = rep.m_primary.value;
        row.abs_gap = std::abs(row.norm_avg - row.m_target);
        row.max_defect = max_generator_defect(fam, k);
        rep.rows.push_back(row);
    }

    const std::size_t tail = std::min<std::size_t>(5, rep.rows.size());
    rep.tail_gap = 0;
    for (std::size_t i = rep.rows.size() - tail; i < rep.rows.size(); ++i)
        rep.tail_gap = std::max(rep.tail_gap, rep.rows[i].abs_gap);
    rep.theorem_pass = rep.tail_gap <= cfg.tolerance;

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<CheckResult> check_inequalities(const ExperimentConfig& cfg) {
    SuiteCollector col;
    const CStarModel model = cfg.build_model();
    const WStarSystem& sys = model.target;
    const FolnerFamily fam = sys.folner();
    const GroupModel& grp = *sys.group;
    std::mt19937_64 rng(cfg.seed);

    // --- group suite (pure integer arithmetic, no validation gate needed)
    {
        const auto elems = fam.set(std::min<std::size_t>(3, lipschitz_kmax(cfg)));
        double worst = 0;
        for (std::size_t i = 0; i < elems.size(); i += 1 + elems.size() / 7)
            for (std::size_t j = 0; j < elems.size(); j += 1 + elems.size() / 7)
                for (std::size_t l = 0; l < elems.size(); l += 1 + elems.size() / 7) {
                    const auto lhs = grp.multiply(grp.multiply(elems[i], elems[j]), elems[l]);
                    const auto rhs = grp.multiply(elems[i], grp.multiply(elems[j], elems[l]));
                    if (!(lhs == rhs)) worst = 1;
                    if (!(grp.multiply(elems[i], grp.inverse(elems[i])) == grp.identity()))
                        worst = 1;
                }
        col.add("group_axioms", worst, 0.0);

        double iddef = 0;
        for (std::size_t k = 1; k <= std::min<std::size_t>(5, lipschitz_kmax(cfg)); ++k)
            iddef = std::max(iddef, fam.defect(k, grp.identity()).as_double());
        col.add("defect_identity_zero", iddef, 0.0);

        // symmetric difference two ways, exact agreement
        double sd = 0;
        const std::size_t kk = std::min<std::size_t>(4, lipschitz_kmax(cfg));
        const auto fk = fam.set(kk);
        for (const auto& g : grp.generators()) {
            std::unordered_set<GroupElement, GroupElementHash> base(fk.begin(), fk.end());
            std::unordered_set<GroupElement, GroupElementHash> shifted;
            for (const auto& e : fk) shifted.insert(grp.multiply(e, g));
            std::size_t direct = 0, inter = 0;
            for (const auto& e : base)
                if (!shifted.count(e)) ++direct;
            for (const auto& e : shifted) {
                if (!base.count(e)) ++direct;
                else ++inter;
            }
            const std::size_t via_formula = base.size() + shifted.size() - 2 * inter;
            if (direct != via_formula) sd = 1;
            if (Rational(static_cast<std::int64_t>(direct),
                         static_cast<std::int64_t>(fk.size())) != fam.defect(kk, g))
                sd = 1;
        }
        col.add("defect_two_routes_agree", sd, 0.0);

        // non-increasing toward 0 along doubling
        double mono = 0;
        const std::size_t half = std::max<std::size_t>(1, lipschitz_kmax(cfg) / 2);
        for (const auto& g : grp.generators())
            for (std::size_t k = 1; k <= half; k = std::max(k + 1, k * 3 / 2)) {
                const double d2 = fam.defect(2 * k, g).as_double();
                const double d1 = fam.defect(k, g).as_double();
                mono = std::max(mono, d2 - d1);
            }
        col.add("defect_doubling_monotone", mono, 1e-12);
    }

    // --- validation gate
    const ValidationReport sys_val = validate_system(sys);
    for (const auto& c : sys_val.checks) col.out.push_back(c);
    const ValidationReport mod_val = validate_model(model);
    for (const auto& c : mod_val.checks) col.out.push_back(c);
    if (!sys_val.ok() || !mod_val.ok()) {
        for (const char* name :
             {"equivariance", "cstar_norm_identity", "unitary_norm_invariance",
              "norming_identity", "defect_lipschitz", "rho_compatibility", "norm_contraction",
              "mean_ergodic_convergence", "projection_idempotent", "projection_commutes",
              "sandwich", "quotient_roundtrip", "annihilator_vs_full", "oracle_equivalence"})
            col.skip(name);
        return col.out;
    }

    // --- C*-model suite
    col.add("equivariance", check_equivariance(model, static_cast<unsigned>(cfg.seed)).max_residual,
            1e-8);

    // --- matrix core suite
    {
        double cstar = 0, uinv = 0, norming = 0;
        for (int t = 0; t < 20; ++t) {
            BlockElement x;
            for (int n : sys.dims) x.blocks.push_back(random_hermitian(n, rng));
            cstar = std::max(cstar, std::abs(operator_norm(x.adjoint().mul(x)) -
                                             operator_norm(x) * operator_norm(x)));
            BlockElement u;
            for (int n : sys.dims) u.blocks.push_back(random_unitary(n, rng));
            const BlockElement conj = u.mul(x).mul(u.adjoint());
            uinv = std::max(uinv, std::abs(operator_norm(conj) - operator_norm(x)));
        }
        for (int t = 0; t < 100; ++t) {
            const BlockElement x = random_positive(sys.dims, rng);
            const BlockState s = norming_state(x);
            norming = std::max(norming, std::abs(state_eval(s, x).real() - operator_norm(x)));
        }
        col.add("cstar_norm_identity", cstar, 1e-8);
        col.add("unitary_norm_invariance", uinv, 1e-10);
        col.add("norming_identity", norming, 1e-10);
    }

    const BlockElement ia = apply_iota(model, cfg.element_a);
    const double a_norm = operator_norm(cfg.element_a);
    ActionEvaluator eval(sys);
    const FixedPointProjector proj(sys.dims, sys.gen_unitaries);
    const BlockElement ea = proj.apply(ia).hermitized();

    // --- dynamics sweep suites: defect-Lipschitz, rho-compatibility,
    //     norm contraction, all along one incremental pass
    {
        const std::size_t kmax = lipschitz_kmax(cfg);
        std::vector<BlockElement> xs;
        std::vector<double> xnorms;
        for (int t = 0; t < 20; ++t) {
            BlockElement x;
            for (int n : sys.dims) x.blocks.push_back(random_hermitian(n, rng));
            xnorms.push_back(operator_norm(x));
            xs.push_back(std::move(x));
        }
        std::vector<BlockElement> moved; // act(g0, x) for every generator/x pair
        for (const auto& g0 : grp.generators())
            for (const auto& x : xs) moved.push_back(eval.act(g0, x));

        const double rho_ref_a = state_eval(sys.rho, ia).real();
        std::vector<double> rho_refs;
        for (const auto& x : xs) rho_refs.push_back(state_eval(sys.rho, x).real());

        double lip = 0, rho_res = 0, contraction = 0;
        AverageSweep sweep(eval);
        for (std::size_t k = 1; k <= kmax; ++k) {
            sweep.advance_to(k);
            const BlockElement avg_ia = sweep.average(ia);
            const BlockState sigma_k = norming_state(avg_ia.hermitized());
            rho_res = std::max(rho_res,
                               std::abs(state_eval(sys.rho, avg_ia).real() - rho_ref_a));
            std::vector<double> defects;
            for (const auto& g0 : grp.generators())
                defects.push_back(fam.defect(k, g0).as_double());
            for (std::size_t xi = 0; xi < xs.size(); ++xi) {
                const BlockElement avg_x = sweep.average(xs[xi]);
                const double base = state_eval(sigma_k, avg_x).real();
                contraction =
                    std::max(contraction, operator_norm(avg_x) - xnorms[xi] - 1e-10);
                rho_res = std::max(rho_res, std::abs(state_eval(sys.rho, avg_x).real() -
                                                     rho_refs[xi]));
                for (std::size_t gi = 0; gi < grp.generators().size(); ++gi) {
                    const BlockElement avg_gx =
                        sweep.average(moved[gi * xs.size() + xi]);
                    const double lhs = std::abs(state_eval(sigma_k, avg_gx).real() - base);
                    lip = std::max(lhs - (defects[gi] * xnorms[xi] + 1e-9), lip);
                }
            }
        }
        col.add("defect_lipschitz", std::max(lip, 0.0), 0.0,
                "k <= " + std::to_string(kmax));
        col.add("rho_compatibility", rho_res, 1e-9);
        col.add("norm_contraction", std::max(contraction, 0.0), 0.0);
    }

    // --- mean-ergodic projection suites + convergence + sandwich
    const MaxResult m_ann = m_value(model, cfg.element_a, Constraint::Annihilator);
    {
        const auto ks = cfg.schedule.resolve();
        AverageSweep sweep(eval);
        std::vector<double> norms;
        double conv_tail = 0;
        std::size_t idx = 0;
        for (std::size_t k : ks) {
            sweep.advance_to(k);
            const BlockElement avg = sweep.average(ia);
            norms.push_back(operator_norm(avg));
            if (idx + 5 >= ks.size())
                conv_tail = std::max(conv_tail, operator_norm(avg - ea));
            ++idx;
        }
        col.add("mean_ergodic_convergence", conv_tail, cfg.tolerance,
                "||avg_k - E|| over last 5 scheduled k");

        double idem = 0, commutes = 0;
        for (int t = 0; t < 10; ++t) {
            BlockElement x;
            for (int n : sys.dims) x.blocks.push_back(random_hermitian(n, rng));
            const BlockElement ex = proj.apply(x);
            idem = std::max(idem, operator_norm(proj.apply(ex) - ex));
            for (const auto& g0 : grp.generators()) {
                commutes = std::max(commutes,
                                    operator_norm(proj.apply(eval.act(g0, x)) - ex));
                commutes = std::max(commutes, operator_norm(eval.act(g0, ex) - ex));
            }
        }
        col.add("projection_idempotent", idem, 1e-10);
        col.add("projection_commutes", commutes, 1e-8);

        // sandwich: psi(a) - 1e-9 <= ||avg_k|| <= ||a|| + 1e-10 for sampled
        // invariant annihilator states psi
        const CStarModel quot = quotient_model(model);
        double sandwich = 0;
        const double min_norm = *std::min_element(norms.begin(), norms.end());
        const double max_norm = *std::max_element(norms.begin(), norms.end());
        for (int t = 0; t < 100; ++t) {
            const BlockState psi_t = sample_invariant_state(quot.domain_dims, proj, rng);
            const BlockState psi0 = pullback_state(model, psi_t);
            const double psi_a = state_eval(psi0, cfg.element_a).real();
            sandwich = std::max(sandwich, psi_a - 1e-9 - min_norm);
        }
        sandwich = std::max(sandwich, max_norm - a_norm - 1e-10);
        col.add("sandwich", std::max(sandwich, 0.0), 0.0);
    }

    // --- quotient correspondence
    {
        const CStarModel quot = quotient_model(model);
        double round = 0, inv_pres = 0;
        for (int t = 0; t < 20; ++t) {
            BlockState psi_t = sample_invariant_state(quot.domain_dims, proj, rng);
            const BlockState back = pushforward_state(model, pullback_state(model, psi_t));
            for (std::size_t b = 0; b < psi_t.densities.size(); ++b) {
                round = std::max(round, std::abs(back.weights[b] - psi_t.weights[b]));
                round = std::max(round, (back.densities[b] - psi_t.densities[b]).max_abs());
            }
            inv_pres = std::max(inv_pres, state_invariance_residual(
                                              pullback_state(model, psi_t),
                                              model.theta_gen_unitaries));
        }
        col.add("quotient_roundtrip", round, 1e-12);
        col.add("quotient_invariance_preserved", inv_pres, 1e-8);

        const MaxResult m_full = m_value(model, cfg.element_a, Constraint::Full);
        if (model.faithful()) {
            double iso = 0;
            for (int t = 0; t < 20; ++t) {
                BlockElement x;
                for (int n : model.domain_dims) x.blocks.push_back(random_hermitian(n, rng));
                iso = std::max(iso,
                               std::abs(operator_norm(apply_iota(model, x)) - operator_norm(x)));
            }
            col.add("iota_isometric_faithful", iso, 0.0);
            col.add("annihilator_vs_full", std::abs(m_ann.value - m_full.value), 1e-8);
        } else {
            col.add("annihilator_vs_full",
                    std::max(m_ann.value - m_full.value - 1e-9, 0.0), 0.0,
                    "monotone: m(ann) <= m(full)");
        }
    }

    // --- oracle equivalence, both constraint modes
    {
        const CStarModel quot = quotient_model(model);
        const MaxResult fw_ann = sdp_cross_check(quot.domain_dims, quot.theta_gen_unitaries, ia);
        col.add("oracle_equivalence", std::abs(m_ann.value - fw_ann.value), 1e-6,
                "fixed-point vs Frank-Wolfe, annihilator");
        const MaxResult full = m_value(model, cfg.element_a, Constraint::Full);
        const MaxResult fw_full =
            sdp_cross_check(model.domain_dims, model.theta_gen_unitaries, cfg.element_a);
        col.add("oracle_equivalence_full", std::abs(full.value - fw_full.value), 1e-6,
                "fixed-point vs Frank-Wolfe, full");
        col.add("witness_value", m_ann.feasibility_residual, 1e-8);
        col.add("witness_invariance", m_ann.invariance_residual, 1e-8);
    }

    return col.out;
}

ExperimentConfig generate_example(const std::string& kind, std::uint64_t seed, int dim) {
    if (dim < 2 || dim > 64) throw std::invalid_argument("generate_example: dim must be in [2,64]");
    std::mt19937_64 rng(seed);
    using std::numbers::pi;

    const auto phase_unitary = [&](const ComplexMatrix& basis, int order) {
        // basis * diag(order-th roots of unity) * basis^H
        const int n = basis.dim();
        ComplexMatrix d(n);
        std::uniform_int_distribution<int> pick(0, order - 1);
        for (int i = 0; i < n; ++i) {
            const double ang = 2.0 * pi * pick(rng) / order;
            d(i, i) = cplx{std::cos(ang), std::sin(ang)};
        }
        return basis.mul(d).mul_adjoint(basis);
    };

    const auto repeated_density = [&](const ComplexMatrix& basis) {
        // eigenvalues drawn from two levels -> repeated spectrum, full rank
        const int n = basis.dim();
        ComplexMatrix d(n);
        double total = 0;
        for (int i = 0; i < n; ++i) {
            d(i, i) = (i % 2 == 0) ? 2.0 : 1.0;
            total += d(i, i).real();
        }
        for (int i = 0; i < n; ++i) d(i, i) /= total;
        return basis.mul(d).mul_adjoint(basis);
    };

    ExperimentConfig c;
    c.seed = seed;
    c.tolerance = 1e-3;
    c.dims = {dim};

    if (kind == "zd") {
        c.name = "generated_zd_seed" + std::to_string(seed);
        c.group_kind = GroupKind::Zd;
        c.group_dim = 2;
        const ComplexMatrix v = random_unitary(dim, rng);
        c.theta_unitaries.push_back({{phase_unitary(v, 2)}});
        c.theta_unitaries.push_back({{phase_unitary(v, 2)}});
        c.rho.weights = {1.0};
        c.rho.densities = {repeated_density(v)};
        c.schedule = {ScheduleSpec::Type::List, 0, {2, 4, 8, 16, 32, 50, 64, 80, 90, 100}};
    } else if (kind == "finite") {
        c.name = "generated_finite_seed" + std::to_string(seed);
        c.group_kind = GroupKind::Finite;
        const int order = 2 + static_cast<int>(seed % 5); // cyclic group Z_m
        c.table.assign(order, std::vector<int>(order));
        for (int i = 0; i < order; ++i)
            for (int j = 0; j < order; ++j) c.table[i][j] = (i + j) % order;
        c.finite_generators = {1};
        const ComplexMatrix v = random_unitary(dim, rng);
        // exact order-m phases so the cyclic relation is exact
        ComplexMatrix d(dim);
        std::uniform_int_distribution<int> pick(0, order - 1);
        for (int i = 0; i < dim; ++i) {
            const double ang = 2.0 * pi * pick(rng) / order;
            d(i, i) = cplx{std::cos(ang), std::sin(ang)};
        }
        c.theta_unitaries.push_back({{v.mul(d).mul_adjoint(v)}});
        c.rho.weights = {1.0};
        c.rho.densities = {repeated_density(v)};
        c.schedule = {ScheduleSpec::Type::List, 0, {1, 2, 3, 4, 5, 6, 7}};
    } else if (kind == "heisenberg") {
        if (dim % 2 != 0)
            throw std::invalid_argument("generate_example: heisenberg needs even dim");
        c.name = "generated_heisenberg_seed" + std::to_string(seed);
        c.group_kind = GroupKind::Heisenberg;
        // x -> Z (x) I, y -> X (x) I on C^2 (x) C^(dim/2), z -> [x,y] = -I,
        // conjugated by a random unitary
        const int half = dim / 2;
        ComplexMatrix ux(dim), uy(dim), uz(dim);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < half; ++j) {
                ux(i * half + j, i * half + j) = (i == 0) ? 1.0 : -1.0;
                uy(i * half + j, (1 - i) * half + j) = 1.0;
                uz(i * half + j, i * half + j) = -1.0;
            }
        const ComplexMatrix v = random_unitary(dim, rng);
        c.theta_unitaries.push_back({{v.mul(ux).mul_adjoint(v)}});
        c.theta_unitaries.push_back({{v.mul(uy).mul_adjoint(v)}});
        c.theta_unitaries.push_back({{v.mul(uz).mul_adjoint(v)}});
        ComplexMatrix id = ComplexMatrix::identity(dim);
        id.scale(1.0 / dim);
        c.rho.weights = {1.0};
        c.rho.densities = {id};
        c.schedule = {ScheduleSpec::Type::List, 0, {2, 4, 6, 8, 10, 12}};
    } else if (kind == "kernel") {
        c.name = "generated_kernel_seed" + std::to_string(seed);
        c.group_kind = GroupKind::Zd;
        c.group_dim = 2;
        c.dims = {dim, dim};
        c.kernel_blocks = {1};
        const ComplexMatrix v0 = random_unitary(dim, rng);
        const ComplexMatrix v1 = random_unitary(dim, rng);
        for (int g = 0; g < 2; ++g) {
            BlockElement u;
            u.blocks.push_back(phase_unitary(v0, 2));
            u.blocks.push_back(phase_unitary(v1, 2));
            c.theta_unitaries.push_back(std::move(u));
        }
        c.rho.weights = {1.0};
        c.rho.densities = {repeated_density(v0)};
        c.schedule = {ScheduleSpec::Type::List, 0, {2, 4, 8, 16, 32, 50, 64, 80, 90, 100}};
    } else {
        throw std::invalid_argument("generate_example: kind must be zd|finite|heisenberg|kernel");
    }

    c.element_a = random_positive(c.dims, rng);
    return c;
}

void emit_csv(const RunReport& report, std::ostream& out) {
    out << "k,folner_size,norm_avg,m_target,abs_gap,max_defect\n";
    char buf[512];
    for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof(buf), "%zu,%zu,%.15g,%.15g,%.15g,%.15g\n", r.k, r.folner_size,
                      r.norm_avg, r.m_target, r.abs_gap, r.max_defect);
        out << buf;
    }
}

void emit_csv(const RunReport& report, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary); // binary: LF line endings everywhere
    if (!f) throw std::runtime_error("emit_csv: cannot open " + path.string());
    emit_csv(report, f);
}

} // namespace ergo
