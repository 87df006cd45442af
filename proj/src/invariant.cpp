#include "ergo/invariant.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ergo {

namespace {

using EMat = Eigen::MatrixXcd;

EMat conjugation_superop(const ComplexMatrix& u) {
    const int n = u.dim();
    EMat a(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    a(i * n + j, k * n + l) = u(i, k) * std::conj(u(j, l));
    return a;
}

double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    // real HS inner product of Hermitian matrices
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (std::conj(a.data()[i]) * b.data()[i]).real();
    return s;
}

ComplexMatrix top_eigprojection(const ComplexMatrix& x, double* top_val) {
    const auto eig = hermitian_eig(x);
    const int n = x.dim();
    *top_val = eig.eigenvalues.back();
    ComplexMatrix p(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            p(i, j) = eig.vectors(i, n - 1) * std::conj(eig.vectors(j, n - 1));
    return p;
}

} // namespace

BlockElement InvariantSubspace::project(const BlockElement& x) const {
    BlockElement r;
    for (std::size_t b = 0; b < x.blocks.size(); ++b) {
        ComplexMatrix y(x.blocks[b].dim());
        for (const auto& s : herm_basis[b]) y.add_scaled(s, hs_inner(s, x.blocks[b]));
        r.blocks.push_back(std::move(y));
    }
    return r;
}

InvariantSubspace invariant_subspace(const std::vector<int>& dims,
                                     const std::vector<BlockElement>& gen_unitaries) {
    InvariantSubspace out;
    for (std::size_t b = 0; b < dims.size(); ++b) {
        const int n = dims[b];
        EMat h = EMat::Zero(n * n, n * n);
        for (const auto& gu : gen_unitaries) {
            const EMat d = conjugation_superop(gu.blocks[b]) - EMat::Identity(n * n, n * n);
            h += d.adjoint() * d;
        }
        Eigen::SelfAdjointEigenSolver<EMat> es(h);
        const double cut = 1e-10 * std::max(1.0, es.eigenvalues().maxCoeff());
        int null_dim = 0;
        for (int i = 0; i < n * n; ++i)
            if (es.eigenvalues()(i) <= cut) ++null_dim;

        // Hermitianize the complex nullspace basis. The fixed space is
        // *-closed, so its Hermitian part has real dimension null_dim.
        std::vector<ComplexMatrix> herm;
        for (int c = 0; c < null_dim && static_cast<int>(herm.size()) < null_dim; ++c) {
            ComplexMatrix s(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s(i, j) = es.eigenvectors()(i * n + j, c);
            ComplexMatrix cands[2];
            cands[0] = s.hermitized();
            ComplexMatrix anti = s - s.adjoint();
            anti.scale(0.5);
            ComplexMatrix ih(n);
            for (std::size_t i = 0; i < anti.size(); ++i)
                ih.data()[i] = cplx{anti.data()[i].imag(), -anti.data()[i].real()};
            cands[1] = ih; // (s - s^H)/(2i)
            for (auto& cand : cands) {
                for (const auto& e : herm) cand.add_scaled(e, -hs_inner(e, cand));
                const double nrm = cand.frobenius_norm();
                if (nrm > 1e-8 && static_cast<int>(herm.size()) < null_dim) {
                    cand.scale(1.0 / nrm);
                    herm.push_back(std::move(cand));
                }
            }
        }
        if (static_cast<int>(herm.size()) != null_dim)
            throw std::logic_error("invariant_subspace: Hermitian basis extraction failed");
        out.herm_basis.push_back(std::move(herm));
    }
    return out;
}

InvariantSubspace invariant_subspace(const WStarSystem& sys) {
    return invariant_subspace(sys.dims, sys.gen_unitaries);
}

double state_invariance_residual(const BlockState& s,
                                 const std::vector<BlockElement>& gen_unitaries) {
    double worst = 0;
    for (const auto& gu : gen_unitaries)
        for (std::size_t b = 0; b < s.densities.size(); ++b) {
            const auto& u = gu.blocks[b];
            ComplexMatrix t = s.densities[b];
            t.scale(s.weights[b]);
            const ComplexMatrix moved = u.adjoint().mul(t).mul(u);
            worst = std::max(worst, (moved - t).frobenius_norm());
        }
    return worst;
}

namespace {

// Shared fixed-point backend: value = ||E(a)||, witness = norming_state(E(a))
// pre-composed with E.
MaxResult fixed_point_max(const std::vector<int>& dims,
                          const std::vector<BlockElement>& gens, const BlockElement& a) {
    FixedPointProjector proj(dims, gens);
    const BlockElement ea = proj.apply(a).hermitized();
    MaxResult r;
    r.method_tag = "fixed_point";
    r.value = operator_norm(ea);
    BlockState psi = norming_state(ea);
    // psi o E: densities move through the (self-adjoint) projection
    BlockElement dens;
    dens.blocks = psi.densities;
    const BlockElement projected = proj.apply(dens).hermitized();
    psi.densities = projected.blocks;
    r.witness = std::move(psi);
    r.invariance_residual = state_invariance_residual(r.witness, gens);
    r.feasibility_residual = std::abs(state_eval(r.witness, a).real() - r.value);
    return r;
}

} // namespace

MaxResult m_value(const CStarModel& model, const BlockElement& a, Constraint constraint) {
    if (!is_psd(a, 1e-9)) throw std::invalid_argument("m_value: element not positive");
    if (constraint == Constraint::Full) {
        return fixed_point_max(model.domain_dims, model.theta_gen_unitaries, a);
    }
    // Annihilator: pass to the quotient (faithful) model and pull back.
    const CStarModel q = quotient_model(model);
    const BlockElement ia = apply_iota(model, a);
    MaxResult r = fixed_point_max(q.domain_dims, q.theta_gen_unitaries, ia);
    r.witness = pullback_state(model, r.witness);
    r.invariance_residual = state_invariance_residual(r.witness, model.theta_gen_unitaries);
    r.feasibility_residual = std::abs(state_eval(r.witness, a).real() - r.value);
    return r;
}

BlockState maximizing_state(const WStarSystem& sys, const BlockElement& a) {
    if (!is_psd(a, 1e-9)) throw std::invalid_argument("maximizing_state: element not positive");
    FixedPointProjector proj(sys.dims, sys.gen_unitaries);
    BlockState psi = norming_state(proj.apply(a).hermitized());
    BlockElement dens;
    dens.blocks = psi.densities;
    psi.densities = proj.apply(dens).hermitized().blocks;
    return psi;
}

MaxResult sdp_cross_check(const std::vector<int>& dims,
                          const std::vector<BlockElement>& gen_unitaries,
                          const BlockElement& a) {
    if (!is_psd(a, 1e-9)) throw std::invalid_argument("sdp_cross_check: element not positive");
    const InvariantSubspace inv = invariant_subspace(dims, gen_unitaries);
    const BlockElement grad = inv.project(a).hermitized(); // E(a), constant gradient

    // iterate on the weighted block density T, total trace 1
    int total_dim = 0;
    for (int n : dims) total_dim += n;
    BlockElement t = BlockElement::identity(dims);
    t.scale(1.0 / total_dim);

    const auto objective = [&a](const BlockElement& s) {
        cplx v{};
        for (std::size_t b = 0; b < s.blocks.size(); ++b)
            v += s.blocks[b].mul(a.blocks[b]).trace();
        return v.real();
    };

    MaxResult r;
    r.method_tag = "frank_wolfe";
    const int max_iters = 500;
    double gap = 0;
    int it = 0;
    for (; it < max_iters; ++it) {
        // linear maximization oracle over the invariant spectrahedron: top
        // eigenvector of the projected gradient, pushed back into the subspace
        int best_block = 0;
        double best_val = -1e300;
        ComplexMatrix best_proj;
        for (std::size_t b = 0; b < dims.size(); ++b) {
            double val = 0;
            ComplexMatrix p = top_eigprojection(grad.blocks[b], &val);
            if (val > best_val) {
                best_val = val;
                best_block = static_cast<int>(b);
                best_proj = std::move(p);
            }
        }
        BlockElement vertex = BlockElement::zero(dims);
        vertex.blocks[best_block] = best_proj;
        vertex = inv.project(vertex).hermitized();

        gap = objective(vertex) - objective(t);
        if (gap <= 1e-9) break;
        const double gamma = 2.0 / (it + 2.0);
        t.scale(1.0 - gamma);
        t.add_scaled(vertex, gamma);
    }

    r.iterations = it;
    r.final_gap = gap;
    r.converged = gap <= 1e-9;
    r.value = objective(t);

    BlockState w;
    for (std::size_t b = 0; b < dims.size(); ++b) {
        const double wb = t.blocks[b].trace().real();
        if (wb > 1e-14) {
            ComplexMatrix d = t.blocks[b];
            d.scale(1.0 / wb);
            w.weights.push_back(wb);
            w.densities.push_back(std::move(d));
        } else {
            w.weights.push_back(0.0);
            ComplexMatrix d = ComplexMatrix::identity(dims[b]);
            d.scale(1.0 / dims[b]);
            w.densities.push_back(std::move(d));
        }
    }
    r.witness = std::move(w);
    r.invariance_residual = state_invariance_residual(r.witness, gen_unitaries);
    r.feasibility_residual = std::abs(state_eval(r.witness, a).real() - r.value);
    return r;
}

MaxResult sdp_cross_check(const WStarSystem& sys, const BlockElement& a) {
    return sdp_cross_check(sys.dims, sys.gen_unitaries, a);
}

} // namespace ergo
