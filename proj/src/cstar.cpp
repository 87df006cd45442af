#include "ergo/cstar.hpp"

#include <algorithm>
#include <stdexcept>

namespace ergo {

bool CStarModel::is_kernel_block(std::size_t i) const {
    return std::binary_search(kernel_blocks.begin(), kernel_blocks.end(), static_cast<int>(i));
}

std::vector<int> CStarModel::surviving_blocks() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < domain_dims.size(); ++i)
        if (!is_kernel_block(i)) out.push_back(static_cast<int>(i));
    return out;
}

ValidationReport validate_model(const CStarModel& m) {
    ValidationReport rep;
    const auto push = [&rep](std::string name, double residual, double tol, std::string detail) {
        rep.checks.push_back({std::move(name), residual, tol, residual <= tol, std::move(detail)});
    };

    bool idx_ok = std::is_sorted(m.kernel_blocks.begin(), m.kernel_blocks.end()) &&
                  std::adjacent_find(m.kernel_blocks.begin(), m.kernel_blocks.end()) ==
                      m.kernel_blocks.end();
    for (int i : m.kernel_blocks)
        idx_ok = idx_ok && i >= 0 && i < static_cast<int>(m.domain_dims.size());
    idx_ok = idx_ok && m.kernel_blocks.size() < m.domain_dims.size();
    push("kernel_block_indices", idx_ok ? 0.0 : 1.0, 0.0, "");

    const auto survivors = m.surviving_blocks();
    bool sig_ok = survivors.size() == m.target.dims.size();
    if (sig_ok)
        for (std::size_t s = 0; s < survivors.size(); ++s)
            sig_ok = sig_ok && m.domain_dims[survivors[s]] == m.target.dims[s];
    push("target_signature", sig_ok ? 0.0 : 1.0, 0.0, "");

    bool gens_ok = m.theta_gen_unitaries.size() == m.target.gen_unitaries.size();
    push("generator_count", gens_ok ? 0.0 : 1.0, 0.0, "");

    if (idx_ok && sig_ok && gens_ok) {
        double worst = 0;
        for (std::size_t g = 0; g < m.theta_gen_unitaries.size(); ++g)
            for (std::size_t s = 0; s < survivors.size(); ++s)
                worst = std::max(worst, (m.theta_gen_unitaries[g].blocks[survivors[s]] -
                                         m.target.gen_unitaries[g].blocks[s])
                                            .max_abs());
        push("theta_matches_target_on_survivors", worst, 1e-12, "");
    }
    return rep;
}

BlockElement apply_iota(const CStarModel& m, const BlockElement& a) {
    if (a.dims() != m.domain_dims)
        throw std::invalid_argument("apply_iota: signature mismatch");
    BlockElement r;
    for (int s : m.surviving_blocks()) r.blocks.push_back(a.blocks[s]);
    return r;
}

BlockElement project_quotient(const CStarModel& m, const BlockElement& a) {
    return apply_iota(m, a);
}

CStarModel quotient_model(const CStarModel& m) {
    CStarModel q;
    q.kernel_blocks = {};
    q.target = m.target;
    q.domain_dims = m.target.dims;
    const auto survivors = m.surviving_blocks();
    for (const auto& theta : m.theta_gen_unitaries) {
        BlockElement u;
        for (int s : survivors) u.blocks.push_back(theta.blocks[s]);
        q.theta_gen_unitaries.push_back(std::move(u));
    }
    return q;
}

BlockState pullback_state(const CStarModel& m, const BlockState& psi_tilde) {
    const auto survivors = m.surviving_blocks();
    if (psi_tilde.densities.size() != survivors.size())
        throw std::invalid_argument("pullback_state: quotient signature mismatch");
    BlockState out = BlockState::maximally_mixed(m.domain_dims);
    for (auto& w : out.weights) w = 0.0;
    for (std::size_t s = 0; s < survivors.size(); ++s) {
        out.weights[survivors[s]] = psi_tilde.weights[s];
        out.densities[survivors[s]] = psi_tilde.densities[s];
    }
    return out;
}

BlockState pushforward_state(const CStarModel& m, const BlockState& psi) {
    if (psi.densities.size() != m.domain_dims.size())
        throw std::invalid_argument("pushforward_state: domain signature mismatch");
    double kernel_mass = 0;
    for (int kb : m.kernel_blocks) kernel_mass += psi.weights[kb];
    if (kernel_mass > 1e-12)
        throw std::invalid_argument("pushforward_state: state has mass on the kernel");
    BlockState out;
    double total = 0;
    for (int s : m.surviving_blocks()) total += psi.weights[s];
    for (int s : m.surviving_blocks()) {
        out.weights.push_back(psi.weights[s] / total);
        out.densities.push_back(psi.densities[s]);
    }
    return out;
}

EquivarianceReport check_equivariance(const CStarModel& m, unsigned seed, int samples) {
    std::mt19937_64 rng(seed);
    ActionEvaluator target_eval(m.target);
    double worst = 0;
    for (int t = 0; t < samples; ++t) {
        BlockElement a;
        for (int n : m.domain_dims) a.blocks.push_back(random_hermitian(n, rng));
        for (std::size_t g = 0; g < m.theta_gen_unitaries.size(); ++g) {
            // Theta_g(a) blockwise
            BlockElement ta;
            for (std::size_t b = 0; b < a.blocks.size(); ++b) {
                const auto& u = m.theta_gen_unitaries[g].blocks[b];
                ta.blocks.push_back(u.mul(a.blocks[b]).mul_adjoint(u));
            }
            const BlockElement lhs =
                target_eval.act(m.target.group->generators()[g], apply_iota(m, a));
            const BlockElement rhs = apply_iota(m, ta);
            worst = std::max(worst, operator_norm(lhs - rhs));
        }
    }
    return {worst, worst <= 1e-8};
}

} // namespace ergo
