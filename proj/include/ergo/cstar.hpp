#pragma once

#include <vector>

#include "ergo/dynamics.hpp"

namespace ergo {

// C*-model of a W*-system: block algebra A with a block-sum kernel ideal,
// a block-preserving action Theta, and the *-morphism iota that drops the
// kernel blocks and carries the surviving blocks identically onto the
// target algebra. Theta on surviving blocks must equal the target action,
// which makes equivariance hold by construction.
struct CStarModel {
    std::vector<int> domain_dims;
    std::vector<int> kernel_blocks; // sorted, unique indices into domain_dims
    WStarSystem target;
    std::vector<BlockElement> theta_gen_unitaries; // on domain blocks

    bool faithful() const { return kernel_blocks.empty(); }
    bool is_kernel_block(std::size_t i) const;
    std::vector<int> surviving_blocks() const;
};

// Structural checks: index validity, target signature, theta-vs-target
// unitary agreement on surviving blocks.
ValidationReport validate_model(const CStarModel& m);

BlockElement apply_iota(const CStarModel& m, const BlockElement& a);
// The quotient map pi: A -> A/ker iota. Numerically the same block drop as
// iota; kept separate because it lands in the quotient algebra.
BlockElement project_quotient(const CStarModel& m, const BlockElement& a);

CStarModel quotient_model(const CStarModel& m);

// psi0 = psi_tilde o pi: weight 0 on kernel blocks.
BlockState pullback_state(const CStarModel& m, const BlockState& psi_tilde);
// Restriction-renormalization; requires total kernel weight <= 1e-12.
BlockState pushforward_state(const CStarModel& m, const BlockState& psi);

struct EquivarianceReport {
    double max_residual = 0;
    bool pass = false;
};
// Max of ||Xi_g(iota(a)) - iota(Theta_g(a))|| over generators and seeded a.
EquivarianceReport check_equivariance(const CStarModel& m, unsigned seed = 1, int samples = 20);

} // namespace ergo
