#pragma once

#include <string>
#include <vector>

#include "ergo/cstar.hpp"
#include "ergo/dynamics.hpp"

namespace ergo {

// Hilbert-Schmidt orthonormal Hermitian basis of the joint fixed subspace of
// s -> U_g s U_g^H, per block. Computed from the nullspace of
// sum_g (A_g - I)^H (A_g - I), a route independent of FixedPointProjector.
struct InvariantSubspace {
    std::vector<std::vector<ComplexMatrix>> herm_basis;

    std::size_t dimension(std::size_t block) const { return herm_basis[block].size(); }
    // Projection of x onto the subspace (blockwise, real coefficients).
    BlockElement project(const BlockElement& x) const;
};

InvariantSubspace invariant_subspace(const std::vector<int>& dims,
                                     const std::vector<BlockElement>& gen_unitaries);
InvariantSubspace invariant_subspace(const WStarSystem& sys);

struct MaxResult {
    double value = 0;
    BlockState witness;
    std::string method_tag;
    double invariance_residual = 0;  // action residual of the witness
    double feasibility_residual = 0; // |state_eval(witness, a) - value|
    int iterations = 0;
    double final_gap = 0; // Frank-Wolfe only
    bool converged = true;
};

enum class Constraint { Full, Annihilator };

// Residual of a state under the action given by generator unitaries:
// max_g max_b || U^H t U - t ||_F on the weighted densities.
double state_invariance_residual(const BlockState& s,
                                 const std::vector<BlockElement>& gen_unitaries);

// m(a | K) by the fixed-point backend: project a onto the fixed subspace of
// the relevant action and take the top eigenvalue; the witness is the
// norming state of the projection, pre-composed with the projection.
//   Full:        Theta-invariant states on the domain algebra.
//   Annihilator: Theta-invariant states vanishing on ker iota, handled by
//                passing to the quotient model and pulling the witness back.
MaxResult m_value(const CStarModel& model, const BlockElement& a, Constraint constraint);

// Maximizing invariant state for a positive element of a W*-system.
BlockState maximizing_state(const WStarSystem& sys, const BlockElement& a);

// Independent oracle: Frank-Wolfe over the invariant spectrahedron, classic
// 2/(t+2) steps, 500 iterations or duality gap <= 1e-9.
MaxResult sdp_cross_check(const std::vector<int>& dims,
                          const std::vector<BlockElement>& gen_unitaries,
                          const BlockElement& a);
MaxResult sdp_cross_check(const WStarSystem& sys, const BlockElement& a);

} // namespace ergo
