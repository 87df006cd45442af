#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "ergo/group.hpp"
#include "ergo/matrix.hpp"

namespace ergo {

// Finite-dimensional W*-dynamical system: block algebra, faithful invariant
// state rho, and a unitarily implemented group action given on generators.
struct WStarSystem {
    std::vector<int> dims;
    BlockState rho;
    std::shared_ptr<const GroupModel> group;
    std::vector<BlockElement> gen_unitaries; // one per group generator

    FolnerFamily folner() const { return FolnerFamily(group); }
};

struct CheckResult {
    std::string name;
    double residual = 0;
    double tol = 0;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool ok() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    std::string first_failure() const {
        for (const auto& c : checks)
            if (!c.pass) return c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
        return {};
    }
};

// Checks unitarity, rho-invariance, faithfulness of rho, and that every
// group relation evaluates to the identity in the unitaries.
ValidationReport validate_system(const WStarSystem& sys);

// Evaluates group elements to unitaries along normal-form words (powers of
// the generator unitaries, memoized). Finite groups are expanded breadth
// first from the identity.
class ActionEvaluator {
public:
    explicit ActionEvaluator(const WStarSystem& sys);

    const WStarSystem& system() const { return *sys_; }
    const BlockElement& unitary(const GroupElement& g);
    // Xi_g(x) = U_g x U_g^H blockwise.
    BlockElement act(const GroupElement& g, const BlockElement& x);

private:
    const BlockElement& generator_power(std::size_t gen, std::int64_t exp);
    void expand_finite();

    const WStarSystem* sys_;
    std::unordered_map<GroupElement, BlockElement, GroupElementHash> memo_;
    std::vector<std::unordered_map<std::int64_t, BlockElement>> powers_;
    bool finite_expanded_ = false;
};

// (1/|F_k|) sum over F_k of Xi_g(x), by direct summation.
BlockElement ergodic_average(ActionEvaluator& eval, const BlockElement& x, std::size_t k);

struct NormPoint {
    std::size_t k = 0;
    std::size_t folner_size = 0;
    double norm = 0;
};

std::vector<NormPoint> norm_sequence(ActionEvaluator& eval, const BlockElement& x,
                                     const std::vector<std::size_t>& ks);

// Incremental Folner averaging. The shipped families are nested in k, so the
// unnormalized sum superoperator is extended element by element; the cost of
// a whole sweep is one pass over the largest set. Superoperators act on
// row-major vec'd blocks.
class AverageSweep {
public:
    explicit AverageSweep(ActionEvaluator& eval);

    void advance_to(std::size_t k); // k must not decrease
    std::size_t current_k() const { return current_k_; }
    std::size_t folner_size() const { return count_; }
    BlockElement average(const BlockElement& x) const;

private:
    ActionEvaluator* eval_;
    std::size_t current_k_ = 0;
    std::size_t count_ = 0;
    std::vector<ComplexMatrix> sum_; // per block, n^2 x n^2
};

// Orthogonal projection (Hilbert-Schmidt geometry) onto the joint fixed
// subspace {y : U_g y U_g^H = y for all generators}, solved per block by
// intersecting the eigenvalue-1 spaces of the conjugation superoperators.
class FixedPointProjector {
public:
    FixedPointProjector(const std::vector<int>& dims,
                        const std::vector<BlockElement>& gen_unitaries,
                        double rel_threshold = 1e-8);

    BlockElement apply(const BlockElement& x) const;
    // Per block: orthonormal basis matrices of the fixed subspace.
    const std::vector<std::vector<ComplexMatrix>>& basis() const { return basis_; }
    std::size_t dimension(std::size_t block) const { return basis_[block].size(); }
    // Set when singular values cluster within a decade of the rank cut.
    bool threshold_ambiguous() const { return ambiguous_; }

private:
    std::vector<std::vector<ComplexMatrix>> basis_;
    bool ambiguous_ = false;
};

BlockElement mean_ergodic_projection(const WStarSystem& sys, const BlockElement& x);

} // namespace ergo
