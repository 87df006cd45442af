#pragma once

#include <complex>
#include <random>
#include <vector>

#include "ergo/kernels.hpp"

namespace ergo {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major. Products run through the
// dispatched kernels; spectral work converts to Eigen internally.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}

    static ComplexMatrix identity(int n);

    int dim() const { return n_; }
    cplx& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
    const cplx& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * n_ + j];
    }
    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    ComplexMatrix adjoint() const;
    ComplexMatrix mul(const ComplexMatrix& rhs) const;        // this * rhs
    ComplexMatrix mul_adjoint(const ComplexMatrix& rhs) const; // this * rhs^H
    void add_scaled(const ComplexMatrix& x, cplx alpha);      // this += alpha x
    void scale(double alpha);
    ComplexMatrix hermitized() const; // (x + x^H)/2

    double frobenius_norm() const;
    double max_abs() const;
    cplx trace() const;

    bool operator==(const ComplexMatrix&) const = default;

private:
    int n_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

// Element of a direct sum of full matrix algebras.
struct BlockElement {
    std::vector<ComplexMatrix> blocks;

    std::vector<int> dims() const;
    BlockElement adjoint() const;
    BlockElement mul(const BlockElement& rhs) const;
    void add_scaled(const BlockElement& x, cplx alpha);
    void scale(double alpha);
    BlockElement hermitized() const;
    static BlockElement identity(const std::vector<int>& dims);
    static BlockElement zero(const std::vector<int>& dims);
};

BlockElement operator+(const BlockElement& a, const BlockElement& b);
BlockElement operator-(const BlockElement& a, const BlockElement& b);

// State on a block algebra: convex weights times per-block density matrices.
// s(x) = sum_i w_i tr(s_i x_i).
struct BlockState {
    std::vector<double> weights;
    std::vector<ComplexMatrix> densities;

    static BlockState maximally_mixed(const std::vector<int>& dims);
    // Throws std::invalid_argument naming the violated condition.
    void validate(double herm_tol = 1e-12, double psd_tol = 1e-9,
                  double trace_tol = 1e-10, double weight_tol = 1e-12) const;
};

double operator_norm(const ComplexMatrix& x);
double operator_norm(const BlockElement& x);

// Distinguishes "not PSD" from "not even Hermitian".
enum class PsdVerdict { Psd, NotPsd, NotHermitian };
PsdVerdict psd_check(const BlockElement& x, double tol);
bool is_psd(const BlockElement& x, double tol = 1e-9);

cplx state_eval(const BlockState& s, const BlockElement& x);

// State attaining the norm of a positive element: rank-one projection onto a
// top eigenvector of the block with the largest eigenvalue. Ties break to the
// smallest block index; the eigenvector's first nonzero coordinate is made
// real-positive so repeated runs give the same state.
BlockState norming_state(const BlockElement& x);

// Hermitian eigendecomposition, ascending eigenvalues (wraps the solver so
// call sites stay Eigen-free). Input is symmetrized first.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix vectors; // eigenvectors as columns, same order
};
EigenDecomposition hermitian_eig(const ComplexMatrix& x);

// Seeded sampling helpers (shared by tests and the example generator).
ComplexMatrix random_hermitian(int n, std::mt19937_64& rng);
ComplexMatrix random_unitary(int n, std::mt19937_64& rng);
ComplexMatrix random_density(int n, std::mt19937_64& rng);
BlockElement random_positive(const std::vector<int>& dims, std::mt19937_64& rng);

} // namespace ergo
