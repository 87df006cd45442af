#include "ergo/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ergo {

namespace {

using EMat = Eigen::MatrixXcd;

EMat to_eigen(const ComplexMatrix& x) {
    EMat m(x.dim(), x.dim());
    for (int i = 0; i < x.dim(); ++i)
        for (int j = 0; j < x.dim(); ++j) m(i, j) = x(i, j);
    return m;
}

ComplexMatrix from_eigen(const EMat& m) {
    ComplexMatrix x(static_cast<int>(m.rows()));
    for (int i = 0; i < x.dim(); ++i)
        for (int j = 0; j < x.dim(); ++j) x(i, j) = m(i, j);
    return x;
}

void check_same_dims(const BlockElement& a, const BlockElement& b) {
    if (a.blocks.size() != b.blocks.size())
        throw std::invalid_argument("block count mismatch");
    for (std::size_t i = 0; i < a.blocks.size(); ++i)
        if (a.blocks[i].dim() != b.blocks[i].dim())
            throw std::invalid_argument("block dimension mismatch");
}

} // namespace

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix x(n);
    for (int i = 0; i < n; ++i) x(i, i) = 1.0;
    return x;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::mul(const ComplexMatrix& rhs) const {
    if (rhs.n_ != n_) throw std::invalid_argument("mul: dimension mismatch");
    ComplexMatrix r(n_);
    kernels::active_kernels().gemm_nn_acc(r.data(), data(), rhs.data(),
                                          static_cast<std::size_t>(n_));
    return r;
}

ComplexMatrix ComplexMatrix::mul_adjoint(const ComplexMatrix& rhs) const {
    if (rhs.n_ != n_) throw std::invalid_argument("mul_adjoint: dimension mismatch");
    ComplexMatrix r(n_);
    kernels::active_kernels().gemm_nh_acc(r.data(), data(), rhs.data(),
                                          static_cast<std::size_t>(n_));
    return r;
}

void ComplexMatrix::add_scaled(const ComplexMatrix& x, cplx alpha) {
    if (x.n_ != n_) throw std::invalid_argument("add_scaled: dimension mismatch");
    kernels::active_kernels().axpy(data(), alpha, x.data(), size());
}

void ComplexMatrix::scale(double alpha) {
    kernels::active_kernels().scale_real(data(), alpha, size());
}

ComplexMatrix ComplexMatrix::hermitized() const {
    ComplexMatrix r = adjoint();
    r.add_scaled(*this, 1.0);
    r.scale(0.5);
    return r;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0;
    for (const cplx& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0;
    for (const cplx& v : data_) m = std::max(m, std::abs(v));
    return m;
}

cplx ComplexMatrix::trace() const {
    cplx t{};
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r = a;
    r.add_scaled(b, 1.0);
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r = a;
    r.add_scaled(b, -1.0);
    return r;
}

std::vector<int> BlockElement::dims() const {
    std::vector<int> d;
    d.reserve(blocks.size());
    for (const auto& b : blocks) d.push_back(b.dim());
    return d;
}

BlockElement BlockElement::adjoint() const {
    BlockElement r;
    for (const auto& b : blocks) r.blocks.push_back(b.adjoint());
    return r;
}

BlockElement BlockElement::mul(const BlockElement& rhs) const {
    check_same_dims(*this, rhs);
    BlockElement r;
    for (std::size_t i = 0; i < blocks.size(); ++i)
        r.blocks.push_back(blocks[i].mul(rhs.blocks[i]));
    return r;
}

void BlockElement::add_scaled(const BlockElement& x, cplx alpha) {
    check_same_dims(*this, x);
    for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i].add_scaled(x.blocks[i], alpha);
}

void BlockElement::scale(double alpha) {
    for (auto& b : blocks) b.scale(alpha);
}

BlockElement BlockElement::hermitized() const {
    BlockElement r;
    for (const auto& b : blocks) r.blocks.push_back(b.hermitized());
    return r;
}

BlockElement BlockElement::identity(const std::vector<int>& dims) {
    BlockElement r;
    for (int n : dims) r.blocks.push_back(ComplexMatrix::identity(n));
    return r;
}

BlockElement BlockElement::zero(const std::vector<int>& dims) {
    BlockElement r;
    for (int n : dims) r.blocks.emplace_back(n);
    return r;
}

BlockElement operator+(const BlockElement& a, const BlockElement& b) {
    BlockElement r = a;
    r.add_scaled(b, 1.0);
    return r;
}

BlockElement operator-(const BlockElement& a, const BlockElement& b) {
    BlockElement r = a;
    r.add_scaled(b, -1.0);
    return r;
}

BlockState BlockState::maximally_mixed(const std::vector<int>& dims) {
    BlockState s;
    const double w = 1.0 / static_cast<double>(dims.size());
    for (int n : dims) {
        s.weights.push_back(w);
        ComplexMatrix d = ComplexMatrix::identity(n);
        d.scale(1.0 / n);
        s.densities.push_back(std::move(d));
    }
    return s;
}

void BlockState::validate(double herm_tol, double psd_tol, double trace_tol,
                          double weight_tol) const {
    if (weights.size() != densities.size())
        throw std::invalid_argument("state: weight/density count mismatch");
    double wsum = 0;
    for (double w : weights) {
        if (w < -weight_tol) throw std::invalid_argument("state: negative weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > weight_tol)
        throw std::invalid_argument("state: weights do not sum to 1");
    for (const auto& d : densities) {
        if ((d - d.adjoint()).max_abs() > herm_tol)
            throw std::invalid_argument("state: density not Hermitian");
        if (std::abs(d.trace().real() - 1.0) > trace_tol)
            throw std::invalid_argument("state: density trace != 1");
        const auto eig = hermitian_eig(d);
        if (eig.eigenvalues.front() < -psd_tol)
            throw std::invalid_argument("state: density has a negative eigenvalue");
    }
}

double operator_norm(const ComplexMatrix& x) {
    // largest singular value = sqrt of top eigenvalue of x^H x
    const EMat m = to_eigen(x);
    Eigen::SelfAdjointEigenSolver<EMat> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(top, 0.0));
}

double operator_norm(const BlockElement& x) {
    double m = 0;
    for (const auto& b : x.blocks) m = std::max(m, operator_norm(b));
    return m;
}

PsdVerdict psd_check(const BlockElement& x, double tol) {
    for (const auto& b : x.blocks)
        if ((b - b.adjoint()).max_abs() > tol) return PsdVerdict::NotHermitian;
    for (const auto& b : x.blocks) {
        const auto eig = hermitian_eig(b);
        if (eig.eigenvalues.front() < -tol) return PsdVerdict::NotPsd;
    }
    return PsdVerdict::Psd;
}

bool is_psd(const BlockElement& x, double tol) { return psd_check(x, tol) == PsdVerdict::Psd; }

cplx state_eval(const BlockState& s, const BlockElement& x) {
    if (s.densities.size() != x.blocks.size())
        throw std::invalid_argument("state_eval: signature mismatch");
    cplx v{};
    for (std::size_t i = 0; i < x.blocks.size(); ++i) {
        if (s.densities[i].dim() != x.blocks[i].dim())
            throw std::invalid_argument("state_eval: block dimension mismatch");
        v += s.weights[i] * s.densities[i].mul(x.blocks[i]).trace();
    }
    return v;
}

EigenDecomposition hermitian_eig(const ComplexMatrix& x) {
    Eigen::SelfAdjointEigenSolver<EMat> es(to_eigen(x.hermitized()));
    EigenDecomposition r;
    r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + x.dim());
    r.vectors = from_eigen(es.eigenvectors());
    return r;
}

BlockState norming_state(const BlockElement& x) {
    const auto verdict = psd_check(x, 1e-9);
    if (verdict == PsdVerdict::NotHermitian)
        throw std::invalid_argument("norming_state: input not Hermitian");
    if (verdict == PsdVerdict::NotPsd)
        throw std::invalid_argument("norming_state: input not positive");

    int best_block = 0;
    double best_val = -1;
    std::vector<EigenDecomposition> eigs;
    for (std::size_t i = 0; i < x.blocks.size(); ++i) {
        eigs.push_back(hermitian_eig(x.blocks[i]));
        const double top = eigs.back().eigenvalues.back();
        if (top > best_val + 1e-15) { // ties keep the smallest block index
            best_val = top;
            best_block = static_cast<int>(i);
        }
    }

    const auto& eig = eigs[best_block];
    const int n = x.blocks[best_block].dim();
    // degenerate top eigenvalue: take the first column attaining the max,
    // so e.g. the identity yields the pure state on e_1
    const double top = eig.eigenvalues.back();
    int col = n - 1;
    for (int i = 0; i < n; ++i) {
        if (eig.eigenvalues[i] >= top - 1e-12 * std::max(1.0, std::abs(top))) {
            col = i;
            break;
        }
    }
    std::vector<cplx> v(n);
    for (int i = 0; i < n; ++i) v[i] = eig.vectors(i, col);
    // phase-fix: first nonzero coordinate real-positive
    for (int i = 0; i < n; ++i) {
        if (std::abs(v[i]) > 1e-12) {
            const cplx phase = std::conj(v[i]) / std::abs(v[i]);
            for (auto& c : v) c *= phase;
            break;
        }
    }

    BlockState s = BlockState::maximally_mixed(x.dims());
    for (auto& w : s.weights) w = 0.0;
    s.weights[best_block] = 1.0;
    ComplexMatrix proj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) proj(i, j) = v[i] * std::conj(v[j]);
    s.densities[best_block] = std::move(proj);
    return s;
}

ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix x(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x(i, j) = cplx{dist(rng), dist(rng)};
    return x.hermitized();
}

ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    EMat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = cplx{dist(rng), dist(rng)};
    Eigen::HouseholderQR<EMat> qr(g);
    EMat q = qr.householderQ() * EMat::Identity(n, n);
    // fix the phase of R's diagonal so the distribution is Haar
    EMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const cplx d = r(j, j);
        q.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : cplx{1, 0});
    }
    return from_eigen(q);
}

ComplexMatrix random_density(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    EMat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = cplx{dist(rng), dist(rng)};
    EMat d = g * g.adjoint();
    d /= d.trace().real();
    return from_eigen(d);
}

BlockElement random_positive(const std::vector<int>& dims, std::mt19937_64& rng) {
    BlockElement x;
    for (int n : dims) {
        ComplexMatrix h = random_hermitian(n, rng);
        ComplexMatrix sq = h.mul(h); // h^2 is positive
        x.blocks.push_back(std::move(sq));
    }
    return x;
}

} // namespace ergo
