#include <doctest.h>

#include <random>

#include "ergo/matrix.hpp"

using namespace ergo;

namespace {

ComplexMatrix from_rows(int n, std::initializer_list<cplx> entries) {
    ComplexMatrix m(n);
    int idx = 0;
    for (cplx v : entries) m.data()[idx++] = v;
    return m;
}

// Independent oracle: top singular value of x via power iteration on x^H x.
double power_iteration_norm(const ComplexMatrix& x) {
    const int n = x.dim();
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = cplx{1.0 + 0.1 * i, 0.05 * i};
    double lam = 0;
    for (int it = 0; it < 20000; ++it) {
        std::vector<cplx> w(static_cast<std::size_t>(n), cplx{0, 0});
        // w = x v
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w[i] += x(i, j) * v[j];
        // u = x^H w
        std::vector<cplx> u(static_cast<std::size_t>(n), cplx{0, 0});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) u[j] += std::conj(x(i, j)) * w[i];
        double norm = 0;
        for (auto c : u) norm += std::norm(c);
        norm = std::sqrt(norm);
        double vnorm = 0;
        for (auto c : v) vnorm += std::norm(c);
        lam = norm / std::max(vnorm, 1e-300);
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] / norm;
    }
    return std::sqrt(lam);
}

} // namespace

TEST_CASE("operator norm closed forms") {
    CHECK(operator_norm(ComplexMatrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-12));
    auto ones = from_rows(2, {1, 1, 1, 1});
    CHECK(operator_norm(ones) == doctest::Approx(2.0).epsilon(1e-12));
    auto d = from_rows(2, {cplx{-3, 0}, 0, 0, cplx{2, 0}});
    CHECK(operator_norm(d) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("operator norm matches a power-iteration oracle") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + static_cast<int>(rng() % 7);
        auto h = random_hermitian(n, rng);
        CHECK(operator_norm(h) == doctest::Approx(power_iteration_norm(h)).epsilon(1e-8));
    }
}

TEST_CASE("norm is a C*-norm and is unitarily invariant") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + static_cast<int>(rng() % 6);
        auto x = random_hermitian(n, rng);
        auto u = random_unitary(n, rng);
        // ||x^H x|| = ||x||^2
        const double nx = operator_norm(x);
        CHECK(operator_norm(x.adjoint().mul(x)) == doctest::Approx(nx * nx).epsilon(1e-9));
        CHECK(operator_norm(u.mul(x).mul_adjoint(u)) == doctest::Approx(nx).epsilon(1e-10));
    }
}

TEST_CASE("psd check distinguishes the failure modes") {
    BlockElement id{{ComplexMatrix::identity(2)}};
    CHECK(psd_check(id, 1e-9) == PsdVerdict::Psd);

    BlockElement indef{{from_rows(2, {1, 0, 0, cplx{-1, 0}})}};
    CHECK(psd_check(indef, 1e-9) == PsdVerdict::NotPsd);

    BlockElement pos{{from_rows(2, {2, 1, 1, 2})}};
    CHECK(psd_check(pos, 1e-9) == PsdVerdict::Psd);
    CHECK(is_psd(pos));

    BlockElement nonherm{{from_rows(2, {0, 1, 0, 0})}};
    CHECK(psd_check(nonherm, 1e-9) == PsdVerdict::NotHermitian);
}

TEST_CASE("state evaluation") {
    BlockState pure{{1.0}, {from_rows(2, {1, 0, 0, 0})}};
    BlockElement a{{from_rows(2, {3, 0, 0, 5})}};
    CHECK(state_eval(pure, a).real() == doctest::Approx(3.0));

    auto mixed = BlockState::maximally_mixed({2});
    BlockElement ones{{from_rows(2, {1, 1, 1, 1})}};
    CHECK(state_eval(mixed, ones).real() == doctest::Approx(1.0));
    // unitality
    CHECK(state_eval(mixed, BlockElement::identity({2})).real() == doctest::Approx(1.0));

    // two-block state: 0.25 * tr(rho_0 x_0) + 0.75 * tr(rho_1 x_1)
    BlockState two{{0.25, 0.75},
                   {from_rows(1, {1}), from_rows(2, {0.5, 0, 0, 0.5})}};
    two.validate();
    BlockElement x{{from_rows(1, {4}), ComplexMatrix::identity(2)}};
    CHECK(state_eval(two, x).real() == doctest::Approx(0.25 * 4 + 0.75));
}

TEST_CASE("state validation rejects bad data") {
    BlockState notrace{{1.0}, {from_rows(2, {1, 0, 0, 1})}}; // trace 2
    CHECK_THROWS(notrace.validate());
    BlockState negweight{{-0.5, 1.5}, {from_rows(1, {1}), from_rows(1, {1})}};
    CHECK_THROWS(negweight.validate());
    BlockState notpsd{{1.0}, {from_rows(2, {2, 0, 0, cplx{-1, 0}})}};
    CHECK_THROWS(notpsd.validate());
}

TEST_CASE("norming state picks the documented representative") {
    // diag(1,4): top eigenvector is e2.
    BlockElement d{{from_rows(2, {1, 0, 0, 4})}};
    auto s = norming_state(d);
    CHECK(state_eval(s, d).real() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(std::abs(s.densities[0](1, 1) - cplx{1, 0}) < 1e-12);

    // identity: degenerate top eigenvalue resolves to e1.
    BlockElement id{{ComplexMatrix::identity(3)}};
    auto si = norming_state(id);
    CHECK(std::abs(si.densities[0](0, 0) - cplx{1, 0}) < 1e-12);
    CHECK(std::abs(si.densities[0](1, 1)) < 1e-12);

    // all-ones matrix: top eigenvector (1,1)/sqrt(2).
    BlockElement ones{{from_rows(2, {1, 1, 1, 1})}};
    auto so = norming_state(ones);
    CHECK(state_eval(so, ones).real() == doctest::Approx(2.0).epsilon(1e-12));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(so.densities[0](i, j) - cplx{0.5, 0}) < 1e-12);

    // block tie: both blocks reach the norm, smallest index wins.
    BlockElement tie{{from_rows(1, {2}), from_rows(1, {2})}};
    auto st = norming_state(tie);
    CHECK(st.weights[0] == doctest::Approx(1.0));
    CHECK(st.weights[1] == doctest::Approx(0.0));
}

TEST_CASE("norming state attains the norm of positive elements") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 100; ++t) {
        auto x = random_positive({2, 3}, rng);
        auto s = norming_state(x);
        s.validate();
        CHECK(std::abs(state_eval(s, x).real() - operator_norm(x)) < 1e-10);
        CHECK(std::abs(state_eval(s, x).imag()) < 1e-12);
    }
}

TEST_CASE("states are bounded by the norm") {
    std::mt19937_64 rng(24);
    for (int t = 0; t < 50; ++t) {
        auto x = random_positive({3}, rng);
        BlockState s{{1.0}, {random_density(3, rng)}};
        CHECK(state_eval(s, x).real() <= operator_norm(x) + 1e-10);
        CHECK(state_eval(s, x).real() >= -1e-12);
    }
}

TEST_CASE("hermitian eigendecomposition reconstructs the matrix") {
    std::mt19937_64 rng(25);
    auto h = random_hermitian(4, rng);
    auto ed = hermitian_eig(h);
    // h v_k = lambda_k v_k columnwise
    for (int k = 0; k < 4; ++k) {
        for (int i = 0; i < 4; ++i) {
            cplx lhs{0, 0};
            for (int j = 0; j < 4; ++j) lhs += h(i, j) * ed.vectors(j, k);
            CHECK(std::abs(lhs - ed.eigenvalues[static_cast<std::size_t>(k)] * ed.vectors(i, k)) <
                  1e-10);
        }
    }
    CHECK(std::is_sorted(ed.eigenvalues.begin(), ed.eigenvalues.end()));
}

TEST_CASE("random samplers have the advertised structure") {
    std::mt19937_64 rng(26);
    auto u = random_unitary(5, rng);
    CHECK((u.mul_adjoint(u) - ComplexMatrix::identity(5)).max_abs() < 1e-12);
    auto rho = random_density(4, rng);
    CHECK(std::abs(rho.trace() - cplx{1, 0}) < 1e-12);
    CHECK(is_psd(BlockElement{{rho}}, 1e-12));
    auto h = random_hermitian(4, rng);
    CHECK((h - h.adjoint()).max_abs() < 1e-15);
}
