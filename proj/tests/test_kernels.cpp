#include <doctest.h>

#include <random>
#include <vector>

#include "ergo/kernels.hpp"

using namespace ergo::kernels;

namespace {

std::vector<cplx> random_array(std::size_t len, std::mt19937_64& rng) {
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<cplx> v(len);
    for (auto& x : v) x = cplx{d(rng), d(rng)};
    return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("gemm_nn against a hand example") {
    // [[1,i],[0,2]] * [[1,0],[1,1]] = [[1+i, i],[2,2]]
    std::vector<cplx> a{{1, 0}, {0, 1}, {0, 0}, {2, 0}};
    std::vector<cplx> b{{1, 0}, {0, 0}, {1, 0}, {1, 0}};
    std::vector<cplx> c(4);
    scalar_kernels().gemm_nn_acc(c.data(), a.data(), b.data(), 2);
    CHECK(std::abs(c[0] - cplx{1, 1}) < 1e-15);
    CHECK(std::abs(c[1] - cplx{0, 1}) < 1e-15);
    CHECK(std::abs(c[2] - cplx{2, 0}) < 1e-15);
    CHECK(std::abs(c[3] - cplx{2, 0}) < 1e-15);
}

TEST_CASE("SIMD variants agree with the scalar reference") {
    if (!avx2_available()) return; // nothing to compare on this CPU
    const KernelTable& sc = scalar_kernels();
    const KernelTable& vec = avx2_kernels();
    std::mt19937_64 rng(7);

    for (std::size_t n : {1, 2, 3, 4, 5, 7, 8, 16, 33}) {
        const auto a = random_array(n * n, rng);
        const auto b = random_array(n * n, rng);

        auto c1 = random_array(n * n, rng);
        auto c2 = c1;
        sc.gemm_nn_acc(c1.data(), a.data(), b.data(), n);
        vec.gemm_nn_acc(c2.data(), a.data(), b.data(), n);
        CHECK(max_diff(c1, c2) < 1e-11);

        c1 = random_array(n * n, rng);
        c2 = c1;
        sc.gemm_nh_acc(c1.data(), a.data(), b.data(), n);
        vec.gemm_nh_acc(c2.data(), a.data(), b.data(), n);
        CHECK(max_diff(c1, c2) < 1e-11);
    }

    for (std::size_t len : {1, 2, 5, 64, 129}) {
        const cplx alpha{0.7, -1.3};
        const auto x = random_array(len, rng);
        auto y1 = random_array(len, rng);
        auto y2 = y1;
        sc.axpy(y1.data(), alpha, x.data(), len);
        vec.axpy(y2.data(), alpha, x.data(), len);
        CHECK(max_diff(y1, y2) < 1e-13);

        y1 = random_array(len, rng);
        y2 = y1;
        sc.axpy_conj(y1.data(), alpha, x.data(), len);
        vec.axpy_conj(y2.data(), alpha, x.data(), len);
        CHECK(max_diff(y1, y2) < 1e-13);

        y1 = random_array(len, rng);
        y2 = y1;
        sc.scale_real(y1.data(), -2.5, len);
        vec.scale_real(y2.data(), -2.5, len);
        CHECK(max_diff(y1, y2) < 1e-13);
    }
}

TEST_CASE("backend forcing") {
    force_backend("scalar");
    CHECK(active_backend_name() == "scalar");
    force_backend("auto");
    if (avx2_available()) CHECK(active_backend_name() == "avx2");
    CHECK_THROWS(force_backend("sse9"));
}
