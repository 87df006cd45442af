#include "ergo/kernels.hpp"

namespace ergo::kernels {

namespace {

void s_gemm_nn_acc(cplx* c, const cplx* a, const cplx* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        cplx* crow = c + i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a[i * n + k];
            if (aik == cplx{}) continue;
            const cplx* brow = b + k * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
}

void s_gemm_nh_acc(cplx* c, const cplx* a, const cplx* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx* arow = a + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const cplx* brow = b + j * n;
            cplx acc{};
            for (std::size_t k = 0; k < n; ++k) acc += arow[k] * std::conj(brow[k]);
            c[i * n + j] += acc;
        }
    }
}

void s_axpy(cplx* y, cplx alpha, const cplx* x, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

void s_axpy_conj(cplx* y, cplx alpha, const cplx* x, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) y[i] += alpha * std::conj(x[i]);
}

void s_scale_real(cplx* x, double alpha, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) x[i] *= alpha;
}

} // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable t{s_gemm_nn_acc, s_gemm_nh_acc, s_axpy,
                               s_axpy_conj,   s_scale_real,  "scalar"};
    return t;
}

} // namespace ergo::kernels
