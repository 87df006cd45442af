// Compiled with -mavx2 -mfma (see CMakeLists); only entered after a runtime
// CPU check in kernels_dispatch.cpp.
#include "ergo/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace ergo::kernels {

namespace {

// 2 complex doubles per __m256d, interleaved [re0, im0, re1, im1].

inline __m256d cswap(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

inline __m256d conj2(__m256d v) {
    const __m256d mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
    return _mm256_xor_pd(v, mask);
}

// acc + (ar + i*ai) * v, with ar/ai broadcast.
inline __m256d cmadd(__m256d ar, __m256d ai, __m256d v, __m256d acc) {
    const __m256d t = _mm256_addsub_pd(_mm256_mul_pd(ar, v), _mm256_mul_pd(ai, cswap(v)));
    return _mm256_add_pd(acc, t);
}

void a_gemm_nn_acc(cplx* c, const cplx* a, const cplx* b, std::size_t n) {
    const auto* ad = reinterpret_cast<const double*>(a);
    const auto* bd = reinterpret_cast<const double*>(b);
    auto* cd = reinterpret_cast<double*>(c);
    const std::size_t nv = n & ~std::size_t{1};
    for (std::size_t i = 0; i < n; ++i) {
        double* crow = cd + 2 * i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const __m256d ar = _mm256_set1_pd(ad[2 * (i * n + k)]);
            const __m256d ai = _mm256_set1_pd(ad[2 * (i * n + k) + 1]);
            const double* brow = bd + 2 * k * n;
            std::size_t j = 0;
            for (; j < nv; j += 2) {
                const __m256d bv = _mm256_loadu_pd(brow + 2 * j);
                const __m256d cv = _mm256_loadu_pd(crow + 2 * j);
                _mm256_storeu_pd(crow + 2 * j, cmadd(ar, ai, bv, cv));
            }
            if (j < n) {
                const cplx aik = a[i * n + k];
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
}

void a_gemm_nh_acc(cplx* c, const cplx* a, const cplx* b, std::size_t n) {
    const auto* ad = reinterpret_cast<const double*>(a);
    const auto* bd = reinterpret_cast<const double*>(b);
    const std::size_t nv = n & ~std::size_t{1};
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = ad + 2 * i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* brow = bd + 2 * j * n;
            // sum_k a_ik * conj(b_jk): accP accumulates a.*b (re parts pair up),
            // accQ accumulates swap(a).*b (im parts).
            __m256d accP = _mm256_setzero_pd();
            __m256d accQ = _mm256_setzero_pd();
            std::size_t k = 0;
            for (; k < nv; k += 2) {
                const __m256d av = _mm256_loadu_pd(arow + 2 * k);
                const __m256d bv = _mm256_loadu_pd(brow + 2 * k);
                accP = _mm256_fmadd_pd(av, bv, accP);
                accQ = _mm256_fmadd_pd(cswap(av), bv, accQ);
            }
            alignas(32) double p[4], q[4];
            _mm256_store_pd(p, accP);
            _mm256_store_pd(q, accQ);
            double re = p[0] + p[1] + p[2] + p[3];
            double im = (q[0] - q[1]) + (q[2] - q[3]);
            for (; k < n; ++k) {
                const cplx v = a[i * n + k] * std::conj(b[j * n + k]);
                re += v.real();
                im += v.imag();
            }
            c[i * n + j] += cplx{re, im};
        }
    }
}

void a_axpy(cplx* y, cplx alpha, const cplx* x, std::size_t len) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    const std::size_t lv = len & ~std::size_t{1};
    std::size_t i = 0;
    for (; i < lv; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, cmadd(ar, ai, xv, yv));
    }
    for (; i < len; ++i) y[i] += alpha * x[i];
}

void a_axpy_conj(cplx* y, cplx alpha, const cplx* x, std::size_t len) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    const std::size_t lv = len & ~std::size_t{1};
    std::size_t i = 0;
    for (; i < lv; i += 2) {
        const __m256d xv = conj2(_mm256_loadu_pd(xd + 2 * i));
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, cmadd(ar, ai, xv, yv));
    }
    for (; i < len; ++i) y[i] += alpha * std::conj(x[i]);
}

void a_scale_real(cplx* x, double alpha, std::size_t len) {
    const __m256d av = _mm256_set1_pd(alpha);
    auto* xd = reinterpret_cast<double*>(x);
    const std::size_t lv = len & ~std::size_t{1};
    std::size_t i = 0;
    for (; i < lv; i += 2)
        _mm256_storeu_pd(xd + 2 * i, _mm256_mul_pd(av, _mm256_loadu_pd(xd + 2 * i)));
    for (; i < len; ++i) x[i] *= alpha;
}

} // namespace

const KernelTable& avx2_kernels() {
    static const KernelTable t{a_gemm_nn_acc, a_gemm_nh_acc, a_axpy,
                               a_axpy_conj,   a_scale_real,  "avx2"};
    return t;
}

} // namespace ergo::kernels

#else

namespace ergo::kernels {
const KernelTable& avx2_kernels() { return scalar_kernels(); }
} // namespace ergo::kernels

#endif
