#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace ergo::kernels {

using cplx = std::complex<double>;

// Row-major dense complex kernels. These are the arithmetic inner loops of
// the ergodic-average sweeps; everything else in the project calls them
// through the dispatched table below.
struct KernelTable {
    // C += A * B, all n x n row-major.
    void (*gemm_nn_acc)(cplx* c, const cplx* a, const cplx* b, std::size_t n);
    // C += A * B^H.
    void (*gemm_nh_acc)(cplx* c, const cplx* a, const cplx* b, std::size_t n);
    // y += alpha * x over len entries.
    void (*axpy)(cplx* y, cplx alpha, const cplx* x, std::size_t len);
    // y += alpha * conj(x) over len entries.
    void (*axpy_conj)(cplx* y, cplx alpha, const cplx* x, std::size_t len);
    // x *= alpha (real scale).
    void (*scale_real)(cplx* x, double alpha, std::size_t len);
    const char* name;
};

const KernelTable& scalar_kernels();
bool avx2_available();
const KernelTable& avx2_kernels(); // valid only if avx2_available()

// Active table: AVX2 when the CPU supports it, scalar otherwise.
// force_backend("scalar"|"avx2"|"auto") overrides selection (tests, CLI flag).
const KernelTable& active_kernels();
void force_backend(const std::string& name);
std::string active_backend_name();

} // namespace ergo::kernels
