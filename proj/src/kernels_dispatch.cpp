#include "ergo/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace ergo::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {
std::atomic<const KernelTable*> g_forced{nullptr};
} // namespace

const KernelTable& active_kernels() {
    if (const KernelTable* f = g_forced.load(std::memory_order_relaxed)) return *f;
    return avx2_available() ? avx2_kernels() : scalar_kernels();
}

void force_backend(const std::string& name) {
    if (name == "auto") {
        g_forced.store(nullptr);
    } else if (name == "scalar") {
        g_forced.store(&scalar_kernels());
    } else if (name == "avx2") {
        if (!avx2_available()) throw std::runtime_error("avx2 not supported on this CPU");
        g_forced.store(&avx2_kernels());
    } else {
        throw std::invalid_argument("unknown kernel backend: " + name);
    }
}

std::string active_backend_name() { return active_kernels().name; }

} // namespace ergo::kernels
