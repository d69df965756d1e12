#include "pcreg/kern/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace pcreg::kern {

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

namespace {

const KernelTable* pick() {
    const char* mode = std::getenv("PCREG_SIMD");
    if (mode && std::strcmp(mode, "scalar") == 0) return &scalar_kernels();
    if (mode && std::strcmp(mode, "avx2") == 0) {
        if (const KernelTable* t = avx2_kernels(); t && cpu_supports_avx2()) return t;
        return &scalar_kernels();
    }
    if (const KernelTable* t = avx2_kernels(); t && cpu_supports_avx2()) return t;
    return &scalar_kernels();
}

}  // namespace

const KernelTable& active() {
    static const KernelTable* chosen = pick();
    return *chosen;
}

}  // namespace pcreg::kern
