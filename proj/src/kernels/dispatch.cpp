#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"

namespace phishmatch::kernels {

const KernelTable* avx2() {
#if defined(__x86_64__) || defined(__i386__)
    static const bool supported = __builtin_cpu_supports("avx2");
    static const KernelTable table{Isa::Avx2, "avx2", avx2_impl::histogram_within, avx2_impl::osa_batch,
                                   avx2_impl::soft_threshold};
    return supported ? &table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* force = std::getenv("PHISHMATCH_KERNELS");
        if (force && std::strcmp(force, "scalar") == 0) return scalar();
        if (const KernelTable* t = avx2()) return *t;
        return scalar();
    }();
    return chosen;
}

}  // namespace phishmatch::kernels
