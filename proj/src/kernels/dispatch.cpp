#include "rabi/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace rabi::kernels {

#ifdef RABI_HAVE_AVX2_TU
namespace avx2 {
const KernelTable& table() noexcept;
}
#endif

bool cpu_supports_avx2() noexcept {
#if defined(RABI_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* avx2_table() noexcept {
#ifdef RABI_HAVE_AVX2_TU
    if (cpu_supports_avx2()) return &avx2::table();
#endif
    return nullptr;
}

namespace {

const KernelTable& select() noexcept {
    const char* env = std::getenv("RABI_KERNELS");
    const std::string_view want = env ? env : "";
    if (want == "scalar") return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
    static const KernelTable& chosen = select();
    return chosen;
}

}  // namespace rabi::kernels
