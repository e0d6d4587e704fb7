#include "coulombflow/kernels.hpp"

#include "kernels_impl.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace coulombflow::kernels {

namespace {

const KernelTable scalar_table{Isa::scalar,          "scalar",         scalar::upwind_flux,
                               scalar::flux_divergence, scalar::sum,    scalar::sum_abs,
                               scalar::sum_sq,       scalar::max_abs,  scalar::weighted_sum_sq,
                               scalar::abs_diff_sum};

#ifdef COULOMBFLOW_HAVE_AVX2_BUILD
const KernelTable avx2_table{Isa::avx2,          "avx2",         avx2::upwind_flux,
                             avx2::flux_divergence, avx2::sum,    avx2::sum_abs,
                             avx2::sum_sq,       avx2::max_abs,  avx2::weighted_sum_sq,
                             avx2::abs_diff_sum};
#endif

const KernelTable& choose() {
    const char* env = std::getenv("COULOMBFLOW_SIMD");
    std::string_view want = env ? env : "auto";
    if (want == "scalar") return scalar_table;
    if (want == "avx2") {
        if (!isa_available(Isa::avx2)) throw std::runtime_error("COULOMBFLOW_SIMD=avx2 but the CPU lacks AVX2");
        return table(Isa::avx2);
    }
    if (want != "auto") throw std::runtime_error("COULOMBFLOW_SIMD must be scalar, avx2 or auto");
    return isa_available(Isa::avx2) ? table(Isa::avx2) : scalar_table;
}

} // namespace

bool isa_available(Isa isa) {
    if (isa == Isa::scalar) return true;
#ifdef COULOMBFLOW_HAVE_AVX2_BUILD
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable& table(Isa isa) {
    if (isa == Isa::scalar) return scalar_table;
#ifdef COULOMBFLOW_HAVE_AVX2_BUILD
    if (isa_available(Isa::avx2)) return avx2_table;
#endif
    throw std::runtime_error("AVX2 kernels unavailable on this machine");
}

const KernelTable& active() {
    static const KernelTable& chosen = choose();
    return chosen;
}

} // namespace coulombflow::kernels
