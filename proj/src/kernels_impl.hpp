#pragma once

#include <cstddef>

namespace coulombflow::kernels {

#define COULOMBFLOW_KERNEL_DECLS                                                                                       \
    void upwind_flux(const double* a, const double* ml, const double* mr, const double* ul, const double* ur,         \
                     double visc, double* out, std::size_t n);                                                        \
    void flux_divergence(double* acc, const double* jr, const double* jl, double r, std::size_t n);                   \
    double sum(const double* x, std::size_t n);                                                                        \
    double sum_abs(const double* x, std::size_t n);                                                                    \
    double sum_sq(const double* x, std::size_t n);                                                                     \
    double max_abs(const double* x, std::size_t n);                                                                    \
    double weighted_sum_sq(const double* v, const double* w, std::size_t n);                                           \
    double abs_diff_sum(const double* x, const double* y, std::size_t n);

namespace scalar {
COULOMBFLOW_KERNEL_DECLS
}

#if defined(__x86_64__) || defined(__i386__)
#define COULOMBFLOW_HAVE_AVX2_BUILD 1
namespace avx2 {
COULOMBFLOW_KERNEL_DECLS
}
#endif

#undef COULOMBFLOW_KERNEL_DECLS

} // namespace coulombflow::kernels
