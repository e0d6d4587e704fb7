#pragma once

#include <cstddef>
#include <string>

// Inner loops of the finite-volume update and the field reductions.
// Every variant performs the same floating-point operations in the same
// order (reductions accumulate in four interleaved lanes), so scalar and
// vector results are bit-identical.
namespace coulombflow::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    const char* name;

    // out[i] = max(a,0)*ml[i] + min(a,0)*mr[i] - visc*(ur[i] - ul[i])
    void (*upwind_flux)(const double* a, const double* ml, const double* mr, const double* ul, const double* ur,
                        double visc, double* out, std::size_t n);
    // acc[i] -= r*(jr[i] - jl[i])
    void (*flux_divergence)(double* acc, const double* jr, const double* jl, double r, std::size_t n);

    double (*sum)(const double* x, std::size_t n);
    double (*sum_abs)(const double* x, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
    // sum v[i]^2 * w[i]
    double (*weighted_sum_sq)(const double* v, const double* w, std::size_t n);
    // sum |x[i] - y[i]|
    double (*abs_diff_sum)(const double* x, const double* y, std::size_t n);
};

bool isa_available(Isa isa);
const KernelTable& table(Isa isa);

// Chosen once per process: AVX2 when the CPU has it, overridable with
// COULOMBFLOW_SIMD=scalar|avx2|auto.
const KernelTable& active();

} // namespace coulombflow::kernels
