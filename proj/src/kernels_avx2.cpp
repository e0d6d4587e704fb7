#include "kernels_impl.hpp"

#include <immintrin.h>

#include <cmath>

// Built with -mavx2 (no FMA) and only entered after a runtime CPU check.
namespace coulombflow::kernels::avx2 {

namespace {

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline double reduce_lanes(__m256d acc) {
    alignas(32) double l[4];
    _mm256_store_pd(l, acc);
    return (l[0] + l[1]) + (l[2] + l[3]);
}

} // namespace

void upwind_flux(const double* a, const double* ml, const double* mr, const double* ul, const double* ur, double visc,
                 double* out, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d vv = _mm256_set1_pd(visc);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d ap = _mm256_max_pd(va, zero);
        const __m256d am = _mm256_min_pd(va, zero);
        const __m256d adv = _mm256_add_pd(_mm256_mul_pd(ap, _mm256_loadu_pd(ml + i)),
                                          _mm256_mul_pd(am, _mm256_loadu_pd(mr + i)));
        const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(ur + i), _mm256_loadu_pd(ul + i));
        _mm256_storeu_pd(out + i, _mm256_sub_pd(adv, _mm256_mul_pd(vv, diff)));
    }
    for (; i < n; ++i) {
        const double ap = a[i] > 0.0 ? a[i] : 0.0;
        const double am = a[i] < 0.0 ? a[i] : 0.0;
        out[i] = (ap * ml[i] + am * mr[i]) - visc * (ur[i] - ul[i]);
    }
}

void flux_divergence(double* acc, const double* jr, const double* jl, double r, std::size_t n) {
    const __m256d vr = _mm256_set1_pd(r);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(jr + i), _mm256_loadu_pd(jl + i));
        _mm256_storeu_pd(acc + i, _mm256_sub_pd(_mm256_loadu_pd(acc + i), _mm256_mul_pd(vr, d)));
    }
    for (; i < n; ++i) acc[i] = acc[i] - r * (jr[i] - jl[i]);
}

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = reduce_lanes(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double sum_abs(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, vabs(_mm256_loadu_pd(x + i)));
    double s = reduce_lanes(acc);
    for (; i < n; ++i) s += std::abs(x[i]);
    return s;
}

double sum_sq(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double s = reduce_lanes(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

double max_abs(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, vabs(_mm256_loadu_pd(x + i)));
    alignas(32) double l[4];
    _mm256_store_pd(l, acc);
    double m = 0.0;
    for (double v : l)
        if (v > m) m = v;
    for (; i < n; ++i) {
        const double v = std::abs(x[i]);
        if (v > m) m = v;
    }
    return m;
}

double weighted_sum_sq(const double* v, const double* w, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(v + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(x, x), _mm256_loadu_pd(w + i)));
    }
    double s = reduce_lanes(acc);
    for (; i < n; ++i) s += (v[i] * v[i]) * w[i];
    return s;
}

double abs_diff_sum(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, vabs(_mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i))));
    double s = reduce_lanes(acc);
    for (; i < n; ++i) s += std::abs(x[i] - y[i]);
    return s;
}

} // namespace coulombflow::kernels::avx2
