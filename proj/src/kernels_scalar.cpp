#include "kernels_impl.hpp"

#include <cmath>

namespace coulombflow::kernels::scalar {

void upwind_flux(const double* a, const double* ml, const double* mr, const double* ul, const double* ur, double visc,
                 double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double ap = a[i] > 0.0 ? a[i] : 0.0;
        const double am = a[i] < 0.0 ? a[i] : 0.0;
        out[i] = (ap * ml[i] + am * mr[i]) - visc * (ur[i] - ul[i]);
    }
}

void flux_divergence(double* acc, const double* jr, const double* jl, double r, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] - r * (jr[i] - jl[i]);
}

namespace {

template <class Term>
double lane_sum(std::size_t n, Term term) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        l0 += term(i);
        l1 += term(i + 1);
        l2 += term(i + 2);
        l3 += term(i + 3);
    }
    double s = (l0 + l1) + (l2 + l3);
    for (; i < n; ++i) s += term(i);
    return s;
}

} // namespace

double sum(const double* x, std::size_t n) {
    return lane_sum(n, [&](std::size_t i) { return x[i]; });
}

double sum_abs(const double* x, std::size_t n) {
    return lane_sum(n, [&](std::size_t i) { return std::abs(x[i]); });
}

double sum_sq(const double* x, std::size_t n) {
    return lane_sum(n, [&](std::size_t i) { return x[i] * x[i]; });
}

double max_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::abs(x[i]);
        if (v > m) m = v;
    }
    return m;
}

double weighted_sum_sq(const double* v, const double* w, std::size_t n) {
    return lane_sum(n, [&](std::size_t i) { return (v[i] * v[i]) * w[i]; });
}

double abs_diff_sum(const double* x, const double* y, std::size_t n) {
    return lane_sum(n, [&](std::size_t i) { return std::abs(x[i] - y[i]); });
}

} // namespace coulombflow::kernels::scalar
