#include "coulombflow/torus_field.hpp"
#include "coulombflow/kernels.hpp"

#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace coulombflow {

TorusGrid make_grid(int dim, int n) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("unsupported dimension " + std::to_string(dim));
    if (n < 8) throw std::invalid_argument("grid needs n >= 8, got " + std::to_string(n));
    TorusGrid g;
    g.dim = dim;
    g.n = n;
    g.h = 1.0 / n;
    g.cell_measure = dim == 1 ? g.h : g.h * g.h;
    return g;
}

ScalarField::ScalarField(const TorusGrid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

ScalarField::ScalarField(const TorusGrid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("field has " + std::to_string(values_.size()) + " values, grid expects " +
                                    std::to_string(grid_.size()));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ScalarField coulomb_potential(const ScalarField& u) {
    const TorusGrid& g = u.grid();
    auto c = detail::forward(g, u.values());
    constexpr double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    detail::for_each_mode(g, [&](const detail::Mode& md) {
        const double k2 = double(md.k0) * md.k0 + double(md.k1) * md.k1;
        c[md.index] = k2 == 0.0 ? 0.0 : c[md.index] / (four_pi2 * k2);
    });
    return ScalarField(g, detail::inverse(g, std::move(c)));
}

VectorField coulomb_field(const ScalarField& u, Staggering staggering) {
    const TorusGrid& g = u.grid();
    auto c = detail::forward(g, u.values());
    VectorField out{g, staggering, {}};
    for (int a = 0; a < g.dim; ++a)
        out.components.push_back(detail::potential_gradient(g, c, a, staggering == Staggering::face));
    return out;
}

ScalarField spectral_laplacian(const ScalarField& u) {
    const TorusGrid& g = u.grid();
    auto c = detail::forward(g, u.values());
    constexpr double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    detail::for_each_mode(g, [&](const detail::Mode& md) {
        const double k2 = double(md.k0) * md.k0 + double(md.k1) * md.k1;
        c[md.index] *= -four_pi2 * k2;
    });
    return ScalarField(g, detail::inverse(g, std::move(c)));
}

ScalarField mollify(const ScalarField& u, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("mollifier width must be positive");
    const TorusGrid& g = u.grid();
    if (width > 0.125) throw std::invalid_argument("mollifier width must be at most 1/8 of the torus");

    // Sampled periodic Gaussian, normalised to unit discrete mass so the
    // convolution preserves mass and positivity.
    std::vector<double> k1(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double x = i * g.h;
        double s = 0.0;
        for (int img = -2; img <= 2; ++img) {
            const double d = x + img;
            s += std::exp(-0.5 * d * d / (width * width));
        }
        k1[i] = s;
    }
    double tot = 0.0;
    for (double v : k1) tot += v;
    for (double& v : k1) v /= tot;

    std::vector<double> kernel(g.size());
    if (g.dim == 1) {
        kernel = k1;
    } else {
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) kernel[std::size_t(j) * g.n + i] = k1[i] * k1[j];
    }
    auto kh = detail::forward(g, kernel);
    auto uh = detail::forward(g, u.values());
    const double N = double(g.size());
    for (std::size_t i = 0; i < uh.size(); ++i) uh[i] *= kh[i] * N;
    auto out = detail::inverse(g, std::move(uh));
    for (double& v : out) v = std::max(v, 0.0);
    return ScalarField(g, std::move(out));
}

double lp_norm(const ScalarField& u, double p) {
    if (std::isinf(p) && p > 0) return linf_norm(u);
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
    const auto& k = kernels::active();
    const auto v = u.values();
    const double cm = u.grid().cell_measure;
    if (p == 1.0) return k.sum_abs(v.data(), v.size()) * cm;
    if (p == 2.0) return std::sqrt(k.sum_sq(v.data(), v.size()) * cm);
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x), p);
    return std::pow(s * cm, 1.0 / p);
}

double linf_norm(const ScalarField& u) {
    const auto v = u.values();
    return kernels::active().max_abs(v.data(), v.size());
}

double mean(const ScalarField& u) {
    const auto v = u.values();
    return kernels::active().sum(v.data(), v.size()) * u.grid().cell_measure;
}

double interaction_energy(const ScalarField& u) {
    const auto c = detail::forward(u.grid(), u.values());
    return 0.5 * detail::inverse_laplacian_quadratic(u.grid(), c);
}

double hminus1_norm(const ScalarField& u) {
    const auto c = detail::forward(u.grid(), u.values());
    return std::sqrt(detail::inverse_laplacian_quadratic(u.grid(), c));
}

double l1_distance(const ScalarField& u, const ScalarField& v) {
    if (!(u.grid() == v.grid())) throw std::invalid_argument("l1_distance on different grids");
    return kernels::active().abs_diff_sum(u.values().data(), v.values().data(), u.size()) * u.grid().cell_measure;
}

} // namespace coulombflow
