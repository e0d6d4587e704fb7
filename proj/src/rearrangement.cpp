#include "coulombflow/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace coulombflow {

double RearrangedProfile::k_at(double s) const {
    const std::size_t N = u_star.size();
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return k.back();
    std::size_t i = std::min(N - 1, std::size_t(s / cell_measure));
    return k[i] + u_star[i] * (s - edge(i));
}

double RearrangedProfile::level_measure(double theta) const {
    // u_star is nonincreasing, so the count is a partition point.
    auto it = std::partition_point(u_star.begin(), u_star.end(), [theta](double v) { return v > theta; });
    return double(it - u_star.begin()) * cell_measure;
}

RearrangedProfile rearrange(const ScalarField& u) {
    for (double v : u.values())
        if (v < 0.0) throw std::invalid_argument("rearrange needs a nonnegative field");
    RearrangedProfile p;
    p.cell_measure = u.grid().cell_measure;
    p.u_star.assign(u.values().begin(), u.values().end());
    std::stable_sort(p.u_star.begin(), p.u_star.end(), std::greater<>());
    p.k.resize(p.u_star.size() + 1);
    p.k[0] = 0.0;
    for (std::size_t i = 0; i < p.u_star.size(); ++i) p.k[i + 1] = p.k[i] + p.u_star[i] * p.cell_measure;
    return p;
}

double support_measure(const ScalarField& u, double theta) {
    std::size_t count = 0;
    for (double v : u.values())
        if (v > theta) ++count;
    return double(count) * u.grid().cell_measure;
}

std::string to_string(WaitingClass c) {
    switch (c) {
    case WaitingClass::diverges: return "diverges";
    case WaitingClass::finite: return "finite";
    default: return "inconclusive";
    }
}

WaitingIndicator waiting_time_indicator(const ScalarField& u0, double m, double S0) {
    if (!(m > 1.0)) throw std::invalid_argument("waiting_time_indicator needs m > 1");
    if (!(S0 > 0.0 && S0 < 1.0)) throw std::invalid_argument("waiting_time_indicator needs 0 < S0 < 1");
    const RearrangedProfile p = rearrange(u0);
    const double resolution = 4.0 * p.cell_measure;
    const double k0 = p.k_at(S0);

    WaitingIndicator out;
    for (int j = 2;; ++j) {
        const double gap = std::ldexp(S0 / 4.0, -j);
        if (gap < resolution) break;
        const double s = S0 - gap;
        out.s.push_back(s);
        out.ratios.push_back(std::pow(gap, -m / (m - 1.0)) * (k0 - p.k_at(s)));
    }

    // A jump at the edge grows by 2^(1/(m-1)) per dyadic step and the critical
    // profile by 1; a growth factor above the geometric midpoint of the two
    // (capped at 1.5) counts as divergence.
    out.growth_threshold = std::min(1.5, std::pow(2.0, 0.5 / (m - 1.0)));
    const std::size_t n = out.ratios.size();
    if (n < 3) return out;
    const double r0 = out.ratios[n - 3], r1 = out.ratios[n - 2], r2 = out.ratios[n - 1];
    if (r0 > 0.0 && r1 >= out.growth_threshold * r0 && r2 >= out.growth_threshold * r1) {
        out.classification = WaitingClass::diverges;
        return out;
    }
    const double lo = std::min({r0, r1, r2}), hi = std::max({r0, r1, r2});
    if (lo > 0.0 && (hi - lo) < 0.1 * lo) out.classification = WaitingClass::finite;
    return out;
}

double subsolution_residual(std::span<const RearrangedProfile> profiles, std::span<const double> times, double m,
                            double ubar, TimeSamples which) {
    const std::size_t nt = profiles.size();
    if (nt < 3) throw std::invalid_argument("subsolution_residual needs at least 3 profiles");
    if (times.size() != nt) throw std::invalid_argument("subsolution_residual: one time per profile");
    const double dt = (times.back() - times.front()) / double(nt - 1);
    for (std::size_t k = 1; k < nt; ++k)
        if (std::abs(times[k] - times[k - 1] - dt) > 1e-9 * (times.back() - times.front()))
            throw std::invalid_argument("subsolution_residual needs uniformly spaced profiles");
    const std::size_t N = profiles.front().size();
    for (const auto& p : profiles)
        if (p.size() != N) throw std::invalid_argument("subsolution_residual: profiles on different grids");

    auto kmid = [](const RearrangedProfile& p, std::size_t i) { return 0.5 * (p.k[i] + p.k[i + 1]); };
    double worst = -std::numeric_limits<double>::infinity();
    const std::size_t first = which == TimeSamples::interior ? 1 : 0;
    const std::size_t last = which == TimeSamples::interior ? nt - 1 : nt;
    for (std::size_t k = first; k < last; ++k) {
        const RearrangedProfile& p = profiles[k];
        const std::size_t a = k == 0 ? 0 : k - 1;
        const std::size_t b = k + 1 == nt ? k : k + 1;
        const double span = times[b] - times[a];
        for (std::size_t i = 0; i < N; ++i) {
            const double dtk = (kmid(profiles[b], i) - kmid(profiles[a], i)) / span;
            const double slope = std::max(p.u_star[i], 0.0);
            const double r = dtk + std::pow(slope, m) * (kmid(p, i) - p.midpoint(i) * ubar);
            worst = std::max(worst, r);
        }
    }
    return worst;
}

} // namespace coulombflow
