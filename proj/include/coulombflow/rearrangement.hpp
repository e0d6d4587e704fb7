#pragma once

#include "coulombflow/torus_field.hpp"

#include <span>
#include <string>
#include <vector>

namespace coulombflow {

// Decreasing rearrangement on the mass coordinate s in [0, 1]. Cell values
// occupy consecutive intervals of length cell_measure; k holds the primitive
// at the N+1 interval edges.
struct RearrangedProfile {
    double cell_measure = 0.0;
    std::vector<double> u_star;
    std::vector<double> k;

    std::size_t size() const { return u_star.size(); }
    double edge(std::size_t i) const { return double(i) * cell_measure; }
    double midpoint(std::size_t i) const { return (double(i) + 0.5) * cell_measure; }
    // Piecewise-linear primitive at an arbitrary s in [0, 1].
    double k_at(double s) const;
    // Measure of {u_star > theta}.
    double level_measure(double theta) const;
};

RearrangedProfile rearrange(const ScalarField& u);

double support_measure(const ScalarField& u, double theta);
inline double default_support_threshold(const ScalarField& u0) { return 1e-8 * u0.max(); }

enum class WaitingClass { diverges, finite, inconclusive };
std::string to_string(WaitingClass c);

struct WaitingIndicator {
    WaitingClass classification = WaitingClass::inconclusive;
    std::vector<double> s;       // sample points s_j
    std::vector<double> ratios;  // R(s_j)
    double growth_threshold = 0.0;
};

// Dyadic proxy for the edge condition
//   limsup (S0 - s)^(-m/(m-1)) * int_s^S0 (u0)_* = infinity.
WaitingIndicator waiting_time_indicator(const ScalarField& u0, double m, double S0);

enum class TimeSamples { all, interior };

// max over samples of  d_t k + (d_s k)_+^m (k - s ubar)  on uniformly spaced profiles.
double subsolution_residual(std::span<const RearrangedProfile> profiles, std::span<const double> times, double m,
                            double ubar, TimeSamples which = TimeSamples::all);

} // namespace coulombflow
