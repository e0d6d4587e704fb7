#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace coulombflow {

// Comparison ODE  dPhi/dt = Phi^m (ubar - Phi),  Phi(0) = beta.
// beta may be +infinity (the solution coming down from infinity).
struct BarrierParams {
    double ubar = 1.0;
    double beta = 1.0;
    double m = 1.0;
};

inline constexpr double infinite_beta = std::numeric_limits<double>::infinity();

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t_lo, double t_hi)
        : std::runtime_error(what), t_lo(t_lo), t_hi(t_hi) {}
    double t_lo;
    double t_hi;
};

double phi(const BarrierParams& p, double t);

struct Envelope {
    double lower;
    double upper;
};

// Closed-form bounds on phi(p, t).
Envelope phi_envelopes(const BarrierParams& p, double t);

// First time phi reaches ubar/2; requires m < 1 and beta < ubar.
double tau_half(const BarrierParams& p);

// Lower bound on an entropy solution with m < 1 whose initial minimum is min0.
double lower_barrier(double ubar, double m, double min0, double t);

// ubar + (m t)^(-1/m)
double upper_regularization(double ubar, double m, double t);

} // namespace coulombflow
