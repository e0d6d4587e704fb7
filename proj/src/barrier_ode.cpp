#include "coulombflow/barrier_ode.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace coulombflow {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 1>;

constexpr double rtol = 1e-10;
constexpr double atol = 1e-14;

void validate(const BarrierParams& p) {
    if (!(p.ubar > 0.0)) throw std::invalid_argument("barrier ODE needs ubar > 0");
    if (!(p.m > 0.0)) throw std::invalid_argument("barrier ODE needs m > 0");
    if (!(p.beta >= 0.0)) throw std::invalid_argument("barrier ODE needs beta >= 0");
}

double integrate(double ubar, double m, double y0, double t0, double t1) {
    if (t1 <= t0) return y0;
    auto rhs = [&](const State& y, State& dy, double) {
        const double v = std::max(y[0], 0.0);
        dy[0] = std::pow(v, m) * (ubar - y[0]);
    };
    State y{y0};
    double last = t0;
    auto observe = [&](const State&, double t) { last = t; };
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(atol, rtol);
    // Initial step scaled to the local relaxation time so that huge starting
    // values (beta = infinity) are resolved from the first step.
    const double rate = std::abs(std::pow(std::max(y0, 1e-300), m) * (ubar - y0)) / std::max(std::abs(y0), 1e-300);
    double dt0 = std::min((t1 - t0) * 1e-3, rate > 0.0 ? 1e-3 / rate : (t1 - t0));
    dt0 = std::max(dt0, (t1 - t0) * 1e-12);
    try {
        odeint::integrate_adaptive(stepper, rhs, y, t0, t1, dt0, observe);
    } catch (const std::exception& e) {
        throw IntegrationError(std::string("barrier ODE integration failed: ") + e.what(), last, t1);
    }
    if (!std::isfinite(y[0])) throw IntegrationError("barrier ODE produced a non-finite value", last, t1);
    return y[0];
}

} // namespace

double phi(const BarrierParams& p, double t) {
    validate(p);
    if (!(t >= 0.0)) throw std::invalid_argument("phi needs t >= 0");
    const double ubar = p.ubar, m = p.m;
    if (std::isinf(p.beta)) {
        if (!(t > 0.0)) throw std::invalid_argument("phi from beta = infinity needs t > 0");
        // Start from the upper envelope at a tiny time; the flow contracts the
        // error in the starting value.
        const double t0 = t * 1e-9;
        return integrate(ubar, m, upper_regularization(ubar, m, t0), t0, t);
    }
    if (t == 0.0 || p.beta == ubar) return p.beta;
    if (p.beta == 0.0) {
        if (m >= 1.0) return 0.0;
        // Positive increasing branch: leading-order behaviour ((1-m) ubar t)^(1/(1-m)).
        const double t0 = std::min(t, 1.0) * 1e-9;
        const double y0 = std::pow((1.0 - m) * ubar * t0, 1.0 / (1.0 - m));
        return integrate(ubar, m, y0, t0, t);
    }
    return integrate(ubar, m, p.beta, 0.0, t);
}

double upper_regularization(double ubar, double m, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("upper_regularization needs t > 0");
    return ubar + std::pow(m * t, -1.0 / m);
}

double tau_half(const BarrierParams& p) {
    validate(p);
    if (p.m >= 1.0) throw std::invalid_argument("tau_half is defined for m < 1 only");
    if (!(p.beta < p.ubar)) throw std::invalid_argument("tau_half needs beta < ubar");
    const double target = 0.5 * p.ubar;
    if (p.beta >= target) return 0.0;
    // Integrating d/dt Phi^(1-m) >= (1-m) ubar / 2 bounds the crossing time.
    double hi = std::pow(0.5, 1.0 - p.m) / (std::pow(p.ubar, p.m) * (1.0 - p.m) * 0.5) * 1.01;
    double lo = 0.0;
    while (phi(p, hi) < target) hi *= 2.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (phi(p, mid) >= target) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Lower bound for an increasing solution with m < 1 started at beta < ubar.
double fast_diffusion_lower(double ubar, double m, double beta, double tau, double t) {
    if (t <= tau) return std::pow(std::pow(beta, 1.0 - m) + 0.5 * (1.0 - m) * ubar * t, 1.0 / (1.0 - m));
    return ubar - 0.5 * ubar * std::exp(-std::pow(0.5 * ubar, m) * (t - tau));
}

} // namespace

Envelope phi_envelopes(const BarrierParams& p, double t) {
    validate(p);
    if (!(t >= 0.0)) throw std::invalid_argument("phi_envelopes needs t >= 0");
    const double ubar = p.ubar, m = p.m, beta = p.beta;
    if (beta == ubar) return {ubar, ubar};
    if (beta > ubar) {
        if (std::isinf(beta)) {
            if (t == 0.0) return {ubar, infinite_beta};
            return {ubar, upper_regularization(ubar, m, t)};
        }
        const double d = beta - ubar;
        const double algebraic = ubar + std::pow(t * m + std::pow(d, -m), -1.0 / m);
        const double exponential = ubar + d * std::exp(-std::pow(ubar, m) * t);
        return {ubar, std::min(algebraic, exponential)};
    }
    if (m >= 1.0) return {ubar - (ubar - beta) * std::exp(-std::pow(beta, m) * t), ubar};
    return {fast_diffusion_lower(ubar, m, beta, tau_half(p), t), ubar};
}

double lower_barrier(double ubar, double m, double min0, double t) {
    if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("lower_barrier needs 0 < m < 1");
    if (!(ubar > 0.0) || !(min0 >= 0.0) || !(t >= 0.0)) throw std::invalid_argument("lower_barrier needs ubar > 0, min0 >= 0, t >= 0");
    const double beta = std::min(min0, ubar);
    if (beta >= 0.5 * ubar) return fast_diffusion_lower(ubar, m, beta, 0.0, t);
    return fast_diffusion_lower(ubar, m, beta, tau_half({ubar, beta, m}), t);
}

} // namespace coulombflow
