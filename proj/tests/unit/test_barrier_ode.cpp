#include "coulombflow/barrier_ode.hpp"

#include <doctest.h>

#include <cmath>

using namespace coulombflow;

namespace {

// Independent classical RK4 with a fixed small step.
double rk4_phi(double ubar, double beta, double m, double t) {
    const int steps = 20000;
    const double h = t / steps;
    auto f = [&](double p) { return std::pow(p, m) * (ubar - p); };
    double p = beta;
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(p), k2 = f(p + 0.5 * h * k1), k3 = f(p + 0.5 * h * k2), k4 = f(p + h * k3);
        p += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return p;
}

} // namespace

TEST_CASE("logistic closed form at m = 1") {
    for (double beta : {0.1, 0.5, 2.0, 5.0}) {
        for (double t : {0.1, 1.0, 4.0}) {
            const double e = std::exp(2.0 * t);
            const double exact = 2.0 * beta * e / (2.0 + beta * (e - 1.0));
            CHECK(phi({2.0, beta, 1.0}, t) == doctest::Approx(exact).epsilon(1e-8));
        }
    }
}

TEST_CASE("phi agrees with an independent RK4 integration") {
    for (double m : {0.5, 1.5, 2.0, 4.0})
        for (double beta : {0.2, 1.7})
            CHECK(phi({1.0, beta, m}, 1.3) == doctest::Approx(rk4_phi(1.0, beta, m, 1.3)).epsilon(1e-7));
}

TEST_CASE("phi is monotone towards ubar and respects its envelopes") {
    for (double m : {0.5, 1.0, 2.0, 4.0}) {
        double below = 0.0, above = infinite_beta;
        for (int i = 1; i <= 40; ++i) {
            const double t = 0.05 * i;
            const double lo = phi({1.0, 0.3, m}, t);
            const double hi = phi({1.0, infinite_beta, m}, t);
            CHECK(lo >= below);
            CHECK(lo <= 1.0);
            CHECK(hi <= above);
            CHECK(hi >= 1.0);
            below = lo;
            above = hi;
            const Envelope e = phi_envelopes({1.0, 0.3, m}, t);
            CHECK(e.lower <= lo * (1 + 1e-9));
            CHECK(lo <= e.upper * (1 + 1e-9));
        }
        CHECK(phi({1.0, 0.3, m}, 60.0) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("phi from infinity sits below the upper regularization") {
    for (double m : {1.0, 2.0, 3.0})
        for (double t : {0.01, 0.1, 1.0}) CHECK(phi({1.0, infinite_beta, m}, t) <= upper_regularization(1.0, m, t) + 1e-12);
}

TEST_CASE("tau_half is where phi crosses ubar / 2") {
    // sqrt(phi) solves w' = (1 - w^2) / 2 when m = 1/2.
    const BarrierParams p{1.0, 1e-12, 0.5};
    const double t = tau_half(p);
    CHECK(t > 0.0);
    CHECK(phi(p, t) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(t == doctest::Approx(2.0 * (std::atanh(1.0 / std::sqrt(2.0)) - std::atanh(1e-6))).epsilon(1e-7));
    CHECK(tau_half({1.0, 0.7, 0.5}) == 0.0);
    CHECK_THROWS(tau_half({1.0, 0.1, 2.0}));
    CHECK_THROWS(tau_half({1.0, 1.5, 0.5}));
}

TEST_CASE("fast-diffusion lower barrier starts below the initial minimum") {
    CHECK(lower_barrier(1.0, 0.5, 0.01, 0.0) <= 0.01 + 1e-15);
    CHECK(lower_barrier(1.0, 0.5, 0.01, 5.0) > lower_barrier(1.0, 0.5, 0.01, 1.0));
}
