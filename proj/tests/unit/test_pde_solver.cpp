#include "coulombflow/pde_solver.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace coulombflow;

namespace {

ScalarField cosine(const TorusGrid& g, double base, double amp) {
    ScalarField u(g);
    for (std::size_t idx = 0; idx < g.size(); ++idx)
        u[idx] = base + amp * std::cos(2.0 * std::numbers::pi * g.coord(int(idx % std::size_t(g.n))));
    return u;
}

SolverConfig config(double m, double t_end, int outputs) {
    SolverConfig c;
    c.m = m;
    c.t_end = t_end;
    for (int k = 1; k <= outputs; ++k) c.output_times.push_back(t_end * k / outputs);
    return c;
}

} // namespace

TEST_CASE("constant data is a fixed point") {
    for (int dim : {1, 2}) {
        const TorusGrid g = make_grid(dim, 16);
        const ScalarField u0(g, 0.8);
        const Trajectory tr = run(u0, config(2.0, 0.5, 4));
        REQUIRE(tr.snapshots.size() == 5);
        for (const auto& u : tr.snapshots)
            for (std::size_t i = 0; i < u.size(); ++i) CHECK(u[i] == doctest::Approx(0.8).epsilon(1e-14));
    }
}

TEST_CASE("mass is conserved and extrema contract") {
    const TorusGrid g = make_grid(1, 128);
    for (double m : {0.5, 1.0, 2.0}) {
        SolverConfig c = config(m, 1.0, 10);
        c.floor_m_lt_1 = 0.1;
        const Trajectory tr = run(cosine(g, 1.0, 0.5), c);
        const double mass0 = tr.observables.front().mass;
        for (std::size_t k = 0; k < tr.observables.size(); ++k) {
            const ObservableRow& r = tr.observables[k];
            CHECK(std::abs(r.mass - mass0) <= 1e-12 * mass0);
            if (k > 0) {
                CHECK(r.max <= tr.observables[k - 1].max + 1e-12);
                CHECK(r.min >= tr.observables[k - 1].min - 1e-12);
            }
        }
    }
}

TEST_CASE("epsilon defaults to the grid spacing") {
    const TorusGrid g = make_grid(1, 64);
    SolverConfig c;
    CHECK(resolved_epsilon(c, g) == g.h);
    c.epsilon = 0.0;
    CHECK(resolved_epsilon(c, g) == 0.0);
}

TEST_CASE("cfl step respects explicit diffusion and transport limits") {
    const TorusGrid g = make_grid(1, 64);
    SolverConfig c;
    c.cfl = 0.5;
    const ScalarField u = cosine(g, 1.0, 1.0);
    const double dt = cfl_dt(u, c);
    CHECK(dt > 0.0);
    // Pure diffusion alone needs dt <= h^2 / (2 eps) = h / 2.
    CHECK(dt <= 0.5 * g.h / 2.0 + 1e-15);
    // One step at the reported size keeps the field nonnegative and the mass fixed.
    const ScalarField v = step(u, dt, c);
    CHECK(v.min() >= 0.0);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        a += u[i];
        b += v[i];
    }
    CHECK(b == doctest::Approx(a).epsilon(1e-14));
}

TEST_CASE("entropy residual of a constant trajectory vanishes") {
    const TorusGrid g = make_grid(1, 64);
    const SolverConfig c = config(2.0, 1.0, 10);
    const Trajectory tr = run(ScalarField(g, 1.3), c);
    const std::vector<double> kappas{0.0, 0.65, 1.3, 2.0};
    CHECK(std::abs(entropy_residual(tr, c, kappas)) < 1e-12);
}

TEST_CASE("energy plus dissipation does not grow") {
    const TorusGrid g = make_grid(1, 128);
    const Trajectory tr = run(cosine(g, 1.0, 0.5), config(1.0, 1.0, 10));
    CHECK(dissipation_check(tr) <= 1e-6 * tr.observables.front().energy + 1e-12);
    CHECK(tr.observables.back().energy < tr.observables.front().energy);
}

TEST_CASE("invalid configurations are rejected") {
    const TorusGrid g = make_grid(1, 32);
    const ScalarField u0(g, 1.0);
    SolverConfig c = config(1.0, 1.0, 2);
    c.cfl = 1.5;
    CHECK_THROWS_AS(run(u0, c), std::invalid_argument);
    c = config(0.0, 1.0, 2);
    CHECK_THROWS_AS(run(u0, c), std::invalid_argument);
    c = config(1.0, 1.0, 2);
    c.output_times.push_back(2.0);
    CHECK_THROWS_AS(run(u0, c), std::invalid_argument);
    c = config(0.5, 1.0, 2);
    CHECK_THROWS_AS(run(u0, c), std::invalid_argument);  // missing floor for m < 1
    ScalarField neg(g, 1.0);
    neg[3] = -0.1;
    CHECK_THROWS_AS(run(neg, config(1.0, 1.0, 2)), std::invalid_argument);
    ScalarField nan(g, 1.0);
    nan[3] = std::nan("");
    CHECK_THROWS_AS(run(nan, config(1.0, 1.0, 2)), std::invalid_argument);
}

TEST_CASE("two-dimensional runs conserve mass") {
    const TorusGrid g = make_grid(2, 32);
    ScalarField u0(g);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const double x = g.coord(int(idx % 32)), y = g.coord(int(idx / 32));
        u0[idx] = 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * x) * std::cos(2.0 * std::numbers::pi * y);
    }
    const Trajectory tr = run(u0, config(2.0, 0.5, 5));
    CHECK(std::abs(tr.observables.back().mass - tr.observables.front().mass) <= 1e-12);
    CHECK(tr.observables.back().max < tr.observables.front().max);
}
