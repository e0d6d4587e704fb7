#pragma once

#include "coulombflow/torus_field.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace coulombflow {

struct SolverConfig {
    double m = 1.0;
    std::optional<double> epsilon;  // empty means epsilon = h
    double cfl = 0.45;
    double t_end = 1.0;
    std::vector<double> output_times;  // t_end is always recorded as well
    double floor_m_lt_1 = 0.0;         // required positive lower bound on u0 when m < 1
    int observe_every = 1;             // observables every k-th step (and at every snapshot)
};

double resolved_epsilon(const SolverConfig& cfg, const TorusGrid& g);

struct ObservableRow {
    double t = 0.0;
    double mass = 0.0;
    double min = 0.0;
    double max = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double energy = 0.0;
    double dissipation_rate = 0.0;        // integral of |grad g*u|^2 u^m at t
    double cumulative_dissipation = 0.0;  // time integral of the rate up to t
    double grad_sup = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ScalarField> snapshots;
    std::vector<ObservableRow> observables;
    double m = 1.0;
    double epsilon = 0.0;
    std::size_t steps = 0;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Largest stable explicit step; +infinity when neither constraint binds.
double cfl_dt(const ScalarField& u, const SolverConfig& cfg);

// One forward Euler step of the conservative upwind scheme.
ScalarField step(const ScalarField& u, double dt, const SolverConfig& cfg);

Trajectory run(const ScalarField& u0, const SolverConfig& cfg);

ObservableRow observe(const ScalarField& u, double m, double t);

// Most negative Kruzhkov weak-form value over a fixed bank of space-time bumps
// (0 when every probe is compliant).
double entropy_residual(const Trajectory& traj, const SolverConfig& cfg, std::span<const double> kappas);

// max over recorded t of E(t) + int_0^t D - E(0)
double dissipation_check(const Trajectory& traj);

// Centred-difference sup norm of grad(u^power) per snapshot.
std::vector<double> grad_sup_series(const Trajectory& traj, double power = 1.0);
double grad_sup(const ScalarField& u, double power = 1.0);

} // namespace coulombflow
