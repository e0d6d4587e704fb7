#pragma once

#include "coulombflow/rearrangement.hpp"

#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace coulombflow {

// Shock-front solutions of the rearranged Hamilton-Jacobi equation
//   d_t k + (d_s k)_+^m (k - s ubar) = 0   on (0, 1).

struct SingleVortexState {
    double S1 = 0.0, S2 = 1.0;
    double ubar = 1.0, m = 1.0;
};

struct TwoVortexState {
    double S1 = 0.0, S2 = 0.0, S3 = 1.0, S4 = 1.0;
    double alpha = 0.5;
    double ubar = 1.0, m = 1.0;
};

struct SupersolutionState {
    double C = 0.01;
    double alpha = 0.9;
    double S2 = 0.5, S3 = 0.6;
    double ubar = 1.0, m = 2.0;
    double S1() const { return C * alpha * ubar; }
    double sigma_prime_one() const { return m / (m - 1.0); }
};

class FrontCollapse : public std::runtime_error {
public:
    FrontCollapse(const std::string& what, double t) : std::runtime_error(what), t_reached(t) {}
    double t_reached;
};

class HypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Time series of front positions with derivatives for cubic Hermite
// interpolation between integrator steps.
struct FrontTrajectory {
    std::vector<std::string> names;
    std::vector<double> t;
    std::vector<std::vector<double>> S;
    std::vector<std::vector<double>> dS;
    bool stopped_early = false;
    std::string stop_reason;

    std::vector<double> at(double time) const;
    double t_end() const { return t.back(); }
};

FrontTrajectory integrate_single_vortex(const SingleVortexState& init, double t_end);
FrontTrajectory integrate_two_vortex(const TwoVortexState& init, double t_end);

struct SupersolutionRun {
    FrontTrajectory traj;  // columns S1, S2, S3
    double T_lower = std::numeric_limits<double>::infinity();  // first time S2 = S1
    double T_upper = std::numeric_limits<double>::infinity();  // first time 2 S3 = 1 + S3(0)
};

void check_hypotheses(const SupersolutionState& st);
SupersolutionRun integrate_supersolution(const SupersolutionState& init, double t_end);

double evaluate_single_k(const SingleVortexState& st, double s);
double evaluate_two_k(const TwoVortexState& st, double s);
double evaluate_supersolution_k(const SupersolutionState& st, double s);

// k(t, s) together with the kink loci s = S_i(t) where it is not C^1.
struct KEvaluator {
    std::function<double(double, double)> k;
    std::function<std::vector<double>(double)> kinks;
    double t_min = 0.0;
    double t_max = 0.0;
};

KEvaluator single_vortex_evaluator(const FrontTrajectory& traj, const SingleVortexState& init);
KEvaluator two_vortex_evaluator(const FrontTrajectory& traj, const TwoVortexState& init);
KEvaluator supersolution_evaluator(const SupersolutionRun& run, const SupersolutionState& init);

enum class ResidualKind { sub, super };

struct Sample {
    double t;
    double s;
};

// True when finite differences of width fd_step at (t, s) stay two widths
// away from every kink.
bool sample_is_smooth(const KEvaluator& ev, const Sample& p, double fd_step);

// Worst signed residual d_t k + (d_s k)_+^m (k - s ubar) by central
// differences: max for kind = sub, min for kind = super.
double viscosity_residual(const KEvaluator& ev, double m, double ubar, ResidualKind kind, std::span<const Sample> samples,
                          double fd_step = 1e-6);

// max over profile times and edges of k_sim - k_super.
double comparison_check(std::span<const RearrangedProfile> profiles, std::span<const double> times,
                        const KEvaluator& super);

// Constants of the front-tracking bounds for the supersolution, in the limit
// C -> 0, S2(0) -> S3(0) = s0:
//   S2(t) >= s0 - c_s2 ubar t^(1/m)                         on [0, T_lower]
//   S3(t) >= s0 + c_s3_low (1-alpha)^((m-1)/m) ubar t^(1/m)  on [0, min(T_lower, T_upper)]
//   S3(t) <= s0 + c_s3_up ubar t^(1/m)                       for all t
//   T_lower >= c_t (s0 / ubar)^m,  T_upper >= c_t ((1 - s0) / ubar)^m
struct FrontConstants {
    double m = 2.0;
    double c_s2 = 0.0;
    double c_s3_low = 0.0;
    double c_s3_up = 0.0;
    double c_t = 0.0;
};

// Parameter domain covered by the calibration sweep.
struct CalibrationDomain {
    std::vector<double> alphas_above_min;  // alpha = alpha_min + x (1 - alpha_min)
    std::vector<double> ubars;
    std::vector<double> s0s;
};
CalibrationDomain default_calibration_domain();

// Seed state of the limit configuration, with a tiny C and initial gap.
SupersolutionState limit_configuration(double m, double alpha, double ubar, double s0);

// Extremal ratios observed over the sweep (no safety factor).
FrontConstants calibrate_front_constants(double m, const CalibrationDomain& dom);

// Frozen calibration for m in {1.5, 2, 3, 4}; throws for other m.
FrontConstants frozen_front_constants(double m);

// Constants derivable by hand from the proof's inequality chain.
FrontConstants analytic_front_constants(double m);

struct BoundCheck {
    double worst_s2 = 0.0;      // min over t of S2 - lower bound
    double worst_s3_low = 0.0;  // min over t of S3 - lower bound
    double worst_s3_up = 0.0;   // min over t of upper bound - S3
    double worst_t = 0.0;       // min of T - bound over both hitting times
    bool holds() const { return worst_s2 >= 0.0 && worst_s3_low >= 0.0 && worst_s3_up >= 0.0 && worst_t >= 0.0; }
};

BoundCheck check_front_bounds(const SupersolutionRun& run, const SupersolutionState& init, double s0,
                              const FrontConstants& c, std::span<const double> log_times);

} // namespace coulombflow
