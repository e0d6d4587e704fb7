#pragma once

#include "coulombflow/hj_fronts.hpp"
#include "coulombflow/pde_solver.hpp"
#include "coulombflow/rearrangement.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace coulombflow {

enum class Status { pass, fail, inconclusive };
std::string to_string(Status s);

// One verified inequality. Passes iff measured <= bound + tolerance.
struct CheckResult {
    std::string check_id;
    std::string anchor;  // the proven property this check exercises
    Status status = Status::inconclusive;
    double measured = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
    nlohmann::json context = nlohmann::json::object();
    std::string note;
};

CheckResult make_check(std::string id, std::string anchor, double measured, double bound, double tolerance,
                       nlohmann::json context = nlohmann::json::object());

nlohmann::json run_context(const Trajectory& traj);

std::vector<CheckResult> check_conservation_and_monotonicity(const Trajectory& traj);
CheckResult check_energy_dissipation(const Trajectory& traj);
std::vector<CheckResult> check_barriers(const Trajectory& traj);

enum class Norm { l1, linf, hm1 };
std::string to_string(Norm n);

struct RateFit {
    double slope = 0.0;
    std::size_t points = 0;
    bool degenerate = false;
};

// Least-squares slope of log ||u - ubar|| over the second half of the snapshots.
RateFit fit_decay_rate(const Trajectory& traj, Norm norm);
std::vector<CheckResult> check_asymptotics(const Trajectory& traj, std::span<const Norm> norms);

// Support-growth cross validation for m > 1. window_end bounds the interval on
// which a finite indicator predicts a frozen support.
CheckResult check_waiting_time(const Trajectory& traj, const WaitingIndicator& indicator, double S0, double theta,
                               double window_end);

// First recorded time at which sup|grad u^(m-1)| exceeds `factor` times its
// initial value; the last snapshot time if it never does.
double lipschitz_window(const Trajectory& traj, double factor = 2.0);

// Smallest C with ||u - v||_1(t) <= ||u0 - v0||_1 e^(C t) on the recorded snapshots.
double fitted_stability_constant(const Trajectory& u, const Trajectory& v);
CheckResult check_weak_strong(const Trajectory& u, const Trajectory& v);
// Pass when every fitted constant lies within +-25% of the reference.
CheckResult check_constant_stability(const std::string& id, double reference, std::span<const double> others);

CheckResult check_subsolution(const Trajectory& traj, double tolerance_factor = 0.05);
CheckResult check_comparison(const Trajectory& traj, const SupersolutionRun& run, const SupersolutionState& st);
CheckResult check_front_tracking_bounds(double m, const FrontConstants& c, std::span<const SupersolutionState> configs,
                                        std::span<const double> s0s);

struct Report {
    std::vector<CheckResult> checks;
    std::vector<std::string> warnings;
    int exit_code() const;
};

nlohmann::json report_json(const Report& r, const nlohmann::json& config_echo, const std::string& input_text,
                           bool with_timestamp = true);
// Writes the JSON report and returns the exit code contract: 0 iff no check failed.
int emit_report(const Report& r, const nlohmann::json& config_echo, const std::string& input_text,
                const std::string& path);

// Git-style blob hash: sha1("blob <len>\0" + content), hex encoded.
std::string content_hash(const std::string& content);

} // namespace coulombflow
