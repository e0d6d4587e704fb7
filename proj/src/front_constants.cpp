#include "coulombflow/hj_fronts.hpp"

#include <algorithm>
#include <cmath>

namespace coulombflow {

namespace {

constexpr double seed_gap = 2e-9;
constexpr double seed_c = 1e-6;

double alpha_min(double m) { return 1.0 - (m - 1.0) / (2.0 * m); }

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
    return out;
}

// Integrate long enough to see both hitting times.
SupersolutionRun run_to_hits(const SupersolutionState& st) {
    double t_end = 1.0 / std::pow(st.ubar, st.m);
    for (int attempt = 0; attempt < 12; ++attempt) {
        SupersolutionRun run = integrate_supersolution(st, t_end);
        if (std::isfinite(run.T_lower) && std::isfinite(run.T_upper)) return run;
        t_end *= 4.0;
    }
    throw std::runtime_error("supersolution hitting times not reached during calibration");
}

} // namespace

CalibrationDomain default_calibration_domain() {
    // Front speeds depend on ubar only through ubar^m t, so a single ubar
    // covers every mass once times are rescaled.
    return {{0.0, 0.5, 0.9}, {1.0}, {0.2, 0.35, 0.5, 0.65, 0.8}};
}

SupersolutionState limit_configuration(double m, double alpha, double ubar, double s0) {
    SupersolutionState st;
    st.m = m;
    st.alpha = alpha;
    st.ubar = ubar;
    st.C = seed_c / ubar;
    st.S2 = s0 - 0.5 * seed_gap;
    st.S3 = s0 + 0.5 * seed_gap;
    return st;
}

FrontConstants calibrate_front_constants(double m, const CalibrationDomain& dom) {
    FrontConstants c;
    c.m = m;
    c.c_s3_low = std::numeric_limits<double>::infinity();
    c.c_t = std::numeric_limits<double>::infinity();
    const double amin = alpha_min(m);
    for (double x : dom.alphas_above_min)
        for (double ubar : dom.ubars)
            for (double s0 : dom.s0s) {
                const double alpha = amin + x * (1.0 - amin);
                const SupersolutionState st = limit_configuration(m, alpha, ubar, s0);
                const SupersolutionRun run = run_to_hits(st);
                const double t_both = std::min(run.T_lower, run.T_upper);
                const double low_scale = std::pow(1.0 - alpha, (m - 1.0) / m) * ubar;
                for (double t : log_grid(1e-6 * run.T_lower, run.traj.t_end(), 200)) {
                    const auto y = run.traj.at(t);
                    const double tm = std::pow(t, 1.0 / m);
                    if (t <= run.T_lower) c.c_s2 = std::max(c.c_s2, (s0 - y[1]) / (ubar * tm));
                    if (t <= t_both) c.c_s3_low = std::min(c.c_s3_low, (y[2] - s0) / (low_scale * tm));
                    c.c_s3_up = std::max(c.c_s3_up, (y[2] - s0) / (ubar * tm));
                }
                c.c_t = std::min(c.c_t, run.T_lower / std::pow(s0 / ubar, m));
                c.c_t = std::min(c.c_t, run.T_upper / std::pow((1.0 - s0) / ubar, m));
            }
    return c;
}

FrontConstants analytic_front_constants(double m) {
    // From gap^m >= m (1-alpha)^m ubar^m sigma'(1)^m t, |S2'| <= 3/2 K / gap^(m-1)
    // and S3' <= K / gap^(m-1) with K = (1-alpha)^(m-1) ubar^m sigma'(1)^(m-1).
    FrontConstants c;
    c.m = m;
    c.c_s2 = 1.5 * std::pow(m, 1.0 / m);
    c.c_s3_up = std::pow(m, 1.0 / m);
    c.c_t = 1.0 / (std::pow(2.0, m) * m);
    c.c_s3_low = 0.0;  // depends on 1 - s0, no uniform closed form
    return c;
}

FrontConstants frozen_front_constants(double m) {
    // Sweep extrema (tools/calibrate_fronts) with 10% safety margins.
    struct Row {
        double m, c_s2, c_s3_low, c_s3_up, c_t;
    };
    static const Row table[] = {
        {1.5, 1.05983, 0.261609, 0.838574, 0.824204},
        {2.0, 1.04028, 0.283538, 0.771682, 0.994014},
        {3.0, 0.941367, 0.270700, 0.670046, 1.43305},
        {4.0, 0.860081, 0.251510, 0.604283, 2.37429},
    };
    for (const Row& r : table)
        if (r.m == m) return {r.m, r.c_s2, r.c_s3_low, r.c_s3_up, r.c_t};
    throw std::invalid_argument("no frozen front constants for m = " + std::to_string(m));
}

BoundCheck check_front_bounds(const SupersolutionRun& run, const SupersolutionState& init, double s0,
                              const FrontConstants& c, std::span<const double> log_times) {
    const double m = init.m, ubar = init.ubar, alpha = init.alpha;
    const double t_both = std::min(run.T_lower, run.T_upper);
    BoundCheck b;
    b.worst_s2 = b.worst_s3_low = b.worst_s3_up = std::numeric_limits<double>::infinity();
    for (double t : log_times) {
        if (t > run.traj.t_end()) continue;
        const auto y = run.traj.at(t);
        const double tm = std::pow(t, 1.0 / m);
        if (t <= run.T_lower) b.worst_s2 = std::min(b.worst_s2, y[1] - (s0 - c.c_s2 * ubar * tm));
        if (t <= t_both)
            b.worst_s3_low =
                std::min(b.worst_s3_low, y[2] - (s0 + c.c_s3_low * std::pow(1.0 - alpha, (m - 1.0) / m) * ubar * tm));
        b.worst_s3_up = std::min(b.worst_s3_up, s0 + c.c_s3_up * ubar * tm - y[2]);
    }
    b.worst_t = std::min(run.T_lower - c.c_t * std::pow(s0 / ubar, m),
                         run.T_upper - c.c_t * std::pow((1.0 - s0) / ubar, m));
    return b;
}

} // namespace coulombflow
