// Acceptance criteria, one line each. Tolerances are pinned here and never
// adjusted to make a criterion pass.
#include "coulombflow/barrier_ode.hpp"
#include "coulombflow/hj_fronts.hpp"
#include "coulombflow/pde_solver.hpp"
#include "coulombflow/rearrangement.hpp"
#include "coulombflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace coulombflow;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

ScalarField cosine_1d(int n, double base, double amp, double shift = 0.0) {
    const TorusGrid g = make_grid(1, n);
    ScalarField u(g);
    for (int i = 0; i < n; ++i) u[std::size_t(i)] = base + amp * std::cos(2.0 * std::numbers::pi * (g.coord(i) - shift));
    return u;
}

SolverConfig uniform_outputs(double m, double t_end, int count) {
    SolverConfig cfg;
    cfg.m = m;
    cfg.t_end = t_end;
    for (int k = 1; k <= count; ++k) cfg.output_times.push_back(t_end * k / count);
    if (m < 1.0) cfg.floor_m_lt_1 = 1e-3;
    return cfg;
}

// The reference runs: 1 + 0.5 cos(2 pi x) at n = 256 for the four mobilities,
// plus a 2D run at 64^2.
struct SuiteRuns {
    std::map<std::string, Trajectory> runs;
    std::vector<std::string> cosine_names;
};

const SuiteRuns& suite_runs() {
    static const SuiteRuns s = [] {
        SuiteRuns out;
        for (double m : {0.5, 1.0, 2.0, 4.0}) {
            const std::string name = "cosine m=" + fmt(m);
            out.runs[name] = run(cosine_1d(256, 1.0, 0.5), uniform_outputs(m, 5.0, 50));
            out.cosine_names.push_back(name);
        }
        const TorusGrid g2 = make_grid(2, 64);
        ScalarField u2(g2);
        for (std::size_t idx = 0; idx < g2.size(); ++idx) {
            const double x = g2.coord(int(idx % 64)), y = g2.coord(int(idx / 64));
            u2[idx] = 1.0 + 0.3 * std::cos(2.0 * std::numbers::pi * x) + 0.2 * std::sin(2.0 * std::numbers::pi * (x + 2 * y));
        }
        out.runs["2d m=2"] = run(u2, uniform_outputs(2.0, 1.0, 10));
        return out;
    }();
    return s;
}

double measured_of(const std::vector<CheckResult>& checks, const std::string& id) {
    for (const auto& c : checks)
        if (c.check_id == id) return c.measured;
    throw std::logic_error("missing check " + id);
}

Outcome mass_conservation() {
    double worst = 0.0;
    for (const auto& [name, traj] : suite_runs().runs)
        worst = std::max(worst, measured_of(check_conservation_and_monotonicity(traj), "mass_conservation"));
    return {worst <= 1e-11, "max relative mass drift " + fmt(worst) + " (bound 1e-11)"};
}

Outcome lp_decrease() {
    double worst = 0.0;
    for (const auto& name : suite_runs().cosine_names) {
        const auto checks = check_conservation_and_monotonicity(suite_runs().runs.at(name));
        worst = std::max({worst, measured_of(checks, "l2_nonincreasing"), measured_of(checks, "linf_nonincreasing")});
    }
    return {worst <= 1e-8, "largest increase of L2 or Linf over a recorded interval " + fmt(worst) + " (bound 1e-8)"};
}

Outcome energy_dissipation() {
    bool ok = true;
    double worst_rel = 0.0;
    for (const auto& [name, traj] : suite_runs().runs) {
        const double e0 = traj.observables.front().energy;
        const double v = dissipation_check(traj);
        ok = ok && v <= 1e-6 * e0 + 1e-12;
        worst_rel = std::max(worst_rel, v / e0);
    }
    // Refinement on the cosine m = 2 run: the violation must shrink at least like h.
    std::vector<double> v;
    for (int n : {128, 256, 512}) v.push_back(dissipation_check(run(cosine_1d(n, 1.0, 0.5), uniform_outputs(2.0, 5.0, 50))));
    const bool shrinks = v[1] <= 0.5 * v[0] && v[2] <= 0.5 * v[1];
    return {ok && shrinks, "max (E + int D - E0)/E0 = " + fmt(worst_rel) + "; refinement violations " + fmt(v[0]) + ", " +
                               fmt(v[1]) + ", " + fmt(v[2])};
}

Outcome barriers() {
    double worst = -1.0;
    for (const auto& name : suite_runs().cosine_names) {
        const auto checks = check_barriers(suite_runs().runs.at(name));
        worst = std::max({worst, measured_of(checks, "upper_barrier"), measured_of(checks, "lower_barrier")});
    }
    return {worst <= 0.02, "largest barrier excess " + fmt(worst) + " (bound 0.02 ubar, ubar = 1)"};
}

Outcome fast_diffusion_lower_barrier() {
    // u0 = 0.01 + 0.99 (1 - cos 2 pi x)^2 / 1.5: mean 1, minimum 0.01.
    const TorusGrid g = make_grid(1, 256);
    ScalarField u0(g);
    for (int i = 0; i < g.n; ++i) {
        const double c = 1.0 - std::cos(2.0 * std::numbers::pi * g.coord(i));
        u0[std::size_t(i)] = 0.01 + 0.99 * c * c / 1.5;
    }
    const double tau = tau_half({mean(u0), u0.min(), 0.5});
    SolverConfig cfg;
    cfg.m = 0.5;
    cfg.floor_m_lt_1 = 0.005;
    cfg.t_end = tau;
    for (int k = 1; k * 0.01 < tau; ++k) cfg.output_times.push_back(k * 0.01);
    const Trajectory traj = run(u0, cfg);
    double worst = std::numeric_limits<double>::infinity();
    double worst_t = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double t = traj.times[k];
        if (t < 0.05) continue;
        const double margin = traj.snapshots[k].min() - 0.9 * t * t / 4.0;
        if (margin < worst) worst = margin, worst_t = t;
    }
    return {worst >= 0.0, "min over t in [0.05, " + fmt(tau) + "] of min u - 0.9 t^2/4 = " + fmt(worst) + " at t = " +
                              fmt(worst_t)};
}

Outcome exponential_convergence() {
    std::ostringstream os;
    bool ok = true;
    for (double m : {0.5, 1.0, 2.0}) {
        const RateFit f = fit_decay_rate(suite_runs().runs.at("cosine m=" + fmt(m)), Norm::l1);
        ok = ok && !f.degenerate && f.slope <= -0.85;
        os << "L1 slope m=" << fmt(m) << ": " << fmt(f.slope) << "; ";
    }
    // c = min u0 = 0.5, rate c^m = 0.25.
    const RateFit h = fit_decay_rate(suite_runs().runs.at("cosine m=2"), Norm::hm1);
    ok = ok && !h.degenerate && h.slope <= -0.85 * 0.25;
    os << "Hm1 slope m=2: " << fmt(h.slope) << " (bounds -0.85, -0.2125)";
    return {ok, os.str()};
}

Outcome barrier_ode_exactness() {
    double logistic = 0.0;
    for (auto [beta, ubar] : {std::pair{0.2, 1.0}, {3.0, 2.0}, {0.5, 0.7}})
        for (int i = 0; i <= 100; ++i) {
            const double t = 0.1 * i;
            const double exact = ubar / (1.0 + (ubar / beta - 1.0) * std::exp(-ubar * t));
            logistic = std::max(logistic, std::abs(phi({ubar, beta, 1.0}, t) - exact));
        }
    const BarrierParams combos[] = {{1.0, 0.1, 0.5}, {1.0, 2.0, 0.5}, {1.0, 0.3, 2.0},
                                    {1.0, 3.0, 2.0}, {2.0, 0.5, 4.0}, {1.0, infinite_beta, 2.0}};
    int violations = 0;
    for (const auto& p : combos)
        for (int i = 0; i < 50; ++i) {
            const double t = 1e-3 * std::pow(1e5, i / 49.0) / std::pow(p.ubar, p.m);
            const double v = phi(p, t);
            const Envelope e = phi_envelopes(p, t);
            const double slack = 1e-9 * std::max(1.0, std::abs(v));
            if (v < e.lower - slack || v > e.upper + slack) ++violations;
        }
    return {logistic <= 1e-8 && violations == 0,
            "max |phi - logistic| = " + fmt(logistic) + "; envelope violations " + std::to_string(violations) + "/300"};
}

ScalarField random_field(const TorusGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    ScalarField u(g);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = dist(rng);
    return u;
}

Outcome rearrangement_identities() {
    std::mt19937_64 rng(20240611);
    int count_mismatch = 0;
    double norm_err = 0.0;
    int contraction_violations = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const TorusGrid g = trial % 2 == 0 ? make_grid(1, 256) : make_grid(2, 32);
        const ScalarField u = random_field(g, rng), v = random_field(g, rng);
        const RearrangedProfile pu = rearrange(u), pv = rearrange(v);
        for (int j = 0; j < 20; ++j) {
            const double theta = u.min() + (u.max() - u.min()) * j / 20.0;
            const auto cu = std::count_if(u.values().begin(), u.values().end(), [&](double x) { return x > theta; });
            const auto cs = std::count_if(pu.u_star.begin(), pu.u_star.end(), [&](double x) { return x > theta; });
            if (cu != cs) ++count_mismatch;
        }
        for (double p : {1.0, 2.0, 3.5}) {
            double s = 0.0;
            for (double x : pu.u_star) s += std::pow(x, p) * pu.cell_measure;
            norm_err = std::max(norm_err, std::abs(std::pow(s, 1.0 / p) - lp_norm(u, p)) / lp_norm(u, p));
        }
        norm_err = std::max(norm_err, std::abs(pu.u_star.front() - linf_norm(u)));
        double star = 0.0;
        for (std::size_t i = 0; i < pu.size(); ++i) star += std::abs(pu.u_star[i] - pv.u_star[i]) * pu.cell_measure;
        if (star > l1_distance(u, v) * (1.0 + 1e-14)) ++contraction_violations;
    }
    return {count_mismatch == 0 && norm_err <= 1e-12 && contraction_violations == 0,
            "level-count mismatches " + std::to_string(count_mismatch) + "/200; max relative Lp error " + fmt(norm_err) +
                "; L1 contraction violations " + std::to_string(contraction_violations) + "/10"};
}

Outcome subsolution_residual_check() {
    std::vector<double> r;
    for (int n : {128, 256, 512}) {
        const Trajectory traj = run(cosine_1d(n, 1.0, 0.5), uniform_outputs(1.0, 5.0, 50));
        std::vector<RearrangedProfile> profiles;
        for (const auto& s : traj.snapshots) profiles.push_back(rearrange(s));
        r.push_back(subsolution_residual(profiles, traj.times, 1.0, 1.0, TimeSamples::interior));
    }
    // The violation is the positive part of the residual.
    auto viol = [](double x) { return std::max(x, 0.0); };
    const bool ok = r[1] <= 0.05 && viol(r[1]) <= viol(r[0]) && viol(r[2]) <= viol(r[1]);
    return {ok, "max residual at n = 128, 256, 512: " + fmt(r[0]) + ", " + fmt(r[1]) + ", " + fmt(r[2]) +
                    " (bound 0.05 ubar^2 at n = 256)"};
}

Outcome front_tracking_agreement() {
    // u0 = (ubar/L) 1_[0.25, 0.75], L = 0.5, mollified over two cells.
    const TorusGrid g = make_grid(1, 256);
    ScalarField u0(g);
    for (int i = 0; i < g.n; ++i) u0[std::size_t(i)] = (g.coord(i) >= 0.25 && g.coord(i) < 0.75) ? 2.0 : 0.0;
    u0 = mollify(u0, 2.0 * g.h);
    const Trajectory traj = run(u0, uniform_outputs(2.0, 1.0, 20));
    const FrontTrajectory fr = integrate_single_vortex({0.0, 0.5, 1.0, 2.0}, 1.0);
    // Support is read at the front midpoint ubar/2: with epsilon = h the
    // viscous tail puts any tiny threshold far ahead of the shock.
    const double theta = 0.5;
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto y = fr.at(traj.times[k]);
        worst = std::max(worst, std::abs(support_measure(traj.snapshots[k], theta) - (y[1] - y[0])));
    }
    const double tol = std::max(0.03, 3.0 * g.h);

    // m = 1 fronts against exact exponentials.
    double exact_err = 0.0;
    const FrontTrajectory s1 = integrate_single_vortex({0.2, 0.6, 1.5, 1.0}, 3.0);
    for (std::size_t i = 0; i < s1.t.size(); ++i) {
        const double e = std::exp(-1.5 * s1.t[i]);
        exact_err = std::max({exact_err, std::abs(s1.S[i][0] - 0.2 * e), std::abs(s1.S[i][1] - (1.0 - 0.4 * e))});
    }
    const TwoVortexState tv{0.1, 0.3, 0.6, 0.8, 0.5, 1.0, 1.0};
    const FrontTrajectory s2 = integrate_two_vortex(tv, 3.0);
    for (std::size_t i = 0; i < s2.t.size(); ++i) {
        const double e = std::exp(-s2.t[i]);
        const double ex[4] = {0.1 * e, 0.5 - 0.2 * e, 0.5 + 0.1 * e, 1.0 - 0.2 * e};
        for (int c = 0; c < 4; ++c) exact_err = std::max(exact_err, std::abs(s2.S[i][std::size_t(c)] - ex[c]));
    }
    return {worst <= tol && exact_err <= 1e-8, "max |S - (S2 - S1)| = " + fmt(worst) + " (bound " + fmt(tol) +
                                                   "); m = 1 front error " + fmt(exact_err) + " (bound 1e-8)"};
}

Outcome comparison_principle() {
    SupersolutionState st;
    st.m = 2.0;
    st.ubar = 1.0;
    st.alpha = 0.8;
    st.C = 0.01;
    st.S2 = 0.39;
    st.S3 = 0.4;
    const SupersolutionRun fr = integrate_supersolution(st, 2.0);
    const double t_end = std::min(fr.T_lower, fr.traj.t_end());

    const TorusGrid g = make_grid(1, 256);
    ScalarField u0(g);
    for (int i = 0; i < g.n; ++i) u0[std::size_t(i)] = (g.coord(i) >= 0.25 && g.coord(i) < 0.75) ? 2.0 : 0.0;
    u0 = mollify(u0, 2.0 * g.h);
    const Trajectory traj = run(u0, uniform_outputs(2.0, t_end, 40));
    const CheckResult r = check_comparison(traj, fr, st);
    return {r.measured <= 0.02 * st.ubar,
            "max (k - k_super) = " + fmt(r.measured) + " over t in [0, " + fmt(t_end) + "] (bound 0.02 ubar)"};
}

Outcome waiting_time() {
    const double m = 4.0, S0 = 0.5;
    const TorusGrid g = make_grid(1, 512);
    ScalarField jump(g), lipschitz(g);
    for (int i = 0; i < g.n; ++i) {
        const double s = 2.0 * std::abs(g.coord(i) - 0.5);
        jump[std::size_t(i)] = s < S0 ? 1.0 : 0.0;
        lipschitz[std::size_t(i)] = s < S0 ? std::pow(S0 - s, 1.0 / (m - 1.0)) : 0.0;  // power_edge, exponent 1/(m-1)
    }
    // Without added viscosity: any epsilon > 0 spreads the support at once.
    SolverConfig cfg = uniform_outputs(m, 0.4, 40);
    cfg.epsilon = 0.0;
    const double delta = 3.0 * g.cell_measure;

    const WaitingIndicator ij = waiting_time_indicator(jump, m, S0);
    const WaitingIndicator il = waiting_time_indicator(lipschitz, m, S0);
    const Trajectory tj = run(jump, cfg);
    const Trajectory tl = run(lipschitz, cfg);

    double grown = 0.0;
    for (std::size_t k = 0; k < tj.times.size(); ++k)
        if (tj.times[k] <= 0.2) grown = std::max(grown, support_measure(tj.snapshots[k], default_support_threshold(jump)));
    const double window = lipschitz_window(tl);
    double frozen = 0.0;
    for (std::size_t k = 0; k < tl.times.size(); ++k)
        if (tl.times[k] <= window)
            frozen = std::max(frozen, support_measure(tl.snapshots[k], default_support_threshold(lipschitz)));

    const bool ok = grown >= S0 + delta && frozen <= S0 + delta && ij.classification == WaitingClass::diverges &&
                    il.classification == WaitingClass::finite;
    return {ok, "jump: max S(t <= 0.2) = " + fmt(grown) + " (need >= " + fmt(S0 + delta) + "), indicator " +
                    to_string(ij.classification) + "; Lipschitz: max S on [0, " + fmt(window) + "] = " + fmt(frozen) +
                    " (need <= " + fmt(S0 + delta) + "), indicator " + to_string(il.classification)};
}

Outcome weak_strong_stability() {
    auto pair_constant = [](int n, double delta) {
        const SolverConfig cfg = uniform_outputs(1.0, 1.0, 20);
        ScalarField v = cosine_1d(n, 1.0, 0.5);
        const ScalarField p = cosine_1d(n, 0.0, 1.0, 0.25);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += delta * p[i];
        return fitted_stability_constant(run(cosine_1d(n, 1.0, 0.5), cfg), run(v, cfg));
    };
    const double ref = pair_constant(128, 1e-2);
    const double others[] = {pair_constant(128, 5e-3), pair_constant(256, 1e-2), pair_constant(256, 5e-3)};
    double worst = 0.0;
    for (double c : others) worst = std::max(worst, std::abs(c - ref) / std::abs(ref));
    return {std::isfinite(ref) && worst <= 0.25, "C(n=128, delta=1e-2) = " + fmt(ref) + "; others " + fmt(others[0]) +
                                                     ", " + fmt(others[1]) + ", " + fmt(others[2]) +
                                                     "; max relative spread " + fmt(worst) + " (bound 0.25)"};
}

std::vector<Sample> sample_grid(double t_max, int nt, int ns) {
    std::vector<Sample> out;
    for (int i = 1; i <= nt; ++i)
        for (int j = 1; j <= ns; ++j) out.push_back({t_max * i / (nt + 1), double(j) / (ns + 1)});
    return out;
}

Outcome viscosity_residuals() {
    double worst_exact = 0.0;
    for (double m : {1.0, 2.0, 3.0}) {
        const SingleVortexState s{0.1, 0.4, 1.0, m};
        const FrontTrajectory tr = integrate_single_vortex(s, 1.0);
        const KEvaluator ev = single_vortex_evaluator(tr, s);
        const auto samples = sample_grid(1.0, 20, 99);
        worst_exact = std::max({worst_exact, std::abs(viscosity_residual(ev, m, 1.0, ResidualKind::sub, samples)),
                                std::abs(viscosity_residual(ev, m, 1.0, ResidualKind::super, samples))});

        const TwoVortexState w{0.05, 0.2, 0.6, 0.75, 0.4, 1.0, m};
        const FrontTrajectory t2 = integrate_two_vortex(w, 0.5);
        const KEvaluator e2 = two_vortex_evaluator(t2, w);
        const auto s2 = sample_grid(0.5, 20, 99);
        worst_exact = std::max({worst_exact, std::abs(viscosity_residual(e2, m, 1.0, ResidualKind::sub, s2)),
                                std::abs(viscosity_residual(e2, m, 1.0, ResidualKind::super, s2))});
    }
    double worst_super = std::numeric_limits<double>::infinity();
    for (double m : {1.5, 2.0, 4.0}) {
        SupersolutionState st;
        st.m = m;
        st.alpha = 1.0 - 0.5 * (m - 1.0) / (2.0 * m);
        st.C = 0.05;
        st.S2 = 0.4;
        st.S3 = 0.5;
        const SupersolutionRun run = integrate_supersolution(st, 2.0);
        const KEvaluator ev = supersolution_evaluator(run, st);
        const auto samples = sample_grid(std::min(run.T_lower, run.traj.t_end()), 20, 99);
        worst_super = std::min(worst_super, viscosity_residual(ev, m, 1.0, ResidualKind::super, samples));
    }
    // Bounds on configurations away from the calibration sweep.
    bool bounds = true;
    std::ostringstream os;
    for (double m : {1.5, 2.0, 3.0, 4.0}) {
        const double amin = 1.0 - (m - 1.0) / (2.0 * m);
        std::vector<SupersolutionState> configs;
        std::vector<double> s0s;
        for (double x : {0.25, 0.7})
            for (double s0 : {0.3, 0.45, 0.7}) {
                configs.push_back(limit_configuration(m, amin + x * (1.0 - amin), 1.0, s0));
                s0s.push_back(s0);
            }
        const CheckResult r = check_front_tracking_bounds(m, frozen_front_constants(m), configs, s0s);
        bounds = bounds && r.status == Status::pass;
        os << " m=" << fmt(m) << ":" << fmt(-r.measured);
    }
    return {worst_exact <= 1e-6 && worst_super >= -1e-6 && bounds,
            "exact-front |r| " + fmt(worst_exact) + " (bound 1e-6); supersolution min r " + fmt(worst_super) +
                " (bound -1e-6); front-bound margins" + os.str()};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"mass conservation", mass_conservation},
        {"Lp norms nonincreasing", lp_decrease},
        {"energy dissipation inequality", energy_dissipation},
        {"max/min barriers", barriers},
        {"fast-diffusion lower barrier", fast_diffusion_lower_barrier},
        {"exponential convergence rates", exponential_convergence},
        {"barrier ODE exactness and envelopes", barrier_ode_exactness},
        {"rearrangement identities", rearrangement_identities},
        {"subsolution residual", subsolution_residual_check},
        {"front-tracking agreement", front_tracking_agreement},
        {"comparison with the front supersolution", comparison_principle},
        {"waiting time", waiting_time},
        {"weak-strong stability constant", weak_strong_stability},
        {"viscosity residuals and front bounds", viscosity_residuals},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
