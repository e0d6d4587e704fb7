#include "coulombflow/commands.hpp"
#include "coulombflow/hj_fronts.hpp"
#include "coulombflow/parallel.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace coulombflow {

namespace fs = std::filesystem;

namespace {

struct RunSpec {
    std::string name;
    ScalarField u0;
    SolverConfig cfg;
};

using Task = std::function<std::vector<CheckResult>()>;

ScalarField cosine_field(int n, double base, double amp, double shift = 0.0) {
    const TorusGrid g = make_grid(1, n);
    ScalarField u(g);
    for (int i = 0; i < n; ++i) u[std::size_t(i)] = base + amp * std::cos(2.0 * std::numbers::pi * (g.coord(i) - shift));
    return u;
}

SolverConfig solver(double m, double t_end, int outputs) {
    SolverConfig cfg;
    cfg.m = m;
    cfg.t_end = t_end;
    for (int k = 1; k <= outputs; ++k) cfg.output_times.push_back(t_end * k / outputs);
    if (m < 1.0) cfg.floor_m_lt_1 = 1e-3;
    return cfg;
}

std::vector<Trajectory> simulate_all(const std::vector<RunSpec>& runs, const fs::path& dir, int jobs, bool svg) {
    std::vector<Trajectory> out(runs.size());
    parallel_for(runs.size(), jobs, [&](std::size_t i) {
        out[i] = run(runs[i].u0, runs[i].cfg);
        write_trajectory(out[i], dir / runs[i].name, default_support_threshold(runs[i].u0), svg);
    });
    return out;
}

std::vector<CheckResult> run_tasks(const std::vector<Task>& tasks, int jobs) {
    std::vector<std::vector<CheckResult>> slots(tasks.size());
    parallel_for(tasks.size(), jobs, [&](std::size_t i) { slots[i] = tasks[i](); });
    std::vector<CheckResult> out;
    for (auto& s : slots) out.insert(out.end(), s.begin(), s.end());
    return out;
}

void tag(std::vector<CheckResult>& checks, const std::string& run_name) {
    for (auto& c : checks) c.context["run"] = run_name;
}

// Weak form of the entropy inequalities, probed with smooth bumps. The probes
// only see the time stepping through snapshots, so a small slack remains.
CheckResult check_entropy(const Trajectory& traj, const SolverConfig& cfg) {
    const std::vector<double> kappas{0.0, 0.5, 0.75, 1.0, 1.25, 1.5};
    const double r = entropy_residual(traj, cfg, kappas);
    const double ubar = mean(traj.snapshots.front());
    return make_check("entropy_inequalities", "Kruzhkov entropy inequalities in weak form", -r, 0.0, 1e-3 * ubar,
                      run_context(traj));
}

std::vector<CheckResult> trajectory_checks(const Trajectory& traj, const SolverConfig& cfg) {
    std::vector<CheckResult> out = check_conservation_and_monotonicity(traj);
    out.push_back(check_energy_dissipation(traj));
    for (auto& c : check_barriers(traj)) out.push_back(c);
    const Norm norms[] = {Norm::l1, Norm::linf, Norm::hm1};
    for (auto& c : check_asymptotics(traj, norms)) out.push_back(c);
    out.push_back(check_entropy(traj, cfg));
    return out;
}

double max_abs_diff(const FrontTrajectory& tr, const std::function<std::vector<double>(double)>& exact) {
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        const auto e = exact(tr.t[i]);
        for (std::size_t c = 0; c < e.size(); ++c) worst = std::max(worst, std::abs(tr.S[i][c] - e[c]));
    }
    return worst;
}

std::vector<CheckResult> front_checks() {
    std::vector<CheckResult> out;
    // m = 1 fronts relax exponentially towards their attractors.
    const SingleVortexState sv{0.2, 0.6, 1.0, 1.0};
    const auto single = integrate_single_vortex(sv, 3.0);
    out.push_back(make_check("single_vortex_exact", "single-vortex front ODE, exact m = 1 solution",
                             max_abs_diff(single, [&](double t) {
                                 const double e = std::exp(-t);
                                 return std::vector<double>{sv.S1 * e, 1.0 - (1.0 - sv.S2) * e};
                             }),
                             0.0, 1e-8));
    const TwoVortexState tv{0.1, 0.3, 0.6, 0.8, 0.5, 1.0, 1.0};
    const auto two = integrate_two_vortex(tv, 3.0);
    out.push_back(make_check("two_vortex_exact", "two-vortex front ODEs, exact m = 1 solution",
                             max_abs_diff(two, [&](double t) {
                                 const double e = std::exp(-t), a = tv.alpha;
                                 return std::vector<double>{tv.S1 * e, a - (a - tv.S2) * e, a - (a - tv.S3) * e,
                                                            1.0 - (1.0 - tv.S4) * e};
                             }),
                             0.0, 1e-8));

    // Viscosity residuals at smooth samples away from the kinks.
    for (double m : {1.0, 2.0}) {
        const SingleVortexState s{0.1, 0.4, 1.0, m};
        const auto tr = integrate_single_vortex(s, 1.0);
        const KEvaluator ev = single_vortex_evaluator(tr, s);
        std::vector<Sample> samples;
        for (int i = 1; i <= 9; ++i)
            for (int j = 1; j <= 39; ++j) samples.push_back({0.1 * i, 0.025 * j});
        const double sub = viscosity_residual(ev, m, s.ubar, ResidualKind::sub, samples);
        const double sup = viscosity_residual(ev, m, s.ubar, ResidualKind::super, samples);
        out.push_back(make_check("single_vortex_residual_m" + time_tag(m), "single vortex is a viscosity solution",
                                 std::max(std::abs(sub), std::abs(sup)), 0.0, 1e-6, {{"m", m}}));
    }
    for (double m : {1.0, 2.0}) {
        const TwoVortexState s{0.05, 0.2, 0.6, 0.75, 0.4, 1.0, m};
        const auto tr = integrate_two_vortex(s, 0.5);
        const KEvaluator ev = two_vortex_evaluator(tr, s);
        std::vector<Sample> samples;
        for (int i = 1; i <= 9; ++i)
            for (int j = 1; j <= 39; ++j) samples.push_back({0.05 * i, 0.025 * j});
        const double sub = viscosity_residual(ev, m, s.ubar, ResidualKind::sub, samples);
        const double sup = viscosity_residual(ev, m, s.ubar, ResidualKind::super, samples);
        out.push_back(make_check("two_vortex_residual_m" + time_tag(m), "two vortices form a viscosity solution",
                                 std::max(std::abs(sub), std::abs(sup)), 0.0, 1e-6, {{"m", m}}));
    }
    for (double m : {2.0, 4.0}) {
        SupersolutionState st;
        st.m = m;
        st.alpha = 0.9;
        st.C = 0.05;
        st.S2 = 0.4;
        st.S3 = 0.5;
        const SupersolutionRun run = integrate_supersolution(st, 2.0);
        const KEvaluator ev = supersolution_evaluator(run, st);
        std::vector<Sample> samples;
        const double T = std::min(run.T_lower, run.traj.t_end());
        for (int i = 1; i <= 9; ++i)
            for (int j = 1; j <= 39; ++j) samples.push_back({T * 0.1 * i, 0.025 * j});
        const double sup = viscosity_residual(ev, m, st.ubar, ResidualKind::super, samples);
        out.push_back(make_check("supersolution_residual_m" + time_tag(m), "front supersolution is a supersolution",
                                 -sup, 0.0, 1e-6, {{"m", m}}));
    }
    return out;
}

std::vector<CheckResult> front_bound_checks() {
    std::vector<CheckResult> out;
    for (double m : {2.0, 4.0}) {
        const FrontConstants c = frozen_front_constants(m);
        const double amin = 1.0 - (m - 1.0) / (2.0 * m);
        std::vector<SupersolutionState> configs;
        std::vector<double> s0s;
        for (double x : {0.25, 0.75})
            for (double s0 : {0.3, 0.6}) {
                configs.push_back(limit_configuration(m, amin + x * (1.0 - amin), 1.0, s0));
                s0s.push_back(s0);
            }
        CheckResult r = check_front_tracking_bounds(m, c, configs, s0s);
        r.check_id += "_m" + time_tag(m);
        out.push_back(r);
    }
    return out;
}

Report theorem_suite_small(const ExperimentConfig& cfg, const fs::path& dir, int jobs) {
    const int n = 128;
    std::vector<RunSpec> runs;
    for (double m : {0.5, 1.0, 2.0, 4.0})
        runs.push_back({"cosine_m" + time_tag(m), cosine_field(n, 1.0, 0.5), solver(m, 5.0, 50)});
    const auto trajs = simulate_all(runs, dir, jobs, cfg.wants("svg"));

    std::vector<Task> tasks;
    for (std::size_t i = 0; i < runs.size(); ++i)
        tasks.push_back([&, i] {
            auto c = trajectory_checks(trajs[i], runs[i].cfg);
            if (runs[i].cfg.m == 1.0) c.push_back(check_subsolution(trajs[i]));
            tag(c, runs[i].name);
            return c;
        });
    tasks.push_back(front_checks);
    tasks.push_back(front_bound_checks);
    return {run_tasks(tasks, jobs), {}};
}

// Larger suite: waiting time, comparison with the front supersolution and
// weak-strong stability, on top of the small one.
Report theorem_suite(const ExperimentConfig& cfg, const fs::path& dir, int jobs) {
    Report report = theorem_suite_small(cfg, dir / "small", jobs);
    const bool svg = cfg.wants("svg");

    // Waiting time, m = 4: jump edge against u0^(m-1) Lipschitz at the edge.
    const double m4 = 4.0, S0 = 0.5;
    const TorusGrid g512 = make_grid(1, 512);
    ScalarField jump(g512), lipschitz(g512);
    for (int i = 0; i < g512.n; ++i) {
        const double s = 2.0 * std::abs(g512.coord(i) - 0.5);
        jump[std::size_t(i)] = s < S0 ? 1.0 : 0.0;
        lipschitz[std::size_t(i)] = s < S0 ? std::pow(S0 - s, 1.0 / (m4 - 1.0)) : 0.0;
    }
    SolverConfig wt = solver(m4, 0.4, 40);
    wt.epsilon = 0.0;  // added viscosity would spread the support at once
    // Weak-strong pairs, m = 1.
    std::vector<RunSpec> runs{{"waiting_jump", jump, wt}, {"waiting_lipschitz", lipschitz, wt}};
    for (int n : {128, 256})
        for (double delta : {0.0, 1e-2, 5e-3}) {
            ScalarField u = cosine_field(n, 1.0, 0.5);
            const ScalarField p = cosine_field(n, 0.0, 1.0, 0.25);
            for (std::size_t i = 0; i < u.size(); ++i) u[i] += delta * p[i];
            runs.push_back({"pair_n" + std::to_string(n) + "_d" + time_tag(delta), u, solver(1.0, 1.0, 20)});
        }
    // Comparison with the front supersolution from a matched block.
    SupersolutionState st;
    st.m = 2.0;
    st.alpha = 0.8;
    st.C = 0.01;
    st.S2 = 0.39;
    st.S3 = 0.4;
    const SupersolutionRun fronts = integrate_supersolution(st, 2.0);
    const TorusGrid g256 = make_grid(1, 256);
    ScalarField block(g256);
    for (int i = 0; i < g256.n; ++i)
        block[std::size_t(i)] = (g256.coord(i) >= 0.25 && g256.coord(i) < 0.75) ? 2.0 : 0.0;
    runs.push_back({"comparison_block", mollify(block, 2.0 * g256.h),
                    solver(2.0, std::min(fronts.T_lower, fronts.traj.t_end()), 40)});
    // Fast diffusion from a near-vacuum minimum.
    const TorusGrid g256b = make_grid(1, 256);
    ScalarField thin(g256b);
    for (int i = 0; i < g256b.n; ++i) {
        const double c = 1.0 - std::cos(2.0 * std::numbers::pi * g256b.coord(i));
        thin[std::size_t(i)] = 0.01 + 0.99 * c * c / 1.5;
    }
    SolverConfig fd = solver(0.5, 1.5, 30);
    fd.floor_m_lt_1 = 0.005;
    runs.push_back({"fast_diffusion", thin, fd});
    const auto trajs = simulate_all(runs, dir, jobs, svg);

    std::vector<Task> tasks;
    tasks.push_back([&] {
        const std::size_t k = runs.size() - 1;
        auto c = check_barriers(trajs[k]);
        tag(c, runs[k].name);
        return c;
    });
    tasks.push_back([&] {
        const std::size_t k = runs.size() - 2;
        auto c = std::vector<CheckResult>{check_comparison(trajs[k], fronts, st)};
        tag(c, runs[k].name);
        return c;
    });
    for (std::size_t w = 0; w < 2; ++w)
        tasks.push_back([&, w] {
            const Trajectory& tr = trajs[w];
            const auto ind = waiting_time_indicator(tr.snapshots.front(), m4, S0);
            const double theta = default_support_threshold(tr.snapshots.front());
            auto c = std::vector<CheckResult>{check_waiting_time(tr, ind, S0, theta, lipschitz_window(tr))};
            tag(c, runs[w].name);
            return c;
        });
    tasks.push_back([&] {
        // Stability constants across perturbation size and resolution.
        std::vector<double> cs;
        std::vector<CheckResult> out;
        for (std::size_t base : {2u, 5u})
            for (std::size_t k = 1; k <= 2; ++k) {
                auto r = check_weak_strong(trajs[base], trajs[base + k]);
                r.context["run"] = runs[base + k].name;
                out.push_back(r);
                cs.push_back(r.measured);
            }
        const double ref = cs[0];
        out.push_back(check_constant_stability("weak_strong_constant_stability", ref,
                                               std::span<const double>(cs).subspan(1)));
        return out;
    });
    Report extra{run_tasks(tasks, jobs), {}};
    report.checks.insert(report.checks.end(), extra.checks.begin(), extra.checks.end());
    return report;
}

Report all_pass_fixture(const ExperimentConfig& cfg, const fs::path& dir, int jobs) {
    std::vector<RunSpec> runs{{"constant", ScalarField(make_grid(1, 32), 1.0), solver(2.0, 1.0, 4)}};
    const auto trajs = simulate_all(runs, dir, jobs, cfg.wants("svg"));
    auto checks = check_conservation_and_monotonicity(trajs[0]);
    checks.push_back(check_energy_dissipation(trajs[0]));
    for (auto& c : check_barriers(trajs[0])) checks.push_back(c);
    tag(checks, "constant");
    return {checks, {}};
}

Report corrupted_fixture(const ExperimentConfig& cfg, const fs::path& dir, int jobs) {
    std::vector<RunSpec> runs{{"leaky", cosine_field(32, 1.0, 0.5), solver(1.0, 0.5, 4)}};
    auto trajs = simulate_all(runs, dir, jobs, cfg.wants("svg"));
    // Negative control: inject a relative mass leak of 1e-3.
    auto& last = trajs[0].observables.back();
    last.mass *= 1.0 - 1e-3;
    auto checks = check_conservation_and_monotonicity(trajs[0]);
    tag(checks, "leaky");
    return {checks, {}};
}

Report inconclusive_fixture(const ExperimentConfig& cfg, const fs::path& dir, int jobs) {
    // Far too short to fit a decay rate, so the hypotheses are not met.
    std::vector<RunSpec> runs{{"short", cosine_field(32, 1.0, 0.5), solver(1.0, 0.5, 10)}};
    const auto trajs = simulate_all(runs, dir, jobs, cfg.wants("svg"));
    const Norm norms[] = {Norm::l1};
    auto checks = check_asymptotics(trajs[0], norms);
    tag(checks, "short");
    return {checks, {}};
}

using SuiteFn = Report (*)(const ExperimentConfig&, const fs::path&, int);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> suites{
        {"theorem-suite-small", theorem_suite_small},
        {"theorem-suite", theorem_suite},
        {"all-pass-fixture", all_pass_fixture},
        {"corrupted-fixture", corrupted_fixture},
        {"inconclusive-fixture", inconclusive_fixture},
    };
    return suites;
}

} // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
}

Report run_suite(const std::string& name, const ExperimentConfig& cfg, const fs::path& out, int jobs) {
    for (const auto& [n, fn] : registry())
        if (n == name) {
            Report r = fn(cfg, out / name, std::max(1, jobs));
            for (auto& c : r.checks) c.context["suite"] = name;
            return r;
        }
    throw ConfigError("unknown suite '" + name + "'");
}

} // namespace coulombflow
