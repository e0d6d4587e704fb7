#include "coulombflow/commands.hpp"
#include "coulombflow/hj_fronts.hpp"
#include "coulombflow/io.hpp"
#include "coulombflow/rearrangement.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace coulombflow {

namespace fs = std::filesystem;
using json = nlohmann::json;

void ensure_output_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
    const fs::path probe = dir / ".coulombflow_write_probe";
    {
        std::ofstream f(probe);
        if (!f) throw ConfigError("output directory is not writable: " + dir.string());
    }
    fs::remove(probe, ec);
}

std::string time_tag(double t) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, t);
    return std::string(buf, r.ptr);
}

namespace {

json finite_or_string(double x) {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : "-inf";
}

void write_snapshot(const ScalarField& u, const fs::path& path) {
    const TorusGrid& g = u.grid();
    CsvTable t;
    t.header = g.dim == 1 ? std::vector<std::string>{"x", "value"} : std::vector<std::string>{"x", "y", "value"};
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const double x = g.coord(int(idx % std::size_t(g.n)));
        if (g.dim == 1) t.rows.push_back({x, u[idx]});
        else t.rows.push_back({x, g.coord(int(idx / std::size_t(g.n))), u[idx]});
    }
    write_csv(path, t);
}

void write_profile(const RearrangedProfile& p, const fs::path& path) {
    CsvTable t;
    t.header = {"s", "u_star", "k"};
    for (std::size_t i = 0; i < p.size(); ++i) t.rows.push_back({p.midpoint(i), p.u_star[i], p.k_at(p.midpoint(i))});
    write_csv(path, t);
}

} // namespace

void write_trajectory(const Trajectory& traj, const fs::path& dir, double support_threshold, bool svg) {
    ensure_output_dir(dir);
    CsvTable obs;
    obs.header = {"t", "mass", "min", "max", "l1", "l2", "linf", "energy", "dissipation", "dissipation_rate", "grad_sup"};
    for (const auto& r : traj.observables)
        obs.rows.push_back({r.t, r.mass, r.min, r.max, r.l1, r.l2, r.linf, r.energy, r.cumulative_dissipation,
                            r.dissipation_rate, r.grad_sup});
    write_csv(dir / "observables.csv", obs);

    CsvTable support;
    support.header = {"t", "S"};
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const std::string tag = time_tag(traj.times[k]);
        write_snapshot(traj.snapshots[k], dir / ("u_" + tag + ".csv"));
        write_profile(rearrange(traj.snapshots[k]), dir / ("k_" + tag + ".csv"));
        support.rows.push_back({traj.times[k], support_measure(traj.snapshots[k], support_threshold)});
    }
    write_csv(dir / "support.csv", support);

    const TorusGrid& g = traj.snapshots.front().grid();
    const json meta = {{"dim", g.dim},
                       {"n", g.n},
                       {"m", traj.m},
                       {"epsilon", traj.epsilon},
                       {"epsilon_note", "vanishing-viscosity coupling epsilon = h unless configured"},
                       {"support_threshold", support_threshold},
                       {"steps", traj.steps},
                       {"snapshots", traj.times}};
    write_text(dir / "run.json", meta.dump(2) + "\n");

    if (svg) {
        auto series = [&](const std::string& col) {
            const std::size_t c = obs.column(col);
            PlotSeries s{col, {}, {}};
            for (const auto& row : obs.rows) {
                s.x.push_back(row[0]);
                s.y.push_back(row[c]);
            }
            return s;
        };
        write_text(dir / "observables.svg", render_svg({series("energy"), series("l2"), series("max"), series("min")},
                                                       "t", "observables"));
        PlotSeries s{"S", {}, {}};
        for (const auto& row : support.rows) {
            s.x.push_back(row[0]);
            s.y.push_back(row[1]);
        }
        write_text(dir / "support.svg", render_svg({s}, "t", "support measure"));
    }
}

int cmd_simulate(const ExperimentConfig& cfg, const fs::path& out) {
    if (!cfg.grid) throw ConfigError("config key 'grid': required by simulate");
    if (!cfg.solver) throw ConfigError("config key 'solver': required by simulate");
    if (!cfg.initial_condition) throw ConfigError("config key 'initial_condition': required by simulate");
    const ScalarField u0 = build_initial_condition(*cfg.initial_condition, *cfg.grid);
    if (cfg.solver->m < 1.0 && u0.min() < cfg.solver->floor_m_lt_1)
        throw ConfigError("config key 'solver.floor_m_lt_1': initial minimum is below the floor required for m < 1");
    ensure_output_dir(out);
    Trajectory traj;
    try {
        traj = run(u0, *cfg.solver);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const double theta = cfg.support_threshold.value_or(default_support_threshold(u0));
    write_trajectory(traj, out, theta, cfg.wants("svg"));
    return 0;
}

namespace {

void only_params(const FrontsSpec& f, const std::string& mode, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : f.params.items())
        if (!allowed.count(key)) throw ConfigError("config key 'fronts." + key + "': not used by mode " + mode);
}

double param(const FrontsSpec& f, const std::string& key, double fallback) {
    return f.params.contains(key) ? f.params.at(key).get<double>() : fallback;
}

} // namespace

int cmd_fronts(const std::string& mode, const ExperimentConfig& cfg, const fs::path& out) {
    if (!cfg.fronts) throw ConfigError("config key 'fronts': required by the fronts command");
    const FrontsSpec& f = *cfg.fronts;
    FrontTrajectory traj;
    json summary = {{"mode", mode}, {"m", f.m}, {"ubar", f.ubar}, {"t_end", f.t_end}};
    try {
        if (mode == "single") {
            only_params(f, mode, {"S1", "S2"});
            SingleVortexState st{param(f, "S1", 0.0), param(f, "S2", 0.5), f.ubar, f.m};
            traj = integrate_single_vortex(st, f.t_end);
        } else if (mode == "double") {
            only_params(f, mode, {"S1", "S2", "S3", "S4", "alpha"});
            TwoVortexState st{param(f, "S1", 0.0), param(f, "S2", 0.25), param(f, "S3", 0.5), param(f, "S4", 0.75),
                              param(f, "alpha", 0.5), f.ubar, f.m};
            traj = integrate_two_vortex(st, f.t_end);
        } else if (mode == "super") {
            only_params(f, mode, {"C", "alpha", "S2", "S3"});
            SupersolutionState st;
            st.C = param(f, "C", st.C);
            st.alpha = param(f, "alpha", st.alpha);
            st.S2 = param(f, "S2", st.S2);
            st.S3 = param(f, "S3", st.S3);
            st.ubar = f.ubar;
            st.m = f.m;
            const SupersolutionRun run = integrate_supersolution(st, f.t_end);
            traj = run.traj;
            summary["T_lower"] = finite_or_string(run.T_lower);
            summary["T_upper"] = finite_or_string(run.T_upper);
        } else {
            throw ConfigError("--mode must be one of single, double, super");
        }
    } catch (const HypothesisError& e) {
        throw ConfigError(std::string("fronts hypothesis violated: ") + e.what());
    } catch (const FrontCollapse& e) {
        summary["collapse"] = e.what();
        summary["collapse_time"] = e.t_reached;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("fronts: ") + e.what());
    }
    ensure_output_dir(out);
    summary["stopped_early"] = traj.stopped_early || summary.contains("collapse");
    summary["stop_reason"] = traj.stop_reason;
    write_text(out / "fronts_summary.json", summary.dump(2) + "\n");
    if (traj.t.empty()) return 0;

    CsvTable t;
    t.header = {"t"};
    t.header.insert(t.header.end(), traj.names.begin(), traj.names.end());
    const double t_end = traj.t_end();
    for (int i = 0; i < f.samples; ++i) {
        const double time = i + 1 == f.samples ? t_end : t_end * i / (f.samples - 1);
        std::vector<double> row{time};
        for (double s : traj.at(time)) row.push_back(s);
        t.rows.push_back(row);
    }
    write_csv(out / "fronts.csv", t);
    if (cfg.wants("svg")) {
        std::vector<PlotSeries> series;
        for (std::size_t c = 1; c < t.header.size(); ++c) {
            PlotSeries s{t.header[c], {}, {}};
            for (const auto& row : t.rows) {
                s.x.push_back(row[0]);
                s.y.push_back(row[c]);
            }
            series.push_back(s);
        }
        write_text(out / "fronts.svg", render_svg(series, "t", "front positions (" + mode + ")"));
    }
    return 0;
}

int cmd_verify(const ExperimentConfig& cfg, const fs::path& out, int jobs) {
    if (!cfg.suites) throw ConfigError("config key 'verify.suites': required by verify");
    const auto known = suite_names();
    for (const auto& s : *cfg.suites)
        if (std::find(known.begin(), known.end(), s) == known.end())
            throw ConfigError("config key 'verify.suites': unknown suite '" + s + "'");
    ensure_output_dir(out);
    Report report;
    for (const auto& s : *cfg.suites) {
        Report r = run_suite(s, cfg, out, jobs);
        report.checks.insert(report.checks.end(), r.checks.begin(), r.checks.end());
        report.warnings.insert(report.warnings.end(), r.warnings.begin(), r.warnings.end());
    }
    if (report.checks.empty()) report.warnings.push_back("no checks were run");
    return emit_report(report, cfg.echo, cfg.text, (out / "report.json").string());
}

int cmd_plot(const fs::path& in, const fs::path& out, const std::string& x, const std::vector<std::string>& ys) {
    CsvTable t;
    try {
        t = read_csv(in);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (t.header.empty()) throw ConfigError(in.string() + ": missing header row");
    if (ys.empty()) throw ConfigError("--y needs at least one column");
    std::vector<PlotSeries> series;
    try {
        const std::size_t xc = t.column(x);
        for (const auto& name : ys) {
            const std::size_t yc = t.column(name);
            PlotSeries s{name, {}, {}};
            for (const auto& row : t.rows) {
                s.x.push_back(row[xc]);
                s.y.push_back(row[yc]);
            }
            series.push_back(s);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(in.string() + ": " + e.what());
    }
    if (out.has_parent_path()) ensure_output_dir(out.parent_path());
    write_text(out, render_svg(series, x, in.filename().string()));
    return 0;
}

} // namespace coulombflow
