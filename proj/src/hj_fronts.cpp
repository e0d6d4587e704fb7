#include "coulombflow/hj_fronts.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace coulombflow {

namespace {

constexpr double max_step = 1e-2;   // in units of 1/ubar^m
constexpr double rel_step = 1e-3;   // largest relative change of the gap per step
constexpr double collapse_gap = 1e-10;

template <std::size_t D>
using Vec = std::array<double, D>;

template <std::size_t D, class Rhs>
Vec<D> rk4(const Vec<D>& y, double h, Rhs&& f) {
    auto axpy = [](const Vec<D>& a, double c, const Vec<D>& b) {
        Vec<D> r;
        for (std::size_t i = 0; i < D; ++i) r[i] = a[i] + c * b[i];
        return r;
    };
    const Vec<D> k1 = f(y);
    const Vec<D> k2 = f(axpy(y, 0.5 * h, k1));
    const Vec<D> k3 = f(axpy(y, 0.5 * h, k2));
    const Vec<D> k4 = f(axpy(y, h, k3));
    Vec<D> r;
    for (std::size_t i = 0; i < D; ++i) r[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return r;
}

// The fronts move at speeds ~ gap^(1-m), so steps follow the gap scale.
double step_size(double gap, double speed, double ubar, double m) {
    const double cap = max_step / std::pow(ubar, m);
    return speed > 0.0 ? std::min(cap, rel_step * gap / speed) : cap;
}

template <std::size_t D>
double speed_of(const Vec<D>& dy) {
    double s = 0.0;
    for (double x : dy) s += std::abs(x);
    return s;
}

template <std::size_t D>
void push(FrontTrajectory& tr, double t, const Vec<D>& y, const Vec<D>& dy) {
    tr.t.push_back(t);
    tr.S.emplace_back(y.begin(), y.end());
    tr.dS.emplace_back(dy.begin(), dy.end());
}

[[noreturn]] void collapse(double t, double gap) {
    std::ostringstream os;
    os << "front gap collapsed to " << gap << " at t = " << t;
    throw FrontCollapse(os.str(), t);
}

// Generic fixed-step RK4 loop with an admissibility predicate.
template <std::size_t D, class Rhs, class Gap, class Ok>
FrontTrajectory integrate(std::vector<std::string> names, Vec<D> y, double t_end, double ubar, double m, Rhs&& f,
                          Gap&& gap, Ok&& ok) {
    FrontTrajectory tr;
    tr.names = std::move(names);
    double t = 0.0;
    push(tr, t, y, f(y));
    while (t < t_end) {
        const double g = gap(y);
        if (g < collapse_gap) collapse(t, g);
        double h = std::min(step_size(g, speed_of(f(y)), ubar, m), t_end - t);
        const Vec<D> next = rk4(y, h, f);
        if (!ok(next)) {
            tr.stopped_early = true;
            tr.stop_reason = "ordering violated after t = " + std::to_string(t);
            break;
        }
        y = next;
        t = (t_end - t <= h) ? t_end : t + h;
        push(tr, t, y, f(y));
    }
    return tr;
}

} // namespace

std::vector<double> FrontTrajectory::at(double time) const {
    if (t.empty()) throw std::logic_error("empty front trajectory");
    if (time <= t.front()) return S.front();
    if (time >= t.back()) return S.back();
    const std::size_t i = std::size_t(std::upper_bound(t.begin(), t.end(), time) - t.begin()) - 1;
    const double h = t[i + 1] - t[i];
    const double x = (time - t[i]) / h;
    const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
    const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
    std::vector<double> out(S[i].size());
    for (std::size_t c = 0; c < out.size(); ++c)
        out[c] = h00 * S[i][c] + h10 * h * dS[i][c] + h01 * S[i + 1][c] + h11 * h * dS[i + 1][c];
    return out;
}

FrontTrajectory integrate_single_vortex(const SingleVortexState& init, double t_end) {
    if (!(0.0 <= init.S1 && init.S1 < init.S2 && init.S2 <= 1.0))
        throw std::invalid_argument("single vortex needs 0 <= S1 < S2 <= 1");
    if (!(init.ubar > 0.0 && init.m >= 1.0)) throw std::invalid_argument("single vortex needs ubar > 0 and m >= 1");
    const double ubar = init.ubar, m = init.m;
    const double um = std::pow(ubar, m);
    auto f = [&](const Vec<2>& y) {
        const double g = std::pow(y[1] - y[0], m - 1.0);
        return Vec<2>{-um * y[0] / g, um * (1.0 - y[1]) / g};
    };
    auto gap = [](const Vec<2>& y) { return y[1] - y[0]; };
    auto ok = [](const Vec<2>&) { return true; };
    return integrate<2>({"S1", "S2"}, Vec<2>{init.S1, init.S2}, t_end, ubar, m, f, gap, ok);
}

FrontTrajectory integrate_two_vortex(const TwoVortexState& init, double t_end) {
    const double a = init.alpha;
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("two vortex needs alpha in (0, 1)");
    if (!(0.0 <= init.S1 && init.S1 < init.S2 && init.S2 <= a && a <= init.S3 && init.S3 < init.S4 && init.S4 <= 1.0))
        throw std::invalid_argument("two vortex needs 0 <= S1 < S2 <= alpha <= S3 < S4 <= 1");
    if (!(init.ubar > 0.0 && init.m >= 1.0)) throw std::invalid_argument("two vortex needs ubar > 0 and m >= 1");
    const double m = init.m;
    const double c1 = std::pow(a, m - 1.0) * std::pow(init.ubar, m);
    const double c2 = std::pow(1.0 - a, m - 1.0) * std::pow(init.ubar, m);
    auto f = [&](const Vec<4>& y) {
        const double g1 = std::pow(y[1] - y[0], m - 1.0);
        const double g2 = std::pow(y[3] - y[2], m - 1.0);
        return Vec<4>{-c1 * y[0] / g1, c1 * (a - y[1]) / g1, c2 * (a - y[2]) / g2, c2 * (1.0 - y[3]) / g2};
    };
    auto gap = [](const Vec<4>& y) { return std::min(y[1] - y[0], y[3] - y[2]); };
    auto ok = [a](const Vec<4>& y) {
        return 0.0 <= y[0] && y[0] < y[1] && y[1] <= a && a <= y[2] && y[2] < y[3] && y[3] <= 1.0;
    };
    return integrate<4>({"S1", "S2", "S3", "S4"}, Vec<4>{init.S1, init.S2, init.S3, init.S4}, t_end, init.ubar, m, f,
                        gap, ok);
}

void check_hypotheses(const SupersolutionState& st) {
    if (!(st.m > 1.0)) throw HypothesisError("supersolution needs m > 1");
    if (!(st.ubar > 0.0)) throw HypothesisError("supersolution needs ubar > 0");
    if (!(st.C > 0.0)) throw HypothesisError("supersolution needs C > 0");
    if (!(st.C * st.ubar <= 1.0)) throw HypothesisError("supersolution hypothesis C*ubar <= 1 violated");
    if (!(st.alpha > 0.0 && st.alpha < 1.0)) throw HypothesisError("supersolution needs alpha in (0, 1)");
    if (!(2.0 * (1.0 - st.alpha) * st.sigma_prime_one() <= 1.0))
        throw HypothesisError("supersolution hypothesis 2(1-alpha)sigma'(1) <= 1 violated");
    if (!(st.S3 <= 1.0 && st.S3 > st.S2 && st.S2 > st.S1()))
        throw HypothesisError("supersolution needs 1 >= S3 > S2 > S1 = C alpha ubar");
}

SupersolutionRun integrate_supersolution(const SupersolutionState& init, double t_end) {
    check_hypotheses(init);
    const double m = init.m, a = init.alpha, ubar = init.ubar;
    const double sp = init.sigma_prime_one();
    const double K = std::pow(1.0 - a, m - 1.0) * std::pow(ubar, m) * std::pow(sp, m - 1.0);
    const double S1 = init.S1();
    const double S3_0 = init.S3;
    auto f = [&](const Vec<2>& y) {
        const double g = y[1] - y[0];
        const double gm = std::pow(g, m - 1.0);
        return Vec<2>{-K * (g + (1.0 - a) * sp) / gm, K * (1.0 - y[1]) / gm};
    };
    auto e_lower = [&](const Vec<2>& y) { return y[0] - S1; };
    auto e_upper = [&](const Vec<2>& y) { return 2.0 * y[1] - (1.0 + S3_0); };

    SupersolutionRun run;
    FrontTrajectory& tr = run.traj;
    tr.names = {"S1", "S2", "S3"};
    auto record = [&](double t, const Vec<2>& y) {
        const Vec<2> dy = f(y);
        push(tr, t, Vec<3>{S1, y[0], y[1]}, Vec<3>{0.0, dy[0], dy[1]});
    };

    // Locate a sign change inside one step by bisection on the step length.
    auto hitting_time = [&](const Vec<2>& y, double t, double h, auto&& event) {
        double lo = 0.0, hi = h;
        const bool start_sign = event(y) > 0.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, t); ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((event(rk4(y, mid, f)) > 0.0) == start_sign) lo = mid;
            else hi = mid;
        }
        return t + hi;
    };

    Vec<2> y{init.S2, init.S3};
    double t = 0.0;
    record(t, y);
    while (t < t_end) {
        const double g = y[1] - y[0];
        if (g < collapse_gap) collapse(t, g);
        const double h = std::min(step_size(g, speed_of(f(y)), ubar, m), t_end - t);
        const Vec<2> next = rk4(y, h, f);
        if (std::isinf(run.T_lower) && e_lower(y) > 0.0 && e_lower(next) <= 0.0)
            run.T_lower = hitting_time(y, t, h, e_lower);
        if (std::isinf(run.T_upper) && e_upper(y) < 0.0 && e_upper(next) >= 0.0)
            run.T_upper = hitting_time(y, t, h, e_upper);
        y = next;
        t = (t_end - t <= h) ? t_end : t + h;
        record(t, y);
    }
    return run;
}

double evaluate_single_k(const SingleVortexState& st, double s) {
    if (s <= st.S1) return 0.0;
    if (s >= st.S2) return st.ubar;
    return st.ubar / (st.S2 - st.S1) * (s - st.S1);
}

double evaluate_two_k(const TwoVortexState& st, double s) {
    const double a = st.alpha, u = st.ubar;
    if (s < st.S1) return 0.0;
    if (s < st.S2) return a * u * (s - st.S1) / (st.S2 - st.S1);
    if (s < st.S3) return a * u;
    if (s < st.S4) return (1.0 - a) * u * (s - st.S3) / (st.S4 - st.S3) + a * u;
    return u;
}

double evaluate_supersolution_k(const SupersolutionState& st, double s) {
    const double S1 = st.S1();
    const double a = st.alpha, u = st.ubar;
    if (s <= S1) return s / st.C;
    if (s <= st.S2) return a * u;
    if (s <= st.S3) {
        const double r = (s - st.S2) / (st.S3 - st.S2);
        return std::pow(r, st.m / (st.m - 1.0)) * (1.0 - a) * u + a * u;
    }
    return u;
}

KEvaluator single_vortex_evaluator(const FrontTrajectory& traj, const SingleVortexState& init) {
    KEvaluator ev;
    ev.t_min = traj.t.front();
    ev.t_max = traj.t.back();
    ev.k = [&traj, init](double t, double s) {
        const auto y = traj.at(t);
        SingleVortexState st = init;
        st.S1 = y[0];
        st.S2 = y[1];
        return evaluate_single_k(st, s);
    };
    ev.kinks = [&traj](double t) { return traj.at(t); };
    return ev;
}

KEvaluator two_vortex_evaluator(const FrontTrajectory& traj, const TwoVortexState& init) {
    KEvaluator ev;
    ev.t_min = traj.t.front();
    ev.t_max = traj.t.back();
    ev.k = [&traj, init](double t, double s) {
        const auto y = traj.at(t);
        TwoVortexState st = init;
        st.S1 = y[0];
        st.S2 = y[1];
        st.S3 = y[2];
        st.S4 = y[3];
        return evaluate_two_k(st, s);
    };
    ev.kinks = [&traj](double t) { return traj.at(t); };
    return ev;
}

KEvaluator supersolution_evaluator(const SupersolutionRun& run, const SupersolutionState& init) {
    KEvaluator ev;
    ev.t_min = run.traj.t.front();
    ev.t_max = std::min(run.traj.t.back(), run.T_lower);
    const FrontTrajectory& traj = run.traj;
    ev.k = [&traj, init](double t, double s) {
        const auto y = traj.at(t);
        SupersolutionState st = init;
        st.S2 = y[1];
        st.S3 = y[2];
        return evaluate_supersolution_k(st, s);
    };
    ev.kinks = [&traj](double t) { return traj.at(t); };
    return ev;
}

bool sample_is_smooth(const KEvaluator& ev, const Sample& p, double fd_step) {
    if (p.t - fd_step < ev.t_min || p.t + fd_step > ev.t_max) return false;
    if (p.s - 2.0 * fd_step <= 0.0 || p.s + 2.0 * fd_step >= 1.0) return false;
    for (double tt : {p.t - fd_step, p.t, p.t + fd_step})
        for (double kink : ev.kinks(tt))
            if (std::abs(p.s - kink) < 2.0 * fd_step) return false;
    return true;
}

double viscosity_residual(const KEvaluator& ev, double m, double ubar, ResidualKind kind, std::span<const Sample> samples,
                          double fd_step) {
    if (samples.empty()) throw std::invalid_argument("viscosity_residual needs samples");
    double worst = kind == ResidualKind::sub ? -std::numeric_limits<double>::infinity()
                                             : std::numeric_limits<double>::infinity();
    for (const Sample& p : samples) {
        if (!sample_is_smooth(ev, p, fd_step)) {
            std::ostringstream os;
            os << "sample (t = " << p.t << ", s = " << p.s << ") is within two difference widths of a kink";
            throw std::invalid_argument(os.str());
        }
        const double k = ev.k(p.t, p.s);
        const double dt = (ev.k(p.t + fd_step, p.s) - ev.k(p.t - fd_step, p.s)) / (2.0 * fd_step);
        const double ds = (ev.k(p.t, p.s + fd_step) - ev.k(p.t, p.s - fd_step)) / (2.0 * fd_step);
        const double r = dt + std::pow(std::max(ds, 0.0), m) * (k - p.s * ubar);
        worst = kind == ResidualKind::sub ? std::max(worst, r) : std::min(worst, r);
    }
    return worst;
}

double comparison_check(std::span<const RearrangedProfile> profiles, std::span<const double> times,
                        const KEvaluator& super) {
    if (profiles.size() != times.size() || profiles.empty())
        throw std::invalid_argument("comparison_check needs one time per profile");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        const RearrangedProfile& p = profiles[k];
        for (std::size_t i = 0; i < p.k.size(); ++i) worst = std::max(worst, p.k[i] - super.k(times[k], p.edge(i)));
    }
    return worst;
}

} // namespace coulombflow
