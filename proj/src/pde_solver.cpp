#include "coulombflow/pde_solver.hpp"
#include "coulombflow/kernels.hpp"

#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace coulombflow {

namespace {

constexpr double negativity_guard = 1e-13;
constexpr double min_dt = 1e-14;

// dst[i] = src[i + dir * e_axis] with periodic wrap.
void shifted(const TorusGrid& g, const std::vector<double>& src, int axis, int dir, std::vector<double>& dst) {
    const int n = g.n;
    dst.resize(src.size());
    if (g.dim == 1 || axis == 0) {
        const int rows = g.dim == 1 ? 1 : n;
        for (int j = 0; j < rows; ++j) {
            const double* s = src.data() + std::size_t(j) * n;
            double* d = dst.data() + std::size_t(j) * n;
            for (int i = 0; i < n; ++i) d[i] = s[(i + dir + n) % n];
        }
    } else {
        for (int j = 0; j < n; ++j) {
            const int js = (j + dir + n) % n;
            std::copy_n(src.data() + std::size_t(js) * n, n, dst.data() + std::size_t(j) * n);
        }
    }
}

std::vector<double> mobility(std::span<const double> u, double m) {
    std::vector<double> out(u.size());
    if (m == 1.0) std::copy(u.begin(), u.end(), out.begin());
    else if (m == 2.0) std::transform(u.begin(), u.end(), out.begin(), [](double x) { return x * x; });
    else std::transform(u.begin(), u.end(), out.begin(), [m](double x) { return std::pow(x, m); });
    return out;
}

// Transport velocity -grad(g*u) on the +e_a faces of every cell.
struct Transport {
    detail::Coeffs u_hat;
    std::vector<std::vector<double>> a;
    double amax = 0.0;
};

Transport transport(const ScalarField& u) {
    const TorusGrid& g = u.grid();
    Transport tr;
    tr.u_hat = detail::forward(g, u.values());
    for (int ax = 0; ax < g.dim; ++ax) {
        auto v = detail::potential_gradient(g, tr.u_hat, ax, true);
        for (double& x : v) x = -x;
        tr.amax = std::max(tr.amax, kernels::active().max_abs(v.data(), v.size()));
        tr.a.push_back(std::move(v));
    }
    return tr;
}

double stable_dt(const ScalarField& u, double amax, double m, double eps, double cfl) {
    const TorusGrid& g = u.grid();
    const double d = g.dim;
    // Lipschitz bound of u -> u^m and of u^(m-1) over the attained range.
    double lip;
    if (m == 1.0) lip = 1.0;
    else if (m > 1.0) lip = std::max(m, 1.0) * std::pow(u.max(), m - 1.0);
    else lip = std::pow(u.min(), m - 1.0);
    const double adv = d * amax * lip / g.h;
    const double visc = 2.0 * d * eps / (g.h * g.h);
    // Additive combination keeps the update a convex combination when both bind.
    const double rate = adv + visc;
    if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
    return cfl / rate;
}

ScalarField apply_step(const ScalarField& u, const Transport& tr, double dt, double m, double eps) {
    const TorusGrid& g = u.grid();
    const auto& k = kernels::active();
    const std::size_t N = g.size();
    const std::vector<double>& uv = u.data();
    const std::vector<double> M = mobility(uv, m);
    std::vector<double> Mr, ur, J(N), Jl;
    std::vector<double> out = uv;
    const double r = dt / g.h;
    for (int ax = 0; ax < g.dim; ++ax) {
        shifted(g, M, ax, +1, Mr);
        shifted(g, uv, ax, +1, ur);
        k.upwind_flux(tr.a[ax].data(), M.data(), Mr.data(), uv.data(), ur.data(), eps / g.h, J.data(), N);
        shifted(g, J, ax, -1, Jl);
        k.flux_divergence(out.data(), J.data(), Jl.data(), r, N);
    }
    for (std::size_t i = 0; i < N; ++i) {
        double& x = out[i];
        if (!std::isfinite(x)) throw SolverError("non-finite density after step at cell " + std::to_string(i));
        if (x < 0.0) {
            if (x < -negativity_guard) {
                std::ostringstream os;
                os << "negative density " << x << " at cell " << i << " (scheme misconfigured or CFL violated)";
                throw SolverError(os.str());
            }
            x = 0.0;
        }
    }
    return ScalarField(g, std::move(out));
}

double dissipation_rate(const TorusGrid& g, const detail::Coeffs& u_hat, std::span<const double> u, double m) {
    const std::vector<double> M = mobility(u, m);
    double s = 0.0;
    for (int ax = 0; ax < g.dim; ++ax) {
        auto v = detail::potential_gradient(g, u_hat, ax, false);
        s += kernels::active().weighted_sum_sq(v.data(), M.data(), v.size());
    }
    return s * g.cell_measure;
}

void validate(const SolverConfig& cfg) {
    if (!(cfg.m > 0.0)) throw std::invalid_argument("solver.m must be > 0");
    if (cfg.epsilon && !(*cfg.epsilon >= 0.0)) throw std::invalid_argument("solver.epsilon must be >= 0");
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw std::invalid_argument("solver.cfl must lie in (0, 1]");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("solver.t_end must be > 0");
    if (cfg.m < 1.0 && !(cfg.floor_m_lt_1 > 0.0))
        throw std::invalid_argument("solver.floor_m_lt_1 must be > 0 when m < 1");
    if (cfg.observe_every < 1) throw std::invalid_argument("solver.observe_every must be >= 1");
    for (double t : cfg.output_times)
        if (!(t > 0.0 && t <= cfg.t_end)) throw std::invalid_argument("solver.output_times must lie in (0, t_end]");
}

} // namespace

double resolved_epsilon(const SolverConfig& cfg, const TorusGrid& g) { return cfg.epsilon ? *cfg.epsilon : g.h; }

double cfl_dt(const ScalarField& u, const SolverConfig& cfg) {
    const Transport tr = transport(u);
    return stable_dt(u, tr.amax, cfg.m, resolved_epsilon(cfg, u.grid()), cfg.cfl);
}

ScalarField step(const ScalarField& u, double dt, const SolverConfig& cfg) {
    if (u.min() < 0.0) throw std::invalid_argument("step needs u >= 0");
    const Transport tr = transport(u);
    const double eps = resolved_epsilon(cfg, u.grid());
    const double limit = stable_dt(u, tr.amax, cfg.m, eps, cfg.cfl);
    if (dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "time step " << dt << " exceeds the CFL limit " << limit;
        throw SolverError(os.str());
    }
    return apply_step(u, tr, dt, cfg.m, eps);
}

double grad_sup(const ScalarField& u, double power) {
    const TorusGrid& g = u.grid();
    std::vector<double> w(u.data());
    if (power != 1.0)
        for (double& x : w) x = std::pow(x, power);
    const int n = g.n;
    double best = 0.0;
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i)
            best = std::max(best, std::abs(w[(i + 1) % n] - w[(i + n - 1) % n]) / (2.0 * g.h));
        return best;
    }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double dx = w[std::size_t(j) * n + (i + 1) % n] - w[std::size_t(j) * n + (i + n - 1) % n];
            const double dy = w[std::size_t((j + 1) % n) * n + i] - w[std::size_t((j + n - 1) % n) * n + i];
            best = std::max(best, std::hypot(dx, dy) / (2.0 * g.h));
        }
    return best;
}

ObservableRow observe(const ScalarField& u, double m, double t) {
    const TorusGrid& g = u.grid();
    const auto& k = kernels::active();
    const auto v = u.values();
    ObservableRow r;
    r.t = t;
    r.mass = k.sum(v.data(), v.size()) * g.cell_measure;
    r.min = u.min();
    r.max = u.max();
    r.l1 = k.sum_abs(v.data(), v.size()) * g.cell_measure;
    r.l2 = std::sqrt(k.sum_sq(v.data(), v.size()) * g.cell_measure);
    r.linf = k.max_abs(v.data(), v.size());
    const auto u_hat = detail::forward(g, v);
    r.energy = 0.5 * detail::inverse_laplacian_quadratic(g, u_hat);
    r.dissipation_rate = dissipation_rate(g, u_hat, v, m);
    r.grad_sup = grad_sup(u);
    return r;
}

Trajectory run(const ScalarField& u0, const SolverConfig& cfg) {
    validate(cfg);
    const TorusGrid& g = u0.grid();
    for (double x : u0.values())
        if (!std::isfinite(x)) throw std::invalid_argument("initial data contains non-finite values");
    if (u0.min() < 0.0) throw std::invalid_argument("initial data must be nonnegative");
    if (cfg.m < 1.0 && u0.min() < cfg.floor_m_lt_1) {
        std::ostringstream os;
        os << "initial minimum " << u0.min() << " is below floor_m_lt_1 = " << cfg.floor_m_lt_1 << " required for m < 1";
        throw std::invalid_argument(os.str());
    }

    std::vector<double> outputs = cfg.output_times;
    outputs.push_back(cfg.t_end);
    std::sort(outputs.begin(), outputs.end());
    outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
    std::erase_if(outputs, [](double x) { return x <= 0.0; });  // t = 0 is always recorded

    Trajectory traj;
    traj.m = cfg.m;
    traj.epsilon = resolved_epsilon(cfg, g);
    traj.times.push_back(0.0);
    traj.snapshots.push_back(u0);
    traj.observables.push_back(observe(u0, cfg.m, 0.0));

    ScalarField u = u0;
    double t = 0.0;
    double cumulative = 0.0;
    std::size_t next = 0;
    while (next < outputs.size()) {
        const double target = outputs[next];
        const Transport tr = transport(u);
        const double limit = stable_dt(u, tr.amax, cfg.m, traj.epsilon, cfg.cfl);
        double dt = std::min(limit, target - t);
        if (limit < min_dt) {
            std::ostringstream os;
            os << "time step underflow (dt = " << limit << ") at t = " << t;
            throw SolverError(os.str());
        }
        const bool hits_target = dt >= target - t;
        cumulative += dissipation_rate(g, tr.u_hat, u.values(), cfg.m) * dt;
        u = apply_step(u, tr, dt, cfg.m, traj.epsilon);
        t = hits_target ? target : t + dt;
        ++traj.steps;
        if (hits_target) {
            traj.times.push_back(t);
            traj.snapshots.push_back(u);
            ++next;
        }
        if (hits_target || traj.steps % std::size_t(cfg.observe_every) == 0) {
            ObservableRow row = observe(u, cfg.m, t);
            row.cumulative_dissipation = cumulative;
            traj.observables.push_back(row);
        }
    }
    return traj;
}

double dissipation_check(const Trajectory& traj) {
    if (traj.observables.empty()) return 0.0;
    const double e0 = traj.observables.front().energy;
    double worst = 0.0;
    for (const auto& r : traj.observables) worst = std::max(worst, r.energy + r.cumulative_dissipation - e0);
    return worst;
}

std::vector<double> grad_sup_series(const Trajectory& traj, double power) {
    std::vector<double> out;
    out.reserve(traj.snapshots.size());
    for (const auto& s : traj.snapshots) out.push_back(grad_sup(s, power));
    return out;
}

namespace {

// exp(1 - 1/(1 - r^2)) on |r| < 1 with its first two derivatives.
struct Bump {
    double b, db, d2b;
};

Bump bump(double r) {
    if (std::abs(r) >= 1.0) return {0.0, 0.0, 0.0};
    const double q = 1.0 - r * r;
    const double b = std::exp(1.0 - 1.0 / q);
    const double gfun = -2.0 * r / (q * q);
    const double dg = -2.0 / (q * q) - 8.0 * r * r / (q * q * q);
    return {b, b * gfun, b * (gfun * gfun + dg)};
}

double torus_offset(double x, double c) {
    double d = x - c;
    d -= std::round(d);
    return d;
}

struct Probe {
    double tc, tw;
    double xc[2];
    double w;
};

} // namespace

double entropy_residual(const Trajectory& traj, const SolverConfig& cfg, std::span<const double> kappas) {
    const std::size_t ns = traj.snapshots.size();
    if (ns < 3) throw std::invalid_argument("entropy_residual needs at least 3 snapshots");
    const double T0 = traj.times.front(), T1 = traj.times.back();
    const double dts = (T1 - T0) / double(ns - 1);
    for (std::size_t k = 1; k < ns; ++k)
        if (std::abs(traj.times[k] - traj.times[k - 1] - dts) > 1e-9 * (T1 - T0))
            throw std::invalid_argument("entropy_residual needs uniformly spaced snapshots");

    const TorusGrid& g = traj.snapshots.front().grid();
    const double m = cfg.m;
    const double eps = resolved_epsilon(cfg, g);
    const double ubar = mean(traj.snapshots.front());

    // 8 space-time centres, two spatial widths each.
    std::vector<Probe> probes;
    const double tw = (T1 - T0) / 6.0;
    for (int c = 0; c < 8; ++c) {
        const double tc = T0 + tw + (T1 - T0 - 2.0 * tw) * c / 7.0;
        const double x0 = std::fmod(0.5 + 0.6180339887498949 * c, 1.0);
        const double x1 = std::fmod(0.3 + 0.7548776662466927 * c, 1.0);
        for (double w : {4.0 * g.h, 8.0 * g.h}) probes.push_back({tc, tw, {x0, x1}, w});
    }

    // Per snapshot: grad g*u on the faces, where the scheme evaluates it.
    std::vector<std::vector<std::vector<double>>> field(ns);
    for (std::size_t k = 0; k < ns; ++k) field[k] = coulomb_field(traj.snapshots[k], Staggering::face).components;

    // Spatial bump factors sampled per axis. Derivatives of the test function
    // use the same difference stencils as the scheme: the analytic ones are
    // under-resolved at widths of a few cells.
    struct Axis {
        std::vector<double> b, d1, d2;
    };
    auto axis = [&](double centre, double w) {
        Axis a;
        a.b.resize(std::size_t(g.n));
        for (int i = 0; i < g.n; ++i) a.b[std::size_t(i)] = bump(torus_offset(g.coord(i), centre) / w).b;
        a.d1.resize(a.b.size());
        a.d2.resize(a.b.size());
        for (int i = 0; i < g.n; ++i) {
            const double l = a.b[std::size_t((i + g.n - 1) % g.n)], r = a.b[std::size_t((i + 1) % g.n)];
            a.d1[std::size_t(i)] = (r - a.b[std::size_t(i)]) / g.h;  // at the face i + 1/2
            a.d2[std::size_t(i)] = (r - 2.0 * a.b[std::size_t(i)] + l) / (g.h * g.h);
        }
        return a;
    };

    double worst = 0.0;
    for (const Probe& p : probes) {
        const Axis ax = axis(p.xc[0], p.w);
        const Axis ay = g.dim == 2 ? axis(p.xc[1], p.w) : Axis{{1.0}, {0.0}, {0.0}};
        for (double kappa : kappas) {
            const double km = std::pow(std::max(kappa, 0.0), m);
            double integral = 0.0;
            for (std::size_t k = 0; k < ns; ++k) {
                const double t = traj.times[k];
                // Central differences of the time factor make the quadrature
                // telescope exactly for time-independent eta.
                const double phit = bump((t - p.tc) / p.tw).b;
                const double dphit =
                    (bump((t + dts - p.tc) / p.tw).b - bump((t - dts - p.tc) / p.tw).b) / (2.0 * dts);
                if (phit == 0.0 && dphit == 0.0) continue;
                const auto& u = traj.snapshots[k].data();
                double acc = 0.0;
                for (std::size_t idx = 0; idx < u.size(); ++idx) {
                    const std::size_t i = g.dim == 1 ? idx : idx % std::size_t(g.n);
                    const std::size_t j = g.dim == 1 ? 0 : idx / std::size_t(g.n);
                    const double bx = ax.b[i], by = ay.b[j];
                    const double gx = ax.d1[i] * by, gy = bx * ay.d1[j];
                    const double lap = ax.d2[i] * by + (g.dim == 2 ? bx * ay.d2[j] : 0.0);
                    const double space = bx * by;
                    if (space == 0.0 && gx == 0.0 && gy == 0.0 && lap == 0.0) continue;

                    const double uu = u[idx];
                    const double sg = uu > kappa ? 1.0 : (uu < kappa ? -1.0 : 0.0);
                    const double eta = std::abs(uu - kappa);
                    const double um = std::pow(uu, m);
                    const double q = sg * (um - km);
                    // Face fluxes -q grad(g*u) with q taken from the upwind cell.
                    double flux_dot = 0.0;
                    for (int a = 0; a < g.dim; ++a) {
                        const double grad_phi = a == 0 ? gx : gy;
                        if (grad_phi == 0.0) continue;
                        const std::size_t nb = a == 0 ? j * std::size_t(g.n) + (i + 1) % std::size_t(g.n)
                                                      : ((j + 1) % std::size_t(g.n)) * std::size_t(g.n) + i;
                        const double gf = field[k][std::size_t(a)][idx];
                        const double uup = gf < 0.0 ? uu : u[nb];
                        const double sup = uup > kappa ? 1.0 : (uup < kappa ? -1.0 : 0.0);
                        flux_dot += sup * (std::pow(uup, m) - km) * gf * grad_phi;
                    }
                    // Weak form of d_t eta <= div(q grad g*u) + (q - eta' u^m)(u - ubar) + eps lap eta.
                    acc += eta * dphit * space - flux_dot * phit + (q - sg * um) * (uu - ubar) * space * phit +
                           eps * eta * lap * phit;
                }
                integral += acc * g.cell_measure * dts;
            }
            worst = std::min(worst, integral);
        }
    }
    return worst;
}

} // namespace coulombflow
