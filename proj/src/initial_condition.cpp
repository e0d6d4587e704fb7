#include "coulombflow/config.hpp"
#include "coulombflow/io.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

namespace coulombflow {

using json = nlohmann::json;

namespace {

std::vector<double> point(const json& v, int dim, const std::string& key) {
    std::vector<double> out;
    if (v.is_number()) out.assign(std::size_t(dim), v.get<double>());
    else
        for (const json& x : v) out.push_back(x.get<double>());
    if (int(out.size()) != dim) throw ConfigError("config key '" + key + "': needs one coordinate per grid dimension");
    return out;
}

// Signed offset from c to x on the unit circle, in [-1/2, 1/2).
double circle_offset(double x, double c) {
    const double d = x - c;
    return d - std::floor(d + 0.5);
}

template <class F>
ScalarField sample(const TorusGrid& g, F&& f) {
    ScalarField u(g);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const double x = g.coord(int(idx % std::size_t(g.n)));
        const double y = g.dim == 2 ? g.coord(int(idx / std::size_t(g.n))) : 0.0;
        u[idx] = f(x, y);
    }
    return u;
}

ScalarField from_file(const std::string& path, const TorusGrid& g) {
    CsvTable t;
    try {
        t = read_csv(path);
    } catch (const std::exception& e) {
        throw ConfigError("config key 'initial_condition.path': " + std::string(e.what()));
    }
    if (t.rows.size() != g.size())
        throw ConfigError("config key 'initial_condition.path': has " + std::to_string(t.rows.size()) +
                          " rows, grid needs " + std::to_string(g.size()));
    ScalarField u(g);
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = t.rows[i].back();
    return u;
}

} // namespace

ScalarField build_initial_condition(const InitialConditionSpec& spec, const TorusGrid& g) {
    const json& p = spec.params;
    const double two_pi = 2.0 * std::numbers::pi;
    ScalarField u;
    if (spec.kind == "constant") {
        u = ScalarField(g, p.at("value").get<double>());
    } else if (spec.kind == "cosine") {
        const double base = p.at("base").get<double>();
        struct Mode {
            double kx, ky, amp, phase;
        };
        std::vector<Mode> modes;
        for (const json& m : p.at("modes")) {
            const auto& k = m.at("k");
            if (int(k.size()) != g.dim)
                throw ConfigError("config key 'initial_condition.modes[].k': needs one wavenumber per grid dimension");
            modes.push_back({k[0].get<double>(), g.dim == 2 ? k[1].get<double>() : 0.0, m.at("amp").get<double>(),
                             m.value("phase", 0.0)});
        }
        u = sample(g, [&](double x, double y) {
            double v = base;
            for (const Mode& m : modes) v += m.amp * std::cos(two_pi * (m.kx * x + m.ky * y) + m.phase);
            return v;
        });
    } else if (spec.kind == "blocks") {
        const double background = p.value("background", 0.0);
        u = ScalarField(g, background);
        for (const json& b : p.at("blocks")) {
            const auto lo = point(b.at("lo"), g.dim, "initial_condition.blocks[].lo");
            const auto hi = point(b.at("hi"), g.dim, "initial_condition.blocks[].hi");
            const double height = b.at("height").get<double>();
            const ScalarField box = sample(g, [&](double x, double y) {
                const bool in_x = x >= lo[0] && x < hi[0];
                const bool in_y = g.dim == 1 || (y >= lo[1] && y < hi[1]);
                return in_x && in_y ? 1.0 : 0.0;
            });
            for (std::size_t i = 0; i < g.size(); ++i)
                if (box[i] > 0.0) u[i] = height;
        }
    } else if (spec.kind == "power_edge") {
        // Support of measure S0 centred at `center`; the rearrangement is
        // c (S0 - s)_+^exponent up to sampling.
        const double c = p.at("c").get<double>(), S0 = p.at("S0").get<double>();
        const double gamma = p.at("exponent").get<double>(), center = p.value("center", 0.5);
        u = sample(g, [&](double x, double y) {
            double s = 2.0 * std::abs(circle_offset(x, center));
            if (g.dim == 2) {
                const double dx = circle_offset(x, center), dy = circle_offset(y, center);
                s = std::numbers::pi * (dx * dx + dy * dy);
            }
            const double gap = S0 - s;
            return gap > 0.0 ? c * std::pow(gap, gamma) : 0.0;
        });
    } else if (spec.kind == "from_file") {
        std::filesystem::path path = p.at("path").get<std::string>();
        if (path.is_relative()) path = std::filesystem::path(spec.base_dir) / path;
        u = from_file(path.string(), g);
    } else {
        throw ConfigError("config key 'initial_condition.kind': unsupported kind " + spec.kind);
    }

    double width = 0.0;
    if (spec.mollify == InitialConditionSpec::Mollify::width) width = spec.mollify_width;
    else if (spec.mollify == InitialConditionSpec::Mollify::automatic && spec.kind == "blocks") width = 2.0 * g.h;
    if (width > 0.0) u = mollify(u, width);

    for (double x : u.values())
        if (!std::isfinite(x) || x < 0.0)
            throw ConfigError("config key 'initial_condition': resulting field must be finite and nonnegative");
    if (spec.mass) {
        const double current = mean(u);
        if (!(current > 0.0)) throw ConfigError("config key 'initial_condition.mass': field has zero mass");
        for (double& x : u.values()) x *= *spec.mass / current;
    }
    return u;
}

} // namespace coulombflow
