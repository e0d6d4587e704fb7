#include "coulombflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace coulombflow {

using json = nlohmann::json;

namespace {

[[noreturn]] void reject(const std::string& key, const std::string& constraint) {
    throw ConfigError("config key '" + key + "': " + constraint);
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

const json& object_at(const json& parent, const std::string& where) {
    if (!parent.is_object()) reject(where, "must be an object");
    return parent;
}

void only_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    object_at(obj, where);
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) reject(join(where, key), "unknown key");
}

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& required) {
    for (const auto& key : required)
        if (!obj.contains(key)) reject(join(where, key), "required");
}

double number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) reject(join(where, key), "required");
    const json& v = obj.at(key);
    if (!v.is_number()) reject(join(where, key), "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) reject(join(where, key), "must be finite");
    return x;
}

double number_or(const json& obj, const std::string& where, const std::string& key, double fallback) {
    return obj.contains(key) ? number(obj, where, key) : fallback;
}

int integer(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) reject(join(where, key), "required");
    const json& v = obj.at(key);
    if (!v.is_number_integer()) reject(join(where, key), "must be an integer");
    return v.get<int>();
}

TorusGrid parse_grid(const json& j) {
    only_keys(j, "grid", {"dim", "n"});
    const int dim = integer(j, "grid", "dim");
    const int n = integer(j, "grid", "n");
    if (dim != 1 && dim != 2) reject("grid.dim", "must be 1 or 2");
    if (n < 4) reject("grid.n", "must be >= 4");
    if (n % 2 != 0) reject("grid.n", "must be even");
    return make_grid(dim, n);
}

SolverConfig parse_solver(const json& j) {
    only_keys(j, "solver",
              {"m", "epsilon", "cfl", "t_end", "output_times", "output_count", "floor_m_lt_1", "observe_every"});
    SolverConfig cfg;
    cfg.m = number(j, "solver", "m");
    if (!(cfg.m > 0.0)) reject("solver.m", "must be > 0");
    if (j.contains("epsilon")) {
        const json& e = j.at("epsilon");
        if (e.is_string()) {
            if (e.get<std::string>() != "auto") reject("solver.epsilon", "must be a number >= 0 or \"auto\"");
        } else {
            cfg.epsilon = number(j, "solver", "epsilon");
            if (!(*cfg.epsilon >= 0.0)) reject("solver.epsilon", "must be >= 0");
        }
    }
    cfg.cfl = number_or(j, "solver", "cfl", cfg.cfl);
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) reject("solver.cfl", "must lie in (0, 1]");
    cfg.t_end = number(j, "solver", "t_end");
    if (!(cfg.t_end > 0.0)) reject("solver.t_end", "must be > 0");
    if (j.contains("output_times") && j.contains("output_count"))
        reject("solver.output_count", "conflicts with solver.output_times");
    if (j.contains("output_times")) {
        const json& a = j.at("output_times");
        if (!a.is_array()) reject("solver.output_times", "must be an array of numbers");
        for (const json& v : a) {
            if (!v.is_number()) reject("solver.output_times", "must be an array of numbers");
            const double t = v.get<double>();
            if (!(t > 0.0 && t <= cfg.t_end)) reject("solver.output_times", "entries must lie in (0, t_end]");
            cfg.output_times.push_back(t);
        }
    }
    if (j.contains("output_count")) {
        const int count = integer(j, "solver", "output_count");
        if (count < 1) reject("solver.output_count", "must be >= 1");
        for (int k = 1; k <= count; ++k) cfg.output_times.push_back(cfg.t_end * k / count);
    }
    cfg.floor_m_lt_1 = number_or(j, "solver", "floor_m_lt_1", 0.0);
    if (cfg.m < 1.0 && !(cfg.floor_m_lt_1 > 0.0)) reject("solver.floor_m_lt_1", "must be > 0 when m < 1");
    if (j.contains("observe_every")) {
        cfg.observe_every = integer(j, "solver", "observe_every");
        if (cfg.observe_every < 1) reject("solver.observe_every", "must be >= 1");
    }
    return cfg;
}

void check_kind_keys(const json& j, const std::string& kind) {
    static const std::set<std::string> common{"kind", "mollify", "mass"};
    static const std::map<std::string, std::set<std::string>> per_kind{
        {"constant", {"value"}},
        {"cosine", {"base", "modes"}},
        {"blocks", {"background", "blocks"}},
        {"power_edge", {"c", "S0", "exponent", "center"}},
        {"from_file", {"path"}},
    };
    const auto it = per_kind.find(kind);
    if (it == per_kind.end())
        reject("initial_condition.kind", "must be one of constant, cosine, blocks, power_edge, from_file");
    std::set<std::string> allowed = common;
    allowed.insert(it->second.begin(), it->second.end());
    only_keys(j, "initial_condition", allowed);
}

InitialConditionSpec parse_initial_condition(const json& j, const std::string& base_dir) {
    object_at(j, "initial_condition");
    if (!j.contains("kind") || !j.at("kind").is_string()) reject("initial_condition.kind", "required string");
    InitialConditionSpec spec;
    spec.kind = j.at("kind").get<std::string>();
    check_kind_keys(j, spec.kind);
    const std::string w = "initial_condition";
    if (spec.kind == "constant") {
        if (!(number(j, w, "value") >= 0.0)) reject("initial_condition.value", "must be >= 0");
    } else if (spec.kind == "cosine") {
        number(j, w, "base");
        require_keys(j, w, {"modes"});
        if (!j.at("modes").is_array()) reject("initial_condition.modes", "must be an array");
        for (const json& mode : j.at("modes")) {
            only_keys(mode, "initial_condition.modes[]", {"k", "amp", "phase"});
            require_keys(mode, "initial_condition.modes[]", {"k", "amp"});
            const json& k = mode.at("k");
            if (!k.is_array() || k.empty() || k.size() > 2 ||
                !std::all_of(k.begin(), k.end(), [](const json& v) { return v.is_number_integer(); }))
                reject("initial_condition.modes[].k", "must be an array of 1 or 2 integers");
            number(mode, "initial_condition.modes[]", "amp");
            number_or(mode, "initial_condition.modes[]", "phase", 0.0);
        }
    } else if (spec.kind == "blocks") {
        if (!(number_or(j, w, "background", 0.0) >= 0.0)) reject("initial_condition.background", "must be >= 0");
        require_keys(j, w, {"blocks"});
        if (!j.at("blocks").is_array()) reject("initial_condition.blocks", "must be an array");
        for (const json& b : j.at("blocks")) {
            only_keys(b, "initial_condition.blocks[]", {"lo", "hi", "height"});
            require_keys(b, "initial_condition.blocks[]", {"lo", "hi", "height"});
            if (!(number(b, "initial_condition.blocks[]", "height") >= 0.0))
                reject("initial_condition.blocks[].height", "must be >= 0");
            for (const char* key : {"lo", "hi"}) {
                const json& v = b.at(key);
                const bool ok = v.is_number() || (v.is_array() && !v.empty() && v.size() <= 2 &&
                                                  std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); }));
                if (!ok) reject(std::string("initial_condition.blocks[].") + key, "must be a number or array of numbers");
            }
        }
    } else if (spec.kind == "power_edge") {
        if (!(number(j, w, "c") > 0.0)) reject("initial_condition.c", "must be > 0");
        const double S0 = number(j, w, "S0");
        if (!(S0 > 0.0 && S0 < 1.0)) reject("initial_condition.S0", "must lie in (0, 1)");
        if (!(number(j, w, "exponent") >= 0.0)) reject("initial_condition.exponent", "must be >= 0");
        number_or(j, w, "center", 0.5);
    } else {
        if (!j.contains("path") || !j.at("path").is_string()) reject("initial_condition.path", "required string");
    }
    spec.params = j;
    spec.base_dir = base_dir;

    if (j.contains("mollify")) {
        const json& m = j.at("mollify");
        if (m.is_string()) {
            const std::string s = m.get<std::string>();
            if (s == "off") spec.mollify = InitialConditionSpec::Mollify::off;
            else if (s == "auto") spec.mollify = InitialConditionSpec::Mollify::automatic;
            else reject("initial_condition.mollify", "must be \"off\", \"auto\" or a width");
        } else {
            spec.mollify = InitialConditionSpec::Mollify::width;
            spec.mollify_width = number(j, w, "mollify");
            if (!(spec.mollify_width > 0.0 && spec.mollify_width <= 0.125))
                reject("initial_condition.mollify", "width must lie in (0, 1/8]");
        }
    }
    if (j.contains("mass")) {
        spec.mass = number(j, w, "mass");
        if (!(*spec.mass > 0.0)) reject("initial_condition.mass", "must be > 0");
    }
    return spec;
}

FrontsSpec parse_fronts(const json& j) {
    only_keys(j, "fronts", {"m", "ubar", "t_end", "samples", "S1", "S2", "S3", "S4", "alpha", "C"});
    FrontsSpec f;
    f.m = number(j, "fronts", "m");
    if (!(f.m > 0.0)) reject("fronts.m", "must be > 0");
    f.ubar = number_or(j, "fronts", "ubar", 1.0);
    if (!(f.ubar > 0.0)) reject("fronts.ubar", "must be > 0");
    f.t_end = number(j, "fronts", "t_end");
    if (!(f.t_end > 0.0)) reject("fronts.t_end", "must be > 0");
    if (j.contains("samples")) {
        f.samples = integer(j, "fronts", "samples");
        if (f.samples < 2) reject("fronts.samples", "must be >= 2");
    }
    for (const char* key : {"S1", "S2", "S3", "S4", "alpha", "C"})
        if (j.contains(key)) f.params[key] = number(j, "fronts", key);
    return f;
}

} // namespace

bool ExperimentConfig::wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    only_keys(doc, "", {"grid", "solver", "initial_condition", "support_threshold", "seeds", "outputs", "fronts",
                        "verify"});
    ExperimentConfig cfg;
    cfg.echo = doc;
    cfg.text = text;
    if (doc.contains("grid")) cfg.grid = parse_grid(doc.at("grid"));
    if (doc.contains("solver")) cfg.solver = parse_solver(doc.at("solver"));
    if (doc.contains("initial_condition"))
        cfg.initial_condition = parse_initial_condition(doc.at("initial_condition"), base_dir);
    if (doc.contains("support_threshold")) {
        cfg.support_threshold = number(doc, "", "support_threshold");
        if (!(*cfg.support_threshold >= 0.0)) reject("support_threshold", "must be >= 0");
    }
    if (doc.contains("seeds")) {
        only_keys(doc.at("seeds"), "seeds", {"fields", "perturbation"});
        for (const auto& [key, value] : doc.at("seeds").items()) {
            if (!value.is_number_unsigned()) reject("seeds." + key, "must be a nonnegative integer");
            cfg.seeds[key] = value.get<std::uint64_t>();
        }
    }
    if (doc.contains("outputs")) {
        const json& o = doc.at("outputs");
        only_keys(o, "outputs", {"dir", "formats"});
        if (o.contains("dir")) {
            if (!o.at("dir").is_string()) reject("outputs.dir", "must be a string");
            cfg.output_dir = o.at("dir").get<std::string>();
        }
        if (o.contains("formats")) {
            const json& f = o.at("formats");
            if (!f.is_array()) reject("outputs.formats", "must be an array");
            cfg.formats.clear();
            for (const json& v : f) {
                if (!v.is_string() || (v != "csv" && v != "svg")) reject("outputs.formats", "entries must be \"csv\" or \"svg\"");
                cfg.formats.push_back(v.get<std::string>());
            }
        }
    }
    if (doc.contains("fronts")) cfg.fronts = parse_fronts(doc.at("fronts"));
    if (doc.contains("verify")) {
        const json& v = doc.at("verify");
        only_keys(v, "verify", {"suites"});
        if (!v.contains("suites") || !v.at("suites").is_array()) reject("verify.suites", "required array of names");
        cfg.suites.emplace();
        for (const json& s : v.at("suites")) {
            if (!s.is_string()) reject("verify.suites", "entries must be strings");
            cfg.suites->push_back(s.get<std::string>());
        }
    }
    if (cfg.initial_condition && cfg.initial_condition->kind != "from_file" && cfg.grid) {
        // Build once so every precondition is checked before any run starts.
        const ScalarField u0 = build_initial_condition(*cfg.initial_condition, *cfg.grid);
        if (cfg.solver && cfg.solver->m < 1.0 && u0.min() < cfg.solver->floor_m_lt_1)
            reject("solver.floor_m_lt_1", "initial minimum is below the floor required for m < 1");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse_config(os.str(), std::filesystem::path(path).parent_path().string());
}

} // namespace coulombflow
