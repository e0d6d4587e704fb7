#pragma once

#include "coulombflow/pde_solver.hpp"
#include "coulombflow/torus_field.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coulombflow {

// Any rejected configuration or command line; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InitialConditionSpec {
    std::string kind;  // constant | cosine | blocks | power_edge | from_file
    nlohmann::json params = nlohmann::json::object();
    enum class Mollify { off, automatic, width } mollify = Mollify::automatic;
    double mollify_width = 0.0;
    std::optional<double> mass;  // rescale to this total mass
    std::string base_dir;        // relative from_file paths resolve here
};

struct FrontsSpec {
    double m = 1.0;
    double ubar = 1.0;
    double t_end = 1.0;
    int samples = 201;
    nlohmann::json params = nlohmann::json::object();  // S1..S4, alpha, C
};

struct ExperimentConfig {
    std::optional<TorusGrid> grid;
    std::optional<SolverConfig> solver;
    std::optional<InitialConditionSpec> initial_condition;
    std::optional<double> support_threshold;
    std::map<std::string, std::uint64_t> seeds;
    std::vector<std::string> formats{"csv"};
    std::optional<std::string> output_dir;
    std::optional<FrontsSpec> fronts;
    std::optional<std::vector<std::string>> suites;
    nlohmann::json echo;  // the parsed document
    std::string text;     // raw bytes, hashed into reports

    bool wants(const std::string& format) const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

ScalarField build_initial_condition(const InitialConditionSpec& spec, const TorusGrid& grid);

} // namespace coulombflow
