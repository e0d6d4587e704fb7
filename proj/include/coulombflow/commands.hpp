#pragma once

#include "coulombflow/config.hpp"
#include "coulombflow/verify.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace coulombflow {

// Each command returns its process exit code: 0 success, 1 verification
// failure. Configuration and usage problems throw ConfigError (exit 2).
int cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out);
int cmd_fronts(const std::string& mode, const ExperimentConfig& cfg, const std::filesystem::path& out);
int cmd_verify(const ExperimentConfig& cfg, const std::filesystem::path& out, int jobs);
int cmd_plot(const std::filesystem::path& in, const std::filesystem::path& out, const std::string& x,
             const std::vector<std::string>& ys);

// Creates the directory if needed and confirms it is writable.
void ensure_output_dir(const std::filesystem::path& dir);

// Shortest round-trip decimal form of t, used in snapshot file names.
std::string time_tag(double t);

// observables.csv, u_<t>.csv, k_<t>.csv, support.csv and run.json; SVG
// charts of observables and support when svg is set.
void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir, double support_threshold, bool svg);

std::vector<std::string> suite_names();
// Runs one named suite, writing per-run artifacts under out/<suite>/.
Report run_suite(const std::string& name, const ExperimentConfig& cfg, const std::filesystem::path& out, int jobs);

} // namespace coulombflow
