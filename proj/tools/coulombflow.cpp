#include "coulombflow/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace cf = coulombflow;

int main(int argc, char** argv) {
    CLI::App app{"Simulation and verification toolkit for Coulomb aggregation with nonlinear mobility"};
    app.require_subcommand(1);

    std::string config, out, mode, in, x, ys;
    int jobs = 1;

    auto* simulate = app.add_subcommand("simulate", "run one simulation and write CSV artifacts");
    simulate->add_option("--config", config, "JSON experiment config")->required();
    simulate->add_option("--out", out, "output directory")->required();

    auto* fronts = app.add_subcommand("fronts", "integrate front ODEs of the rearranged equation");
    fronts->add_option("--mode", mode, "single, double or super")
        ->required()
        ->check(CLI::IsMember({"single", "double", "super"}));
    fronts->add_option("--config", config, "JSON experiment config")->required();
    fronts->add_option("--out", out, "output directory")->required();

    auto* verify = app.add_subcommand("verify", "run verification suites and write report.json");
    verify->add_option("--config", config, "JSON experiment config")->required();
    verify->add_option("--out", out, "output directory")->required();
    verify->add_option("--jobs", jobs, "concurrent simulations")->check(CLI::PositiveNumber);

    auto* plot = app.add_subcommand("plot", "render CSV columns as an SVG line chart");
    plot->add_option("--in", in, "input CSV")->required();
    plot->add_option("--out", out, "output SVG")->required();
    plot->add_option("--x", x, "x column")->required();
    plot->add_option("--y", ys, "comma-separated y columns")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*simulate) return cf::cmd_simulate(cf::load_config(config), out);
        if (*fronts) return cf::cmd_fronts(mode, cf::load_config(config), out);
        if (*verify) return cf::cmd_verify(cf::load_config(config), out, jobs);
        std::vector<std::string> columns;
        std::stringstream ss(ys);
        for (std::string c; std::getline(ss, c, ',');)
            if (!c.empty()) columns.push_back(c);
        return cf::cmd_plot(in, out, x, columns);
    } catch (const cf::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 1;
    }
}
