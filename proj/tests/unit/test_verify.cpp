#include "coulombflow/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace coulombflow;

namespace {

Trajectory cosine_run(double m, double t_end, int outputs) {
    const TorusGrid g = make_grid(1, 64);
    ScalarField u0(g);
    for (int i = 0; i < g.n; ++i) u0[std::size_t(i)] = 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * g.coord(i));
    SolverConfig c;
    c.m = m;
    c.t_end = t_end;
    for (int k = 1; k <= outputs; ++k) c.output_times.push_back(t_end * k / outputs);
    return run(u0, c);
}

} // namespace

TEST_CASE("make_check status contract") {
    CHECK(make_check("a", "x", 1.0, 1.0, 0.0).status == Status::pass);
    CHECK(make_check("a", "x", 1.1, 1.0, 0.2).status == Status::pass);
    CHECK(make_check("a", "x", 1.3, 1.0, 0.2).status == Status::fail);
    CHECK(make_check("a", "x", std::nan(""), 1.0, 0.2).status == Status::fail);
    CHECK(to_string(Status::inconclusive) == "inconclusive");
}

TEST_CASE("report exit codes") {
    Report r;
    CHECK(r.exit_code() == 0);
    r.checks.push_back(make_check("a", "x", 0.0, 1.0, 0.0));
    CheckResult open;
    open.check_id = "b";
    r.checks.push_back(open);
    CHECK(r.exit_code() == 0);
    r.checks.push_back(make_check("c", "z", 2.0, 1.0, 0.0));
    CHECK(r.exit_code() == 1);
}

TEST_CASE("content hash matches git blob ids") {
    CHECK(content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    CHECK(content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("report json is deterministic without the timestamp") {
    Report r;
    r.checks.push_back(make_check("a", "x", 0.25, 1.0, 0.0, {{"run", "r1"}}));
    r.warnings.push_back("w");
    const nlohmann::json echo = {{"k", 1}};
    const auto a = report_json(r, echo, "text", false);
    const auto b = report_json(r, echo, "text", false);
    CHECK(a.dump() == b.dump());
    CHECK(!a.contains("timestamp"));
    CHECK(a.at("input_hash") == content_hash("text"));
    CHECK(a.at("summary").at("pass") == 1);
    CHECK(report_json(r, echo, "text", true).contains("timestamp"));
}

TEST_CASE("a smooth run passes the trajectory checks") {
    const Trajectory tr = cosine_run(1.0, 2.0, 20);
    for (const auto& c : check_conservation_and_monotonicity(tr)) CHECK_MESSAGE(c.status == Status::pass, c.check_id);
    CHECK(check_energy_dissipation(tr).status == Status::pass);
    for (const auto& c : check_barriers(tr)) CHECK_MESSAGE(c.status == Status::pass, c.check_id);
}

TEST_CASE("a corrupted trajectory fails conservation") {
    Trajectory tr = cosine_run(1.0, 0.5, 5);
    tr.observables.back().mass *= 1.001;
    bool failed = false;
    for (const auto& c : check_conservation_and_monotonicity(tr))
        if (c.check_id == "mass_conservation") failed = c.status == Status::fail;
    CHECK(failed);
}

TEST_CASE("short runs make asymptotics inconclusive") {
    const Trajectory tr = cosine_run(1.0, 0.5, 10);
    const Norm norms[] = {Norm::l1};
    const auto checks = check_asymptotics(tr, norms);
    REQUIRE(checks.size() == 1);
    CHECK(checks[0].status == Status::inconclusive);
}

TEST_CASE("decay rate fit recovers the linear rate") {
    // Linearised about ubar = 1 at m = 1 the first mode decays at rate
    // 1 + eps * lambda_h, lambda_h the discrete Laplacian eigenvalue.
    const Trajectory tr = cosine_run(1.0, 8.0, 40);
    const double h = 1.0 / 64;
    const double rate = 1.0 + h * (2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * h)) / (h * h);
    const RateFit f = fit_decay_rate(tr, Norm::l1);
    CHECK(!f.degenerate);
    CHECK(f.slope == doctest::Approx(-rate).epsilon(0.02));
}

TEST_CASE("stability constant of identical runs") {
    const Trajectory a = cosine_run(1.0, 0.5, 5);
    CHECK(fitted_stability_constant(a, a) <= 0.0);
    const double others[] = {1.1, 0.9};
    CHECK(check_constant_stability("s", 1.0, others).status == Status::pass);
    const double far[] = {1.5};
    CHECK(check_constant_stability("s", 1.0, far).status == Status::fail);
}
