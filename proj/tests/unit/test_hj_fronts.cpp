#include "coulombflow/hj_fronts.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace coulombflow;

TEST_CASE("single vortex at m = 1 relaxes exponentially") {
    const SingleVortexState st{0.2, 0.6, 1.0, 1.0};
    const FrontTrajectory tr = integrate_single_vortex(st, 2.0);
    REQUIRE(tr.names.size() == 2);
    for (double t : {0.0, 0.37, 1.0, 2.0}) {
        const auto s = tr.at(t);
        CHECK(s[0] == doctest::Approx(0.2 * std::exp(-t)).epsilon(1e-7));
        CHECK(s[1] == doctest::Approx(1.0 - 0.4 * std::exp(-t)).epsilon(1e-7));
    }
}

TEST_CASE("hermite interpolation reproduces recorded points") {
    const TwoVortexState st{0.1, 0.3, 0.6, 0.8, 0.5, 1.0, 2.0};
    const FrontTrajectory tr = integrate_two_vortex(st, 1.0);
    for (std::size_t i = 0; i < tr.t.size(); i += std::max<std::size_t>(1, tr.t.size() / 10)) {
        const auto s = tr.at(tr.t[i]);
        for (std::size_t c = 0; c < s.size(); ++c) CHECK(s[c] == doctest::Approx(tr.S[i][c]).epsilon(1e-14));
    }
    // Fronts stay ordered.
    for (const auto& row : tr.S)
        for (std::size_t c = 1; c < row.size(); ++c) CHECK(row[c] >= row[c - 1]);
}

TEST_CASE("supersolution hypotheses are enforced") {
    SupersolutionState st;
    st.m = 2.0;
    st.alpha = 0.8;
    CHECK_NOTHROW(check_hypotheses(st));
    SupersolutionState bad = st;
    bad.C = 2.0;
    CHECK_THROWS_AS(check_hypotheses(bad), HypothesisError);
    bad = st;
    bad.alpha = 0.5;  // 2 (1 - alpha) m / (m - 1) = 2 > 1
    CHECK_THROWS_AS(check_hypotheses(bad), HypothesisError);
    bad = st;
    bad.m = 1.0;
    CHECK_THROWS_AS(check_hypotheses(bad), HypothesisError);
    bad = st;
    bad.S3 = bad.S2;
    CHECK_THROWS_AS(check_hypotheses(bad), HypothesisError);
}

TEST_CASE("supersolution front S2 collapses onto S1 in finite time") {
    SupersolutionState st;
    st.m = 2.0;
    st.alpha = 0.8;
    st.S2 = 0.39;
    st.S3 = 0.4;
    const SupersolutionRun r = integrate_supersolution(st, 10.0);
    CHECK(std::isfinite(r.T_lower));
    CHECK(r.T_lower > 0.0);
    const auto end = r.traj.at(std::min(r.T_lower, r.traj.t_end()));
    CHECK(end[1] == doctest::Approx(st.S1()).epsilon(1e-6));
}

TEST_CASE("frozen constants dominate the analytic ones") {
    for (double m : {1.5, 2.0, 3.0, 4.0}) {
        const FrontConstants f = frozen_front_constants(m);
        const FrontConstants a = analytic_front_constants(m);
        CHECK(f.c_s2 <= a.c_s2 + 1e-12);
        CHECK(f.c_s3_up <= a.c_s3_up + 1e-12);
        CHECK(f.c_t >= a.c_t - 1e-12);
        CHECK(f.c_s3_low > 0.0);
    }
    CHECK_THROWS(frozen_front_constants(2.5));
}

TEST_CASE("single vortex k is a viscosity solution away from kinks") {
    const SingleVortexState st{0.1, 0.6, 1.0, 2.0};
    const FrontTrajectory tr = integrate_single_vortex(st, 0.5);
    const KEvaluator ev = single_vortex_evaluator(tr, st);
    std::vector<Sample> samples;
    for (int i = 1; i < 10; ++i)
        for (int j = 1; j < 20; ++j) {
            const Sample p{0.05 * i, 0.05 * j};
            if (sample_is_smooth(ev, p, 1e-6)) samples.push_back(p);
        }
    REQUIRE(!samples.empty());
    CHECK(std::abs(viscosity_residual(ev, 2.0, 1.0, ResidualKind::sub, samples)) < 1e-4);
    CHECK(std::abs(viscosity_residual(ev, 2.0, 1.0, ResidualKind::super, samples)) < 1e-4);
}
