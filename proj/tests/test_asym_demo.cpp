#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "frontlab/asym_demo.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/model.hpp"
#include "oracles.hpp"

using namespace frontlab;

namespace {

DemoOptions coarse() {
    DemoOptions o = DemoOptions::smoke();
    o.window_e1 = 20.0;
    o.window_e2 = 20.0;
    o.spreading_t_max = 100.0;
    return o;
}

// Speed of the homogeneous f2 front from the shooting oracle.
double f2_oracle(double Mprime, double eps) {
    const PlateauBump chi2 = chi2_bump(compute_S(make_f0(eps)));
    auto f = [&](double u) { return 2 * u * (u - 0.5) * (1 - u) + Mprime * chi2(u); };
    auto fu = [&](double u) { return -6 * u * u + 6 * u - 1 + Mprime * chi2.derivative(u); };
    return oracle::shooting_speed(f, fu, 0.0, 1.0);
}

}  // namespace

TEST(CrossLayerBound, MatchesTheClosedForm) {
    EXPECT_NEAR(cross_layer_bound(10.0), 40.0 / (10.0 - std::log(4.0)), 1e-12);
    EXPECT_NEAR(cross_layer_bound(10.0), 4.6438, 1e-4);
}

TEST(DemoPresets, SmokeIsCoarserThanFull) {
    EXPECT_GT(DemoOptions::smoke().h, DemoOptions::full().h);
    EXPECT_EQ(DemoOptions::full().L, 10.0);
    EXPECT_EQ(DemoOptions::full().eps, 0.05);
}

TEST(F2FrontSpeed, BalancedCubicDoesNotMove) {
    DemoOptions o = coarse();
    o.h = 0.125;
    EXPECT_NEAR(f2_front_speed(0.0, 0.05, o), 0.0, 0.01);
}

TEST(F2FrontSpeed, AgreesWithShooting) {
    DemoOptions o = coarse();
    o.h = 0.0625;
    EXPECT_NEAR(f2_front_speed(0.5, 0.05, o), f2_oracle(0.5, 0.05), 0.01);
}

TEST(TuneMprime, HitsTheTargetWithAMonotoneTrace) {
    DemoOptions o = coarse();
    o.h = 0.125;
    const MprimeTuning t = tune_Mprime(0.08, o);
    EXPECT_NEAR(t.speed, 0.08, o.Mprime_tol);
    EXPECT_TRUE(t.monotone);
    EXPECT_GT(t.Mprime, 0.0);
    EXPECT_GE(t.trace.size(), 3u);
}

TEST(TuneMprime, UnreachableTargetThrowsWithTrace) {
    DemoOptions o = coarse();
    o.Mprime_max = 1.5;
    try {
        tune_Mprime(5.0, o);
        FAIL() << "expected TuningError";
    } catch (const TuningError& e) {
        EXPECT_GE(e.trace().size(), 2u);
    }
    EXPECT_THROW(tune_Mprime(0.0, o), ParameterError);
}

TEST(TuneM, RejectsNonPositiveStart) {
    DemoOptions o = coarse();
    o.M_start = 0.0;
    EXPECT_THROW(tune_M(10.0, 0.25, o), ParameterError);
}

TEST(TuneM, UnreachableAnalyticBoundThrows) {
    DemoOptions o = coarse();
    o.rule = SeparationRule::analytic_bound;
    o.M_max = 2.0;
    try {
        tune_M(10.0, 0.25, o);
        FAIL() << "expected TuningError";
    } catch (const TuningError& e) {
        ASSERT_EQ(e.trace().size(), 2u);
        EXPECT_EQ(e.trace()[0].first, 1.0);
        EXPECT_EQ(e.trace()[1].first, 2.0);
        // Both traced speeds are far below the bound.
        for (const auto& [M, c1] : e.trace()) EXPECT_LT(c1, cross_layer_bound(10.0));
    }
}

TEST(DirectionalSpeeds, LayersSpeedUpTheLongitudinalFront) {
    const DemoOptions o = coarse();
    const DirectionalSpeeds s = measure_directional_speeds(10.0, 1.0, 0.05, o);
    EXPECT_GT(s.e2.value, 0.0);
    EXPECT_GT(s.e1.value, s.e2.value);
    EXPECT_LE(s.e2.value, cross_layer_bound(10.0));
    EXPECT_FALSE(s.e1_check.has_value());
}
