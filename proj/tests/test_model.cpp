#include <cmath>

#include <gtest/gtest.h>

#include "frontlab/errors.hpp"
#include "frontlab/model.hpp"
#include "oracles.hpp"

using namespace frontlab;

namespace {

ReactionRecipe recipe(RecipeKind kind, std::map<std::string, double> p = {}) {
    return ReactionRecipe{kind, std::move(p)};
}

// Composite Simpson rule, written independently of the library's quadrature.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 200000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST(Recipes, BalancedCubicHasMiddleRoot) {
    const ProblemSpec spec = build_problem(recipe(RecipeKind::cubic_bistable, {{"a", 0.5}}));
    EXPECT_DOUBLE_EQ(spec.reaction({0, 0}, 0.5), 0.0);
    EXPECT_NEAR(spec.reaction({0, 0}, 0.8), 0.8 * 0.2 * 0.3, 1e-15);
    EXPECT_NEAR(spec.reaction_du({0, 0}, 0.0), -0.5, 1e-15);
}

TEST(Recipes, InvalidParametersNameTheConstraint) {
    try {
        build_problem(recipe(RecipeKind::cubic_bistable, {{"a", 1.2}}));
        FAIL() << "expected ParameterError";
    } catch (const ParameterError& e) {
        EXPECT_NE(std::string(e.what()).find("a in (0, 1)"), std::string::npos);
    }
    EXPECT_THROW(build_problem(recipe(RecipeKind::f1_heterogeneous, {{"L", 8.0}, {"M", 1.0}})),
                 ParameterError);
    EXPECT_THROW(build_problem(recipe(RecipeKind::tristable_quintic,
                                      {{"r1", 0.6}, {"r2", 0.5}})),
                 ParameterError);
    EXPECT_THROW(build_problem(recipe(RecipeKind::cubic_bistable, {{"b", 0.2}})),
                 ParameterError);
}

TEST(Recipes, LayeredMediumWithoutBumpIsHomogeneous) {
    const ProblemSpec f1 =
        build_problem(recipe(RecipeKind::f1_heterogeneous, {{"L", 10.0}, {"M", 0.0}}));
    const F0Function f0 = make_f0(0.05);
    for (double y : {0.0, 3.3, 5.0, 12.0, 19.9})
        for (double u : {0.1, 0.5, 0.8, 0.93, 0.99})
            EXPECT_DOUBLE_EQ(f1.reaction({0.0, y}, u), f0(u));
}

TEST(Recipes, BumpRaisesReactionInsideTheLayer) {
    const double L = 10.0;
    const ProblemSpec f1 =
        build_problem(recipe(RecipeKind::f1_heterogeneous, {{"L", L}, {"M", 5.0}}));
    const F0Function f0 = make_f0(0.05);
    const double S = compute_S(f0);
    const PlateauBump chi2 = chi2_bump(S);
    const double u = 0.5 * (chi2.b + chi2.c);
    EXPECT_GT(f1.reaction({0.0, L / 2}, u), f0(u));
    EXPECT_NEAR(f1.reaction({0.0, L / 2}, u) - f0(u), 5.0 * chi2(u), 1e-14);
    EXPECT_EQ(f1.period[1], 2 * L);
}

TEST(Recipes, LayeredReactionDominatesF0WithEqualityOnTheEmptyHalf) {
    const double L = 10.0;
    const ProblemSpec f1 =
        build_problem(recipe(RecipeKind::f1_heterogeneous, {{"L", L}, {"M", 20.0}}));
    const F0Function f0 = make_f0(0.05);
    for (int i = 0; i <= 400; ++i) {
        const double y = 2 * L * i / 400.0;
        for (int k = 0; k <= 200; ++k) {
            const double u = k / 200.0;
            const double d = f1.reaction({0.0, y}, u) - f0(u);
            EXPECT_GE(d, 0.0);
            if (y >= L) EXPECT_EQ(d, 0.0);
        }
    }
}

TEST(Recipes, BumpSupportsAndPlateau) {
    const PlateauBump chi1 = chi1_bump();
    EXPECT_EQ(chi1(0.0), 0.0);
    EXPECT_EQ(chi1(1.0), 0.0);
    for (double t = 0.25; t <= 0.75; t += 0.01) EXPECT_EQ(chi1(t), 1.0);
    const double S = compute_S(make_f0(0.05));
    const PlateauBump chi2 = chi2_bump(S);
    EXPECT_GT(chi2.a, S);
    EXPECT_LT(chi2.d, 1.0);
    EXPECT_EQ(chi2(S), 0.0);
    EXPECT_EQ(chi2(1.0), 0.0);
}

TEST(Recipes, StackedReactionIsC1AtTheJunction) {
    const ProblemSpec spec = build_problem(
        recipe(RecipeKind::stacked, {{"L", 10.0}, {"M", 5.0}, {"Mprime", 3.0}}));
    for (double y : {0.0, 5.0, 15.0}) {
        EXPECT_NEAR(spec.reaction_du({0, y}, 1.0), -1.0, 1e-12);
        EXPECT_NEAR(spec.reaction_du({0, y}, 1.0 + 1e-12), -1.0, 1e-9);
        const double h = 1e-6;
        EXPECT_NEAR((spec.reaction({0, y}, 1.0) - spec.reaction({0, y}, 1.0 - h)) / h, -1.0, 1e-5);
        EXPECT_NEAR((spec.reaction({0, y}, 1.0 + h) - spec.reaction({0, y}, 1.0)) / h, -1.0, 1e-5);
        EXPECT_EQ(spec.reaction({0, y}, 2.0), 0.0);
    }
    EXPECT_EQ(spec.u_ceiling, 2.0);
}

TEST(Recipes, AllBuiltInsPassPeriodicityChecks) {
    const std::vector<ReactionRecipe> all{
        recipe(RecipeKind::cubic_bistable),
        recipe(RecipeKind::tristable_quintic),
        recipe(RecipeKind::fisher_kpp),
        recipe(RecipeKind::periodic_cubic),
        recipe(RecipeKind::f0_asymmetric),
        recipe(RecipeKind::f1_heterogeneous, {{"L", 10.0}, {"M", 5.0}}),
        recipe(RecipeKind::f2_homogeneous, {{"Mprime", 2.0}}),
        recipe(RecipeKind::stacked, {{"L", 10.0}, {"M", 5.0}, {"Mprime", 2.0}}),
    };
    for (const auto& r : all) {
        const ProblemSpec spec = build_problem(r);
        const ProblemValidation v = validate_problem(spec, 24);
        EXPECT_TRUE(v.ok) << spec.name;
        EXPECT_GT(spec.lipschitz, 0.0);
    }
}

TEST(Recipes, RateExtendsLinearlyOutsideTheRange) {
    const ProblemSpec spec = build_problem(recipe(RecipeKind::cubic_bistable, {{"a", 0.3}}));
    EXPECT_NEAR(spec.rate({0, 0}, -0.05), -0.3 * -0.05, 1e-15);
    EXPECT_NEAR(spec.rate({0, 0}, 1.05), spec.reaction_du({0, 0}, 1.0) * 0.05, 1e-15);
    EXPECT_NEAR(spec.primitive({0, 0}, 0.7),
                simpson([&](double u) { return spec.reaction({0, 0}, u); }, 0, 0.7), 1e-13);
}

TEST(Reflection, ReflectedReactionIsMinusFOfMinusU) {
    const ProblemSpec spec = build_problem(recipe(RecipeKind::cubic_bistable, {{"a", 0.3}}));
    const ProblemSpec r = reflect_problem(spec);
    EXPECT_EQ(r.u_floor, -1.0);
    EXPECT_EQ(r.u_ceiling, 0.0);
    for (double u : {-0.9, -0.5, -0.1})
        EXPECT_DOUBLE_EQ(r.reaction({0, 0}, u), -spec.reaction({0, 0}, -u));
}

TEST(F0, SymmetricCubicSlopeAtZero) {
    EXPECT_NEAR(F0Function{0.0}.derivative(0.0), -1.0, 1e-15);
    EXPECT_NEAR(F0Function{0.0}.derivative(1.0), -1.0, 1e-15);
}

TEST(F0, ZeroAsymmetryIsRejected) {
    try {
        make_f0(0.0);
        FAIL() << "expected ConstructionError";
    } catch (const ConstructionError& e) {
        ASSERT_EQ(e.violated().size(), 1u);
        EXPECT_NE(e.violated()[0].find("integral"), std::string::npos);
    }
    EXPECT_NEAR(simpson([](double u) { return F0Function{0.0}(u); }, 0, 1), 0.0, 1e-15);
}

TEST(F0, DefaultAsymmetryPassesEveryConstraint) {
    const F0Function f0 = make_f0(0.05);
    const F0Validation v = validate_f0(f0);
    EXPECT_TRUE(v.ok);
    EXPECT_GT(simpson([&](double u) { return f0(u); }, 0, 1), 0.0);
    EXPECT_NEAR(v.integral, simpson([&](double u) { return f0(u); }, 0, 1), 1e-12);
    for (int i = 0; i <= 10000; ++i) EXPECT_LE(std::abs(f0.derivative(i / 1e4)), 1.0);
    EXPECT_GT(f0.derivative(0.5), 0.0);
}

TEST(F0, LargeAsymmetryViolatesTheSlopeBound) {
    EXPECT_THROW(make_f0(0.5), ConstructionError);
    EXPECT_THROW(make_f0(-0.1), ParameterError);
}

TEST(ComputeS, RootOfTheCumulativeIntegral) {
    const F0Function f0 = make_f0(0.05);
    const double S = compute_S(f0);
    EXPECT_GT(S, 0.5);
    EXPECT_LT(S, 1.0);
    EXPECT_LT(std::abs(simpson([&](double u) { return f0(u); }, 0, S)), 1e-10);
}

TEST(ComputeS, SymmetricCubicGivesOne) {
    EXPECT_EQ(compute_S(F0Function{0.0}), 1.0);
    double previous = 0.5;
    for (double eps : {0.05, 0.03, 0.02, 0.01, 0.005}) {
        const double S = compute_S(make_f0(eps));
        EXPECT_GT(S, previous);
        previous = S;
    }
    EXPECT_GT(previous, 0.95);
}

TEST(ComputeS, NoSignChangeIsAnError) {
    EXPECT_THROW(compute_S([](double u) { return u * (1 - u); }), ConstructionError);
}

TEST(Oracles, CubicAnsatzSolvesTheWaveEquation) {
    for (double z : {-5.0, -1.0, 0.0, 2.0, 6.0})
        EXPECT_NEAR(oracle::cubic_ansatz_residual(0.25, z), 0.0, 1e-6);
    EXPECT_NEAR(oracle::cubic_speed(0.25), 0.35355339, 1e-8);
    const double a = 0.25;
    const double c = oracle::shooting_speed(
        [a](double u) { return u * (1 - u) * (u - a); },
        [a](double u) { return -3 * u * u + 2 * (1 + a) * u - a; }, 0.0, 1.0);
    EXPECT_NEAR(c, oracle::cubic_speed(a), 2e-3);
    EXPECT_NEAR(oracle::kpp_dispersion_speed(1.0), 2.0, 1e-8);
}
