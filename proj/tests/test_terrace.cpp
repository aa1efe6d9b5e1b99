#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "frontlab/errors.hpp"
#include "frontlab/stepper.hpp"
#include "frontlab/terrace.hpp"
#include "oracles.hpp"

using namespace frontlab;

namespace {

TerraceOptions small_terrace() {
    TerraceOptions o;
    o.front.weinberger.window_left = 20.0;
    o.front.weinberger.window_right = 20.0;
    return o;
}

std::vector<SteadyState> catalog(const ProblemSpec& spec, const CellLattice& lat) {
    return find_steady_states(spec, default_seeds(spec, lat));
}

// -10 u (u - 0.1)(u - 0.5)(u - 0.7)(u - 1): the upper front is slower than the lower one.
ReactionRecipe terraced_quintic() {
    return {RecipeKind::tristable_quintic, {{"r1", 0.1}, {"scale", 10.0}}};
}

double quintic(double u) { return -10.0 * u * (u - 0.1) * (u - 0.5) * (u - 0.7) * (u - 1.0); }
double quintic_du(double u) {
    const double r[5] = {0.0, 0.1, 0.5, 0.7, 1.0};
    double sum = 0.0;
    for (int i = 0; i < 5; ++i) {
        double p = 1.0;
        for (int k = 0; k < 5; ++k)
            if (k != i) p *= u - r[k];
        sum += p;
    }
    return -10.0 * sum;
}

}  // namespace

TEST(ClampToInterval, FullRangeIsTheIdentity) {
    const ProblemSpec spec = build_problem({RecipeKind::cubic_bistable, {{"a", 0.3}}});
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    const ProblemSpec c = clamp_to_interval(spec, PeriodicField(lat, 0.0), PeriodicField(lat, 1.0));
    for (int k = 0; k <= 100; ++k) {
        const double u = k / 100.0;
        EXPECT_EQ(c.reaction({0.0, 0.0}, u), spec.reaction({0.0, 0.0}, u));
        EXPECT_EQ(c.reaction_du({0.0, 0.0}, u), spec.reaction_du({0.0, 0.0}, u));
    }
}

TEST(ClampToInterval, BandEndsStaySteadyAndTheExtensionIsC1) {
    const ProblemSpec spec = build_problem({RecipeKind::periodic_cubic, {}});
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    const auto states = catalog(spec, lat);
    ASSERT_EQ(states.size(), 3u);
    const PeriodicField& q = states[1].profile;
    const ProblemSpec band = clamp_to_interval(spec, q, states[2].profile);
    EXPECT_LT(steady_residual(band, q), 1e-7);
    EXPECT_LT(steady_residual(band, states[2].profile), 1e-7);
    const Vec2 x{lat.h[0] * 3, 0.0};
    const double lo = q.at(x), eps = 1e-7;
    EXPECT_NEAR((band.reaction(x, lo) - band.reaction(x, lo - eps)) / eps, band.reaction_du(x, lo),
                1e-5);
    EXPECT_NEAR(band.reaction(x, lo - 0.1), spec.reaction(x, lo) - 0.1 * spec.reaction_du(x, lo),
                1e-14);
}

TEST(ClampToInterval, EvolutionStaysInsideTheBand) {
    const ProblemSpec spec = build_problem({RecipeKind::periodic_cubic, {}});
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    const auto states = catalog(spec, lat);
    const PeriodicField& lo = states[1].profile;
    const PeriodicField& hi = states[2].profile;
    const ProblemSpec band = clamp_to_interval(spec, lo, hi);
    const Domain d = Domain::cell(band, lat);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        FieldState s;
        for (std::size_t k = 0; k < lat.size(); ++k)
            s.values.push_back(lo.values()[k] + unit(rng) * (hi.values()[k] - lo.values()[k]));
        s = evolve(band, d, s, 2.0);
        for (std::size_t k = 0; k < lat.size(); ++k) {
            ASSERT_GE(s.values[k], lo.values()[k] - 1e-9);
            ASSERT_LE(s.values[k], hi.values()[k] + 1e-9);
        }
    }
}

TEST(ClampToInterval, CrossingStatesAreRejected) {
    const ProblemSpec spec = build_problem({RecipeKind::cubic_bistable, {{"a", 0.3}}});
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    EXPECT_THROW(clamp_to_interval(spec, PeriodicField(lat, 0.5), PeriodicField(lat, 0.5)),
                 ParameterError);
}

TEST(BuildTerrace, BistableCubicHasOneFront) {
    const ProblemSpec spec = build_problem({RecipeKind::cubic_bistable, {{"a", 0.25}}});
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    const TerraceReport r = build_terrace(spec, lat, {1, 0}, catalog(spec, lat), small_terrace());
    ASSERT_EQ(r.floors(), 1);
    ASSERT_EQ(r.states.size(), 2u);
    EXPECT_NEAR(r.states.front().profile.mean(), 1.0, 1e-12);
    EXPECT_NEAR(r.states.back().profile.mean(), 0.0, 1e-12);
    EXPECT_NEAR(r.speeds[0].value, oracle::cubic_speed(0.25), 0.01);
    EXPECT_TRUE(r.ordered);
    EXPECT_TRUE(r.residuals_ok);
    EXPECT_TRUE(r.bracketing_ok);
}

TEST(BuildTerrace, TristableQuinticHasTwoOrderedFronts) {
    const ProblemSpec spec = build_problem(terraced_quintic());
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    const TerraceReport r = build_terrace(spec, lat, {1, 0}, catalog(spec, lat), small_terrace());
    ASSERT_EQ(r.floors(), 2);
    EXPECT_NEAR(r.states[1].profile.mean(), 0.5, 1e-8);
    EXPECT_TRUE(r.ordered);
    EXPECT_LE(r.speeds[0].value, r.speeds[1].value + r.speeds[0].radius() + r.speeds[1].radius());
    EXPECT_LT(r.telescoping_error, 1e-9);
    EXPECT_TRUE(r.bracketing_ok);
    EXPECT_TRUE(r.residuals_ok);
    EXPECT_NEAR(r.front_speeds[0], oracle::shooting_speed(quintic, quintic_du, 0.5, 1.0), 0.01);
    EXPECT_NEAR(r.front_speeds[1], oracle::shooting_speed(quintic, quintic_du, 0.0, 0.5), 0.01);
}

TEST(BuildTerrace, NeedsTwoStableStates) {
    const ProblemSpec spec = build_problem({RecipeKind::fisher_kpp, {}});
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    EXPECT_THROW(build_terrace(spec, lat, {1, 0}, catalog(spec, lat), small_terrace()),
                 StructuralError);
}

TEST(BuildTerrace, FailuresCarryThePartialTerrace) {
    const ProblemSpec spec = build_problem(terraced_quintic());
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    TerraceOptions o = small_terrace();
    o.max_floors = 1;
    try {
        build_terrace(spec, lat, {1, 0}, catalog(spec, lat), o);
        FAIL() << "expected a terrace error";
    } catch (const TerraceError& e) {
        EXPECT_EQ(e.partial().floors(), 1);
        EXPECT_EQ(e.partial().states.size(), 2u);
    }
}
