#include <cmath>
#include <cstdio>
#include <random>

#include <gtest/gtest.h>

#include "frontlab/errors.hpp"
#include "frontlab/steady.hpp"
#include "frontlab/stepper.hpp"
#include "oracles.hpp"

using namespace frontlab;

namespace {

ProblemSpec heat_problem(int dimension = 1) {
    ProblemSpec spec;
    spec.name = "heat";
    spec.dimension = dimension;
    spec.invariant = {true, true};
    spec.diffusion = [](const Vec2&) { return Mat2{}; };
    spec.reaction = [](const Vec2&, double) { return 0.0; };
    spec.reaction_du = [](const Vec2&, double) { return 0.0; };
    return spec;
}

ProblemSpec periodic_cubic() {
    return build_problem({RecipeKind::periodic_cubic,
                          {{"a", 0.3}, {"amplitude", 0.15}, {"diffusion_amplitude", 0.4},
                           {"period", 4.0}}});
}

Domain line(const ProblemSpec& spec, double h, double half, double left, double right) {
    const Frame fr = make_frame(spec, {1, 0}, h);
    const int n = static_cast<int>(std::lround(2 * half / fr.h_s)) + 1;
    return Domain(spec, fr, -half, n, Boundary::dirichlet({left}), Boundary::dirichlet({right}));
}

}  // namespace

TEST(Evolve, ConstantsAreHeatInvariant) {
    const ProblemSpec spec = heat_problem();
    const Domain d = line(spec, 0.1, 5.0, 0.7, 0.7);
    FieldState s{std::vector<double>(d.size(), 0.7), 0.0};
    s = evolve(spec, d, s, 3.0);
    for (double v : s.values) EXPECT_NEAR(v, 0.7, 1e-14);
    EXPECT_DOUBLE_EQ(s.time, 3.0);
}

TEST(Evolve, SteadyStateIsAFixedPoint) {
    const ProblemSpec spec = build_problem({RecipeKind::cubic_bistable, {{"a", 0.25}}});
    const Domain d = line(spec, 1.0 / 64, 10.0, 1.0, 1.0);
    FieldState s{std::vector<double>(d.size(), 1.0), 0.0};
    s = evolve(spec, d, s, 1.0);
    for (double v : s.values) EXPECT_NEAR(v, 1.0, 1e-9);
}

TEST(Evolve, HeavisideMidpointStaysAtOneHalf) {
    const ProblemSpec spec = heat_problem();
    const double h = 1.0 / 32;
    const Domain d = line(spec, h, 12.0, 1.0, 0.0);
    FieldState s{std::vector<double>(d.size()), 0.0};
    for (int i = 0; i < d.n_s(); ++i) {
        const double x = d.s(i);
        s.values[i] = std::abs(x) < 1e-12 ? 0.5 : (x < 0 ? 1.0 : 0.0);
    }
    StepperOptions opt;
    opt.dt_max = 1.0 / 512;
    s = evolve(spec, d, s, 1.0, opt);
    const int mid = d.n_s() / 2;
    ASSERT_NEAR(d.s(mid), 0.0, 1e-12);
    EXPECT_NEAR(s.values[mid], 0.5, 1e-12);
    for (int i = 0; i < d.n_s(); i += 16)
        EXPECT_NEAR(s.values[i], oracle::heat_step(1.0, d.s(i)), 2e-3);
}

TEST(Evolve, SecondOrderInSpace) {
    const ProblemSpec spec = heat_problem();
    StepperOptions opt;
    opt.dt_max = 1e-3;
    auto run = [&](double h) {
        const Domain d = line(spec, h, 8.0, 0.0, 0.0);
        FieldState s{std::vector<double>(d.size()), 0.0};
        for (int i = 0; i < d.n_s(); ++i) s.values[i] = std::exp(-d.s(i) * d.s(i));
        s = evolve(spec, d, s, 1.0, opt);
        return std::make_pair(d, s);
    };
    const auto [df, sf] = run(1.0 / 128);
    double prev = 0.0;
    for (int level = 0; level < 3; ++level) {
        const double h = 0.25 / (1 << level);
        const auto [d, s] = run(h);
        const int stride = static_cast<int>(std::lround(h * 128));
        double err = 0.0;
        for (int i = 0; i < d.n_s(); ++i)
            err = std::max(err, std::abs(s.values[i] - sf.values[i * stride]));
        if (level > 0) {
            const double ratio = prev / err;
            EXPECT_GE(ratio, 3.4) << "h = " << h;
            EXPECT_LE(ratio, 4.6) << "h = " << h;
        }
        prev = err;
    }
}

TEST(Evolve, TransverseModeDecaysAtTheDiscreteRate) {
    ProblemSpec spec = heat_problem(2);
    spec.u_floor = -1.0;
    spec.period = {1.0, 4.0};
    spec.invariant = {true, false};
    const Frame fr = make_frame(spec, {1, 0}, 1.0 / 16);
    ASSERT_EQ(fr.n_r, 64);
    const Domain d(spec, fr, 0.0, 8, Boundary::neumann(), Boundary::neumann());
    FieldState s{std::vector<double>(d.size()), 0.0};
    const double k = 2 * M_PI / 4.0;
    for (int j = 0; j < d.n_r(); ++j)
        for (int i = 0; i < d.n_s(); ++i) s.values[d.index(i, j)] = std::cos(k * j * fr.h_r);
    StepperOptions opt;
    opt.dt_max = 1e-3;
    s = evolve(spec, d, s, 1.0, opt);
    const double expected = std::exp(-k * k);
    for (int j = 0; j < d.n_r(); ++j)
        EXPECT_NEAR(s.values[d.index(3, j)], expected * std::cos(k * j * fr.h_r), 2e-3);
}

TEST(Evolve, GridComparisonPrinciple) {
    const ProblemSpec spec = periodic_cubic();
    const Frame fr = make_frame(spec, {1, 0}, 1.0 / 16);
    const Domain d(spec, fr, -16.0, 2 * 16 * 16, Boundary::dirichlet({1.0}),
                   Boundary::dirichlet({0.0}));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        FieldState a{std::vector<double>(d.size()), 0.0}, b = a;
        for (std::size_t k = 0; k < d.size(); ++k) {
            a.values[k] = U(rng);
            b.values[k] = std::min(1.0, a.values[k] + 0.3 * U(rng));
        }
        a = evolve(spec, d, a, 1.0);
        b = evolve(spec, d, b, 1.0);
        for (std::size_t k = 0; k < d.size(); ++k) EXPECT_LE(a.values[k], b.values[k] + 1e-9);
    }
}

TEST(Evolve, LeavingTheGuardBandIsADivergence) {
    const ProblemSpec spec = build_problem({RecipeKind::cubic_bistable, {{"a", 0.25}}});
    const Domain d = line(spec, 0.1, 2.0, 0.0, 0.0);
    FieldState s{std::vector<double>(d.size(), 0.0), 0.0};
    s.values[5] = 1.5;
    try {
        evolve(spec, d, s, 1.0);
        FAIL() << "expected DivergenceError";
    } catch (const DivergenceError& e) {
        EXPECT_EQ(e.time(), 0.0);
        EXPECT_NEAR(e.s(), d.s(5), 1e-12);
    }
}

TEST(Linearized, ConstantModeGrowsWithTheSlope) {
    const double a = 0.25;
    const ProblemSpec spec = build_problem({RecipeKind::cubic_bistable, {{"a", a}}});
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 64);
    const Domain d = Domain::cell(spec, lat);
    const std::vector<double> base(d.size(), 0.0);
    FieldState w{std::vector<double>(d.size(), 1.0), 0.0};
    w = evolve_linearized(spec, d, base, w, 1.0);
    for (double v : w.values) EXPECT_NEAR(v, std::exp(-a), 1e-12);

    const std::vector<double> top(d.size(), 1.0);
    FieldState w2{std::vector<double>(d.size(), 1.0), 0.0};
    w2 = evolve_linearized(spec, d, top, w2, 2.0);
    for (double v : w2.values) EXPECT_NEAR(std::log(v) / 2.0, spec.reaction_du({0, 0}, 1.0), 1e-6);

    FieldState zero{std::vector<double>(d.size(), 0.0), 0.0};
    zero = evolve_linearized(spec, d, base, zero, 1.0);
    for (double v : zero.values) EXPECT_EQ(v, 0.0);
}

TEST(Energy, ZeroAndConstantStates) {
    const ProblemSpec spec = build_problem({RecipeKind::cubic_bistable, {{"a", 0.3}}});
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    EXPECT_EQ(energy(spec, PeriodicField(lat, 0.0)), 0.0);
    const double k = 0.8;
    // F(k) for u(1-u)(u-a) integrated by hand.
    const double a = 0.3;
    const double F = -std::pow(k, 4) / 4 + (1 + a) * std::pow(k, 3) / 3 - a * k * k / 2;
    EXPECT_NEAR(energy(spec, PeriodicField(lat, k)), -F, 1e-13);
}

TEST(Energy, NonIncreasingAlongCellPeriodicEvolution) {
    const ProblemSpec spec = periodic_cubic();
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    const Domain d = Domain::cell(spec, lat);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    FieldState s{std::vector<double>(d.size()), 0.0};
    for (auto& v : s.values) v = U(rng);
    double E = energy(spec, PeriodicField(lat, s.values));
    for (int k = 0; k < 80; ++k) {
        s = evolve(spec, d, s, 0.25);
        const double En = energy(spec, PeriodicField(lat, s.values));
        EXPECT_LE(En, E + 0.25e-8);
        E = En;
    }
}

TEST(Snapshot, RawRoundTrip) {
    RawArray a;
    a.dims = {3, 2, 1};
    a.spacing = {0.5, 0.25};
    a.origin = -1.5;
    a.time = 2.0;
    a.values = {1, 2, 3, 4, 5, 6.5};
    const std::string path = ::testing::TempDir() + "/snap.raw";
    write_raw(path, a);
    std::FILE* f = std::fopen(path.c_str(), "rb");
    ASSERT_NE(f, nullptr);
    std::fseek(f, 0, SEEK_END);
    EXPECT_EQ(std::ftell(f), 64 + 6 * 8);
    std::fclose(f);
    const RawArray b = read_raw(path);
    EXPECT_EQ(b.dims, a.dims);
    EXPECT_EQ(b.values, a.values);
    EXPECT_EQ(b.origin, a.origin);
    EXPECT_EQ(b.spacing, a.spacing);
}

TEST(Evolve, ContinuationBoundariesKeepPeriodicStatesSteady) {
    const ProblemSpec spec = build_problem({RecipeKind::periodic_cubic, {}});
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    const auto states = find_steady_states(spec, default_seeds(spec, lat));
    const SteadyState* mid = nullptr;
    for (const auto& s : states)
        if (s.stability == Stability::linearly_unstable) mid = &s;
    ASSERT_NE(mid, nullptr);
    const Frame fr = make_frame(spec, {1, 0}, 1.0 / 16);
    const Domain d(spec, fr, -3.0, 6 * 16 + 1, Boundary::continuation(), Boundary::continuation());
    const std::vector<double> sites = cell_to_frame(mid->profile, fr);
    FieldState st;
    for (int i = 0; i < d.n_s(); ++i) st.values.push_back(sites[i % 16]);
    const FieldState out = evolve(spec, d, st, 1.0);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        EXPECT_NEAR(out.values[k], st.values[k], 1e-9);
    const Domain n(spec, fr, -3.0, 6 * 16 + 1, Boundary::neumann(), Boundary::neumann());
    const FieldState drift = evolve(spec, n, st, 1.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < drift.values.size(); ++k)
        worst = std::max(worst, std::abs(drift.values[k] - st.values[k]));
    EXPECT_GT(worst, 1e-6);
}
