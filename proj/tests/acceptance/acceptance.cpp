// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero on
// any failure. Optional arguments select criteria by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "frontlab/assumptions.hpp"
#include "frontlab/asym_demo.hpp"
#include "frontlab/front.hpp"
#include "frontlab/spreading.hpp"
#include "frontlab/steady.hpp"
#include "frontlab/stepper.hpp"
#include "frontlab/terrace.hpp"
#include "frontlab/weinberger.hpp"
#include "oracles.hpp"

using namespace frontlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Detail {
public:
    template <class T>
    Detail& operator<<(const T& v) {
        os_ << v;
        return *this;
    }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Case {
    ProblemSpec spec;
    Frame frame;
    CellLattice lattice;
    WeinbergerOptions w;
};

Case make_case(const ReactionRecipe& recipe, double h, double half_width = 20.0) {
    Case c{build_problem(recipe), {}, {}, {}};
    c.frame = make_frame(c.spec, {1, 0}, h);
    c.lattice = make_cell_lattice(c.spec, h);
    c.w.window_left = c.w.window_right = half_width;
    return c;
}

ProfileGrid phi_for(const Case& c, double level, double width) {
    return make_phi(c.spec, c.frame, PeriodicField(c.lattice, c.spec.u_floor),
                    PeriodicField(c.lattice, level), PeriodicField(c.lattice, c.spec.u_ceiling), width,
                    c.w);
}

FrontOptions front_options(const Case& c) {
    FrontOptions o;
    o.weinberger = c.w;
    return o;
}

// 1. Exact speed of the cubic by bisection and by spreading.
Outcome exact_speed() {
    const auto t0 = std::chrono::steady_clock::now();
    const double exact = oracle::cubic_speed(0.25);
    const Case c = make_case({RecipeKind::cubic_bistable, {{"a", 0.25}}}, 1.0 / 64);
    const SpeedEstimate b = find_cstar(c.spec, phi_for(c, 0.85, 3.0), 0.01, c.w).estimate;
    const InitialCondition datum = heaviside_datum(c.spec, c.frame, PeriodicField(c.lattice, 0.0),
                                                   PeriodicField(c.lattice, 1.0), 0.9);
    const SpeedEstimate s = measure_spreading_speed(c.spec, datum, 0.5).estimate;
    const double t = seconds_since(t0);
    const double eb = std::abs(b.value - exact) / exact, es = std::abs(s.value - exact) / exact;
    Detail d;
    d << "bisection " << b.value << " (" << 100 * eb << "%), spreading " << s.value << " ("
      << 100 * es << "%), exact " << exact << ", " << t << " s";
    return {eb < 0.03 && es < 0.03 && t < 120.0, d.str()};
}

// 2. The balanced cubic does not move.
Outcome zero_speed() {
    const Case c = make_case({RecipeKind::cubic_bistable, {{"a", 0.5}}}, 1.0 / 32);
    const SpeedEstimate b = find_cstar(c.spec, phi_for(c, 0.85, 3.0), 0.01, c.w).estimate;
    Detail d;
    d << "c* = " << b.value << " [" << b.lower << ", " << b.upper << "]";
    return {std::abs(b.value) < 0.01, d.str()};
}

// 3. Two initializers of different level and width give the same speed.
Outcome initializer_independence() {
    const double tol = 0.01;
    Outcome out{true, ""};
    Detail d;
    for (const auto& [name, recipe, h] :
         {std::tuple{"cubic", ReactionRecipe{RecipeKind::cubic_bistable, {{"a", 0.25}}}, 1.0 / 16},
          std::tuple{"periodic_cubic", ReactionRecipe{RecipeKind::periodic_cubic, {}}, 1.0 / 8}}) {
        const Case c = make_case(recipe, h);
        const double a = find_cstar(c.spec, phi_for(c, 0.8, 3.0), tol, c.w).estimate.value;
        const double b = find_cstar(c.spec, phi_for(c, 0.95, 6.0), tol, c.w).estimate.value;
        out.pass = out.pass && std::abs(a - b) < 2 * tol;
        d << name << " " << a << " vs " << b << "; ";
    }
    out.detail = d.str();
    return out;
}

double second_difference_max(const ProfileGrid& u) {
    double m = 0.0;
    for (int s = 0; s < u.sites(); ++s)
        for (int l = 1; l + 1 < u.n_z; ++l)
            m = std::max(m, std::abs(u.at(s, l + 1) - 2 * u.at(s, l) + u.at(s, l - 1)));
    return m;
}

// 4. Monotonicity of the iterates in n, z and c, and the shift inequality.
Outcome monotonicity_suite() {
    std::mt19937_64 rng(20);
    std::uniform_real_distribution<double> speed(0.0, 0.5), step(0.05, 0.3);
    std::uniform_int_distribution<int> steps(5, 30);
    double worst_n = 0.0, worst_z = 0.0, worst_c = 0.0, worst_shift = 0.0;
    int probes = 0;
    for (const ReactionRecipe& recipe : {ReactionRecipe{RecipeKind::cubic_bistable, {{"a", 0.25}}},
                                         ReactionRecipe{RecipeKind::periodic_cubic, {}}}) {
        const Case cs = make_case(recipe, 1.0 / 16);
        const ProfileGrid phi = phi_for(cs, 0.85, 3.0);
        const EvolutionOperator op(cs.spec, phi, cs.w);
        for (int k = 0; k < 10; ++k, ++probes) {
            const double c = speed(rng), c2 = c + step(rng);
            const int n = steps(rng);
            IterationState a = start_iteration(phi, c), b = start_iteration(phi, c2);
            for (int i = 0; i < n; ++i) {
                const ProfileGrid prev = a.profile;
                advance(op, a, cs.w);
                advance(op, b, cs.w);
                for (std::size_t j = 0; j < prev.values.size(); ++j)
                    worst_n = std::max(worst_n, prev.values[j] - a.profile.values[j]);
                worst_z = std::max({worst_z, monotonicity_defect(a.profile), monotonicity_defect(b.profile)});
            }
            for (std::size_t j = 0; j < a.profile.values.size(); ++j)
                worst_c = std::max(worst_c, b.profile.values[j] - a.profile.values[j]);
            // a_{c,n}(., . + n (c2 - c) tau) <= a_{c2,n}, up to the accumulated
            // linear-interpolation error of n shifted steps.
            const double shift = n * (c2 - c) * cs.w.tau / a.profile.h();
            const double slack = 1e-8 + n * 0.125 * std::max(second_difference_max(a.profile),
                                                               second_difference_max(b.profile));
            for (int s = 0; s < a.profile.sites(); ++s)
                for (int l = 0; l < a.profile.n_z; ++l) {
                    const double excess = a.profile.sample(s, l + shift) - b.profile.at(s, l);
                    worst_shift = std::max(worst_shift, excess - slack);
                }
        }
    }
    Detail d;
    d << probes << " probes; max violations: n " << worst_n << ", z " << worst_z << ", c " << worst_c
      << ", shift beyond slack " << worst_shift;
    return {worst_n <= 1e-8 && worst_z <= 1e-8 && worst_c <= 1e-8 && worst_shift <= 0.0, d.str()};
}

// 5. The extracted front is a fixed point of the shifted evolution operator.
Outcome fixed_point_residual_check() {
    Outcome out{true, ""};
    Detail d;
    for (const auto& [name, recipe] :
         {std::pair{"cubic", ReactionRecipe{RecipeKind::cubic_bistable, {{"a", 0.25}}}},
          std::pair{"periodic_cubic", ReactionRecipe{RecipeKind::periodic_cubic, {}}}}) {
        const Case c = make_case(recipe, 1.0 / 16);
        const ProfileGrid phi = phi_for(c, 0.85, 3.0);
        const SpeedEstimate cs = find_cstar(c.spec, phi, 0.01, c.w).estimate;
        const FrontResult f = extract_front(c.spec, c.lattice, cs, phi, PeriodicField(c.lattice, 1.0),
                                            front_options(c));
        const double r = fixed_point_residual(c.spec, f.speed, f.profile, c.w);
        out.pass = out.pass && r < 1e-4 && f.residual < 1e-4;
        d << name << " speed " << f.speed << " residual " << r << "; ";
    }
    out.detail = d.str();
    return out;
}

// 6. Displacement per step scales with the time step.
Outcome time_step_scaling() {
    const Case c = make_case({RecipeKind::cubic_bistable, {{"a", 0.25}}}, 1.0 / 16);
    const TimeStepReport r = refine_time_step(c.spec, c.lattice, phi_for(c, 0.85, 3.0),
                                              PeriodicField(c.lattice, 1.0), {1.0, 0.5, 0.25}, 0.01,
                                              front_options(c));
    bool pass = r.ratio_errors.size() == 2 && r.speed_spread < 0.02;
    Detail d;
    d << "ratio errors";
    for (double e : r.ratio_errors) {
        pass = pass && e < 0.05;
        d << " " << e;
    }
    d << ", speed spread " << r.speed_spread;
    return {pass, d.str()};
}

// 7. Principal eigenvalues of constant states.
Outcome eigenvalues() {
    double worst_const = 0.0, worst_shift = 0.0;
    const double a = 0.3;
    const ProblemSpec cubic = build_problem({RecipeKind::cubic_bistable, {{"a", a}}});
    const CellLattice lat = make_cell_lattice(cubic, 1.0 / 16);
    for (double q : {0.0, a, 1.0}) {
        const double exact = -3 * q * q + 2 * (1 + a) * q - a;
        worst_const = std::max(worst_const, std::abs(principal_eigenvalue(cubic, PeriodicField(lat, q)).lambda - exact));
    }
    const ProblemSpec quintic = build_problem({RecipeKind::tristable_quintic, {}});
    const CellLattice qlat = make_cell_lattice(quintic, 1.0 / 16);
    for (double q : {0.0, 0.2, 0.5, 0.7, 1.0})
        worst_const = std::max(worst_const, std::abs(principal_eigenvalue(quintic, PeriodicField(qlat, q)).lambda -
                                                     quintic.reaction_du({0, 0}, q)));
    const ProblemSpec f0 = build_problem({RecipeKind::f0_asymmetric, {{"eps", 0.05}}});
    const CellLattice flat = make_cell_lattice(f0, 1.0 / 16);
    const double l0 = principal_eigenvalue(f0, PeriodicField(flat, 0.0)).lambda;
    const double l1 = principal_eigenvalue(f0, PeriodicField(flat, 1.0)).lambda;
    for (double sigma : {-1.0, 0.5, 2.0})
        worst_shift = std::max(worst_shift, std::abs(principal_eigenvalue(cubic, PeriodicField(lat, 0.0), sigma).lambda -
                                                     (sigma * sigma - a)));
    Detail d;
    d << "max |lambda - f'(q)| " << worst_const << ", f0 at 0: " << l0 << ", at 1: " << l1
      << ", max shifted error " << worst_shift;
    return {worst_const < 1e-6 && std::abs(l0 + 1) < 1e-6 && std::abs(l1 + 1) < 1e-6 && worst_shift < 1e-5,
            d.str()};
}

// 8. Counter-propagation at every unstable state, and the KPP band speed.
Outcome counter_propagation() {
    CounterPropagationOptions o;
    o.spreading.t_max = 120.0;
    o.datum.half_width = 30.0;
    Outcome out{true, ""};
    Detail d;
    for (const auto& [name, recipe] :
         {std::pair{"cubic", ReactionRecipe{RecipeKind::cubic_bistable, {{"a", 0.3}}}},
          std::pair{"quintic", ReactionRecipe{RecipeKind::tristable_quintic, {}}}}) {
        const ProblemSpec spec = build_problem(recipe);
        const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
        const auto states = find_steady_states(spec, default_seeds(spec, lat));
        const AssumptionReport r = check_assumptions(spec, states, {1, 0}, true, o);
        out.pass = out.pass && !r.counter.empty() && r.counter_propagation_ok;
        for (const auto& cp : r.counter) {
            const bool margins = cp.c_bar.lower > 0.0 && cp.c_under.upper < 0.0;
            out.pass = out.pass && cp.pass && margins;
            d << name << " q=" << states[cp.state_index].profile.mean() << ": " << cp.c_bar.value << " > 0 > "
              << cp.c_under.value << "; ";
        }
    }
    const ProblemSpec kpp = build_problem({RecipeKind::fisher_kpp, {}});
    const CellLattice lat = make_cell_lattice(kpp, 1.0 / 16);
    CounterPropagationOptions k;
    k.spreading.t_max = 200.0;
    const SpeedEstimate s = upper_spreading_speed(kpp, PeriodicField(lat, 0.0), PeriodicField(lat, 1.0), {1, 0}, k);
    const double exact = oracle::kpp_dispersion_speed(kpp.reaction_du({0, 0}, 0.0));
    out.pass = out.pass && std::abs(s.value - exact) < 0.03 * exact;
    d << "KPP " << s.value << " vs " << exact;
    out.detail = d.str();
    return out;
}

// 9. Two-floor terrace of a tristable quintic.
Outcome terrace_ordering() {
    const ProblemSpec spec = build_problem({RecipeKind::tristable_quintic, {{"r1", 0.1}, {"scale", 10.0}}});
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    TerraceOptions o;
    o.front.weinberger.window_left = o.front.weinberger.window_right = 20.0;
    const TerraceReport r = build_terrace(spec, lat, {1, 0}, find_steady_states(spec, default_seeds(spec, lat)), o);
    bool pass = r.floors() == 2 && r.ordered && r.bracketing_ok && r.telescoping_error < 1e-9;
    Detail d;
    d << r.floors() << " floors";
    if (r.floors() == 2) {
        pass = pass && r.speeds[0].value <= r.speeds[1].value + r.speeds[0].radius() + r.speeds[1].radius();
        d << ", c1 " << r.speeds[0].value << " <= c2 " << r.speeds[1].value;
    }
    d << ", telescoping " << r.telescoping_error << ", bracketing " << (r.bracketing_ok ? "ok" : "violated");
    return {pass, d.str()};
}

// 10. Cross-layer speed of the layered medium against the a priori bound.
Outcome cross_layer_speed() {
    const DemoOptions o = DemoOptions::full();
    const DirectionalSpeeds s = measure_directional_speeds(10.0, 1.0, 0.05, o);
    const double bound = cross_layer_bound(10.0);
    Detail d;
    d << "c(e2) " << s.e2.value << " [" << s.e2.lower << ", " << s.e2.upper << "], bound " << bound;
    return {s.e2.upper <= bound && s.e2.lower > 0.0, d.str()};
}

// 11. Direction-dependent terrace in both presets.
Outcome asymmetric_demo() {
    Outcome out{true, ""};
    Detail d;
    for (const auto& [name, opts, limit] : {std::tuple{"smoke", DemoOptions::smoke(), 600.0},
                                            std::tuple{"full", DemoOptions::full(), 3600.0}}) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const DemoReport r = run_asymmetric_demo(opts);
            const double t = seconds_since(t0);
            bool positive = r.speeds_positive;
            for (const auto& dir : r.directions)
                for (double c : dir.terrace.front_speeds) positive = positive && c > 0.0;
            const bool ok = r.counts_differ && r.two_floor_ordered && r.single_front_spans && positive &&
                            t < limit;
            out.pass = out.pass && ok;
            d << name << ": M " << r.m.M << ", M' " << r.mprime.Mprime;
            for (const auto& dir : r.directions) d << ", " << dir.name << " J=" << dir.terrace.floors();
            d << ", two-floor " << r.two_floor_direction << (r.two_floor_ordered ? " ordered" : " unordered")
              << ", " << t << " s; ";
        } catch (const std::exception& e) {
            out.pass = false;
            d << name << ": " << e.what() << "; ";
        }
    }
    out.detail = d.str();
    return out;
}

// 12. Energy decay and stationarity of a relaxed periodic solution.
Outcome energy_diagnostic() {
    const ProblemSpec spec = build_problem({RecipeKind::periodic_cubic, {}});
    const CellLattice lat = make_cell_lattice(spec, 1.0 / 16);
    const Domain dom = Domain::cell(spec, lat);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    FieldState s{std::vector<double>(dom.size()), 0.0};
    for (auto& v : s.values) v = U(rng);
    const double dt = 0.25;
    double E = energy(spec, PeriodicField(lat, s.values)), worst_rise = -1e300;
    for (int k = 0; k < 80; ++k) {
        s = evolve(spec, dom, s, dt);
        const double En = energy(spec, PeriodicField(lat, s.values));
        worst_rise = std::max(worst_rise, (En - E) / dt);
        E = En;
    }
    // A fixed point of the time-1 map reached by the solver is stationary at all times.
    const PeriodicField q = relax(spec, PeriodicField(lat, s.values));
    FieldState w{q.values(), 0.0};
    double drift = 0.0;
    for (int k = 0; k < 8; ++k) {
        w = evolve(spec, dom, w, 0.125);
        for (std::size_t j = 0; j < w.values.size(); ++j)
            drift = std::max(drift, std::abs(w.values[j] - q.values()[j]));
    }
    Detail d;
    d << "max energy rise per unit time " << worst_rise << ", drift of the relaxed state " << drift;
    return {worst_rise <= 1e-8 && drift < 1e-6, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"exact cubic speed", exact_speed},
        {"balanced cubic has zero speed", zero_speed},
        {"speed independent of the initializer", initializer_independence},
        {"monotone iterates and shift inequality", monotonicity_suite},
        {"fixed-point residual", fixed_point_residual_check},
        {"time-step scaling", time_step_scaling},
        {"principal eigenvalues", eigenvalues},
        {"counter-propagation", counter_propagation},
        {"terrace ordering", terrace_ordering},
        {"cross-layer speed bound", cross_layer_speed},
        {"direction-dependent terrace", asymmetric_demo},
        {"energy diagnostic", energy_diagnostic},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k + 1);
        if (!selected.empty() && !selected.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("criterion %2d %s: %s (%.1f s) %s\n", id, o.pass ? "PASS" : "FAIL",
                    criteria[k].first.c_str(), seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
