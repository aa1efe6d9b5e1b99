#include "frontlab/asym_demo.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "frontlab/errors.hpp"
#include "frontlab/spreading.hpp"
#include "frontlab/weinberger.hpp"

namespace frontlab {

namespace {

constexpr Direction kAlong{1, 0};
constexpr Direction kAcross{0, 1};

WeinbergerOptions windowed(const DemoOptions& o, double half_width) {
    WeinbergerOptions w = o.front.weinberger;
    w.window_left = half_width;
    w.window_right = half_width;
    return w;
}

// Bisection speed of the band [0, 1] of `spec` from a smoothstep initializer.
SpeedEstimate bisection_speed(const ProblemSpec& spec, Direction dir, double half_width,
                              const DemoOptions& o) {
    const WeinbergerOptions w = windowed(o, half_width);
    const Frame frame = make_frame(spec, dir, o.h);
    const CellLattice lat = make_cell_lattice(spec, o.h);
    const ProfileGrid phi = make_phi(spec, frame, PeriodicField(lat, 0.0), PeriodicField(lat, 0.85),
                                     PeriodicField(lat, 1.0), 3.0, w);
    return find_cstar(spec, phi, o.tol, w).estimate;
}

DatumOptions datum_options(const ProblemSpec& spec, Direction dir, const DemoOptions& o) {
    DatumOptions d;
    // Unit lengths along the invariant axis, layer periods across.
    d.half_width = dir.m != 0 ? 2.0 * o.window_e1 : std::max(2.0, o.window_e2 / spec.period[1] * 2.0);
    return d;
}

SpreadingOptions spreading_options(Direction dir, const DemoOptions& o) {
    SpreadingOptions s;
    // A front crossing the layers pulsates with the layer period; fit over several periods.
    s.t_max = dir.m != 0 ? o.spreading_t_max : 4.0 * o.spreading_t_max;
    s.sample_dt = dir.m != 0 ? 1.0 : 5.0;
    return s;
}

SpeedEstimate spreading_speed(const ProblemSpec& spec, Direction dir, const DemoOptions& o) {
    const Frame frame = make_frame(spec, dir, o.h);
    const CellLattice lat = make_cell_lattice(spec, o.h);
    const InitialCondition datum = heaviside_datum(spec, frame, PeriodicField(lat, 0.0), PeriodicField(lat, 1.0),
                                                   0.95, datum_options(spec, dir, o));
    return measure_spreading_speed(spec, datum, 0.85, spreading_options(dir, o)).estimate;
}

SpeedEstimate layered_speed(const ProblemSpec& spec, Direction dir, double half_width, StageSpeed method,
                            const DemoOptions& o) {
    return method == StageSpeed::bisection ? bisection_speed(spec, dir, half_width, o)
                                           : spreading_speed(spec, dir, o);
}

bool disagree(const SpeedEstimate& a, const SpeedEstimate& b, double slack) {
    return std::abs(a.value - b.value) > a.radius() + b.radius() + slack;
}

std::vector<std::pair<double, double>> along_trace(const std::vector<DirectionalSpeeds>& t) {
    std::vector<std::pair<double, double>> out;
    for (const auto& s : t) out.emplace_back(s.M, s.e1.value);
    return out;
}

bool near(double a, double b) { return std::abs(a - b) < 1e-3; }

}  // namespace

std::string to_string(SeparationRule r) {
    switch (r) {
        case SeparationRule::analytic_bound: return "analytic_bound";
        case SeparationRule::measured: return "measured";
    }
    return "unknown";
}

DemoOptions DemoOptions::smoke() {
    DemoOptions o;
    o.h = 0.5;
    return o;
}

DemoOptions DemoOptions::full() {
    DemoOptions o;
    o.h = 0.25;
    return o;
}

double cross_layer_bound(double L) {
    const double tau_L = 0.5 * (L - std::log(4.0));
    return 2.0 * L / tau_L;
}

DirectionalSpeeds measure_directional_speeds(double L, double M, double eps,
                                             const DemoOptions& options) {
    const ProblemSpec spec =
        build_problem({RecipeKind::f1_heterogeneous, {{"L", L}, {"M", M}, {"eps", eps}}});
    DirectionalSpeeds out;
    out.M = M;
    const StageSpeed primary = options.speed_method;
    out.e1 = layered_speed(spec, kAlong, options.window_e1, primary, options);
    out.e2 = layered_speed(spec, kAcross, options.window_e2, primary, options);
    if (options.cross_check) {
        const StageSpeed other =
            primary == StageSpeed::bisection ? StageSpeed::spreading : StageSpeed::bisection;
        out.e1_check = layered_speed(spec, kAlong, options.window_e1, other, options);
        out.e2_check = layered_speed(spec, kAcross, options.window_e2, other, options);
        out.e1_disagrees = disagree(out.e1, *out.e1_check, options.tol);
        out.e2_disagrees = disagree(out.e2, *out.e2_check, options.tol);
    }
    return out;
}

MTuning tune_M(double L, double target_gap, const DemoOptions& options) {
    if (!(options.M_start > 0.0)) throw ParameterError("tune_M requires M_start > 0");
    MTuning out;
    for (double M = options.M_start; M <= options.M_max; M *= 2.0) {
        DirectionalSpeeds s = measure_directional_speeds(L, M, options.eps, options);
        if (!out.trace.empty()) {
            const SpeedEstimate& prev = out.trace.back().e1;
            if (s.e1.value < prev.value - prev.radius() - s.e1.radius()) out.monotone = false;
        }
        out.trace.push_back(s);
        const bool met = options.rule == SeparationRule::analytic_bound
                             ? s.e1.lower >= (out.threshold = cross_layer_bound(L) + target_gap)
                             : s.e1.lower >= (out.threshold = (1.0 + target_gap) * s.e2.upper);
        if (met) {
            out.M = M;
            out.speeds = s;
            return out;
        }
    }
    throw TuningError("no M up to " + std::to_string(options.M_max) + " meets the " +
                          to_string(options.rule) + " separation rule",
                      along_trace(out.trace));
}

double f2_front_speed(double Mprime, double eps, const DemoOptions& options) {
    const ProblemSpec spec =
        build_problem({RecipeKind::f2_homogeneous, {{"Mprime", Mprime}, {"eps", eps}}});
    const CellLattice lat = make_cell_lattice(spec, options.h);
    const Frame frame = make_frame(spec, kAlong, options.h);
    FrontOptions fo = options.front;
    fo.weinberger.window_left = fo.weinberger.window_right = 20.0;
    const PeriodicField ceiling(lat, 1.0);
    const ProfileGrid phi = make_phi(spec, frame, PeriodicField(lat, 0.0), PeriodicField(lat, 0.85),
                                     ceiling, 3.0, fo.weinberger);
    const SpeedEstimate cs = find_cstar(spec, phi, options.tol, fo.weinberger).estimate;
    try {
        const FrontResult f = extract_front(spec, lat, cs, phi, ceiling, fo);
        return f.zero_speed ? cs.value : f.speed;
    } catch (const ExtractionError&) {
        return cs.value;
    } catch (const CaptureError&) {
        return cs.value;
    }
}

MprimeTuning tune_Mprime(double c_target, const DemoOptions& options) {
    if (!(c_target > 0.0)) throw ParameterError("tune_Mprime requires a positive target speed");
    MprimeTuning out;
    auto eval = [&](double mp) {
        const double s = f2_front_speed(mp, options.eps, options);
        out.trace.emplace_back(mp, s);
        return s;
    };
    double lo = 0.0, s_lo = eval(lo);
    double hi = 1.0, s_hi = eval(hi);
    while (s_hi < c_target) {
        lo = hi;
        s_lo = s_hi;
        hi *= 2.0;
        if (hi > options.Mprime_max)
            throw TuningError("f2 front speed stays below " + std::to_string(c_target) +
                                  " for M' up to " + std::to_string(options.Mprime_max),
                              out.trace);
        s_hi = eval(hi);
    }
    double best = std::abs(s_lo - c_target) < std::abs(s_hi - c_target) ? lo : hi;
    double best_s = best == lo ? s_lo : s_hi;
    for (int it = 0; it < 40 && std::abs(best_s - c_target) > options.Mprime_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double s = eval(mid);
        if (std::abs(s - c_target) < std::abs(best_s - c_target)) {
            best = mid;
            best_s = s;
        }
        (s < c_target ? lo : hi) = mid;
    }
    out.Mprime = best;
    out.speed = best_s;
    auto sorted = out.trace;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 1; k < sorted.size(); ++k)
        if (sorted[k].second < sorted[k - 1].second - 0.5 * options.tol) out.monotone = false;
    return out;
}

DemoReport run_asymmetric_demo(const DemoOptions& options) {
    DemoReport rep;
    rep.L = options.L;
    rep.eps = options.eps;
    rep.bound = cross_layer_bound(options.L);
    auto enter = [&](const std::string& stage) {
        rep.stage = stage;
        if (options.progress) options.progress(stage);
    };
    enter("tune_M");
    try {
        rep.S = compute_S(make_f0(options.eps));
        rep.m = tune_M(options.L, options.gap, options);
    } catch (const std::exception& e) {
        throw DemoError(std::string("tuning M failed: ") + e.what(), rep);
    }
    const SpeedEstimate& c1 = rep.m.speeds.e1;
    const SpeedEstimate& c2 = rep.m.speeds.e2;
    rep.bound_holds = c2.value <= rep.bound;
    rep.speeds_positive = c1.lower > 0.0 && c2.lower > 0.0;
    if (rep.m.speeds.e1_disagrees) rep.notes.push_back("the two speed estimators disagree along the layers");
    if (rep.m.speeds.e2_disagrees) rep.notes.push_back("the two speed estimators disagree across the layers");
    rep.c = std::sqrt(c1.value * c2.value);
    if (!(c2.upper < rep.c && rep.c < c1.lower))
        rep.notes.push_back("target speed is not separated from both layered speeds");

    enter("tune_Mprime");
    try {
        rep.mprime = tune_Mprime(rep.c, options);
    } catch (const std::exception& e) {
        throw DemoError(std::string("tuning M' failed: ") + e.what(), rep);
    }
    if (!rep.mprime.monotone) rep.notes.push_back("f2 front speed is not monotone in M'");

    enter("catalog");
    const ProblemSpec spec =
        build_problem({RecipeKind::stacked, {{"L", options.L},
                                             {"M", rep.m.M},
                                             {"Mprime", rep.mprime.Mprime},
                                             {"eps", options.eps}}});
    const CellLattice lat = make_cell_lattice(spec, options.h);
    rep.catalog = find_steady_states(spec, default_seeds(spec, lat));
    rep.assumptions = check_assumptions(spec, rep.catalog, kAlong, false);
    if (rep.assumptions.stable.size() < 3)
        throw DemoError("the stacked problem has fewer than three stable states", rep);

    for (const auto& [name, dir, half] :
         {std::tuple{"e1", kAlong, options.window_e1}, std::tuple{"e2", kAcross, options.window_e2}}) {
        enter(std::string("terrace_") + name);
        TerraceOptions t;
        t.h = options.h;
        t.tol = options.tol;
        t.stage_speed = options.speed_method;
        t.datum = datum_options(spec, dir, options);
        t.spreading = spreading_options(dir, options);
        t.front = options.front;
        t.front.weinberger = windowed(options, half);
        DirectionOutcome d{name, dir, {}};
        try {
            d.terrace = build_terrace(spec, lat, dir, rep.catalog, t);
        } catch (const TerraceError& e) {
            d.terrace = e.partial();
            rep.notes.push_back(std::string("terrace along ") + name + " failed: " + e.what());
        }
        rep.directions.push_back(std::move(d));
    }

    const TerraceReport& a = rep.directions[0].terrace;
    const TerraceReport& b = rep.directions[1].terrace;
    rep.counts_differ = a.floors() != b.floors();
    for (const auto& d : rep.directions) {
        const TerraceReport& t = d.terrace;
        if (t.floors() == 2 && t.states.size() == 3) {
            rep.two_floor_direction = d.name;
            rep.two_floor_ordered = t.ordered && near(t.states[0].profile.mean(), 2.0) &&
                                    near(t.states[1].profile.mean(), 1.0) &&
                                    near(t.states[2].profile.mean(), 0.0);
        }
    }
    for (const auto& d : rep.directions) {
        const TerraceReport& t = d.terrace;
        if (d.name != rep.two_floor_direction && t.floors() == 1 && t.states.size() == 2)
            rep.single_front_spans =
                near(t.states[0].profile.mean(), 2.0) && near(t.states[1].profile.mean(), 0.0);
    }
    for (const auto& d : rep.directions)
        rep.notes.push_back(std::to_string(d.terrace.floors()) + " front(s) along " + d.name);
    enter("complete");
    return rep;
}

}  // namespace frontlab
