#include "frontlab/terrace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frontlab/errors.hpp"
#include "frontlab/weinberger.hpp"

namespace frontlab {

namespace {

// min over the lattice of (b - a).
double min_gap(const PeriodicField& a, const PeriodicField& b) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < a.values().size(); ++k) g = std::min(g, b.values()[k] - a.values()[k]);
    return g;
}

PeriodicField affine(const PeriodicField& floor, const PeriodicField& ceiling, double fraction) {
    PeriodicField out = ceiling;
    for (std::size_t k = 0; k < out.values().size(); ++k)
        out.values()[k] -= fraction * (ceiling.values()[k] - floor.values()[k]);
    return out;
}

}  // namespace

ProblemSpec clamp_to_interval(const ProblemSpec& spec, const PeriodicField& floor,
                              const PeriodicField& ceiling) {
    if (floor.values().size() != ceiling.values().size())
        throw ParameterError("clamp states live on different lattices");
    if (!(min_gap(floor, ceiling) > 0.0))
        throw ParameterError("clamp floor must lie strictly below the ceiling");
    ProblemSpec out = spec;
    out.name = spec.name + "_clamped";
    const auto f = spec.reaction;
    const auto fu = spec.reaction_du;
    if (floor.min() == floor.max() && ceiling.min() == ceiling.max()) {
        // Constant band ends: skip the interpolation in the inner loop.
        const double lo = floor.min(), hi = ceiling.max();
        out.reaction = [f, fu, lo, hi](const Vec2& x, double u) {
            if (u < lo) return f(x, lo) + fu(x, lo) * (u - lo);
            if (u > hi) return f(x, hi) + fu(x, hi) * (u - hi);
            return f(x, u);
        };
        out.reaction_du = [fu, lo, hi](const Vec2& x, double u) { return fu(x, std::clamp(u, lo, hi)); };
    } else {
        out.reaction = [f, fu, floor, ceiling](const Vec2& x, double u) {
            const double lo = floor.at(x), hi = ceiling.at(x);
            if (u < lo) return f(x, lo) + fu(x, lo) * (u - lo);
            if (u > hi) return f(x, hi) + fu(x, hi) * (u - hi);
            return f(x, u);
        };
        out.reaction_du = [fu, floor, ceiling](const Vec2& x, double u) {
            return fu(x, std::clamp(u, floor.at(x), ceiling.at(x)));
        };
    }
    out.u_floor = floor.min();
    out.u_ceiling = ceiling.max();

    // Lipschitz bound over the band, sampled on the lattice.
    const CellLattice& lat = floor.lattice();
    double lip = 0.0;
    for (int j = 0; j < lat.n[1]; ++j)
        for (int i = 0; i < lat.n[0]; ++i) {
            const Vec2 x = lat.point(i, j);
            const double lo = floor(i, j), hi = ceiling(i, j);
            for (int k = 0; k <= 64; ++k) lip = std::max(lip, std::abs(fu(x, lo + (hi - lo) * k / 64.0)));
        }
    out.lipschitz = lip;
    return out;
}

TerraceReport build_terrace(const ProblemSpec& spec, const CellLattice& lattice, Direction direction,
                            const std::vector<SteadyState>& catalog, const TerraceOptions& options) {
    std::vector<const SteadyState*> stable;
    for (const auto& s : catalog)
        if (s.stability == Stability::linearly_stable) stable.push_back(&s);
    if (stable.size() < 2) throw StructuralError("terrace needs at least two stable states");
    auto by_mean = [](const SteadyState* a, const SteadyState* b) {
        return a->profile.mean() < b->profile.mean();
    };
    const SteadyState& bottom = **std::min_element(stable.begin(), stable.end(), by_mean);
    const SteadyState& top = **std::max_element(stable.begin(), stable.end(), by_mean);

    TerraceReport rep;
    rep.direction = direction;
    rep.states.push_back(top);
    const Frame frame = make_frame(spec, direction, options.h);
    while (true) {
        const PeriodicField& ceiling = rep.states.back().profile;
        if (rep.floors() >= options.max_floors)
            throw TerraceError("terrace exceeded " + std::to_string(options.max_floors) + " floors", rep);
        try {
            const ProblemSpec band = clamp_to_interval(spec, bottom.profile, ceiling);
            ProfileGrid phi;
            double level = 0.0;
            bool have_phi = false;
            for (double fr : options.level_fractions) {
                try {
                    const PeriodicField mid = affine(bottom.profile, ceiling, fr);
                    phi = make_phi(band, frame, bottom.profile, mid, ceiling, options.phi_width,
                                   options.front.weinberger);
                    level = mid.mean();
                    have_phi = true;
                    break;
                } catch (const InitializerError&) {
                }
            }
            if (!have_phi) throw InitializerError("no initializer level relaxes to the current ceiling");
            SpeedEstimate cs;
            if (options.stage_speed == StageSpeed::bisection) {
                cs = find_cstar(band, phi, options.tol, options.front.weinberger).estimate;
            } else {
                const InitialCondition datum =
                    heaviside_datum(band, frame, bottom.profile, ceiling,
                                    options.datum_fraction * min_gap(bottom.profile, ceiling), options.datum);
                cs = measure_spreading_speed(band, datum, level, options.spreading).estimate;
            }
            FrontResult f = extract_front(band, lattice, cs, phi, ceiling, options.front);
            rep.speeds.push_back(cs);
            rep.front_speeds.push_back(f.speed);
            rep.residuals.push_back(f.residual);
            if (!(f.residual < options.residual_tol)) rep.residuals_ok = false;
            if (!f.settled)
                rep.notes.push_back("front " + std::to_string(rep.floors() + 1) +
                                    " is the physical pulsating front; the grid operator did not settle on it"
                                    " (residual " + std::to_string(f.residual) + ")");
            if (f.zero_speed)
                rep.notes.push_back("front " + std::to_string(rep.floors() + 1) +
                                    " has zero speed within resolution; its grid profile is approximate");
            rep.fronts.push_back(std::move(f.profile));
            if (sup_distance(f.p_star.profile, ceiling) < options.floor_tol)
                throw ExtractionError("front did not descend below its ceiling");
            const bool done = sup_distance(f.p_star.profile, bottom.profile) < options.floor_tol;
            rep.states.push_back(done ? bottom : f.p_star);
            if (done) break;
        } catch (const TerraceError&) {
            throw;
        } catch (const std::exception& e) {
            throw TerraceError(std::string("terrace stage ") + std::to_string(rep.floors() + 1) +
                                   " failed: " + e.what(),
                               rep);
        }
    }

    // Ordering: c_1 <= c_2 <= ... within the combined uncertainty.
    for (int j = 0; j + 1 < rep.floors(); ++j) {
        const SpeedEstimate& a = rep.speeds[j];
        const SpeedEstimate& b = rep.speeds[j + 1];
        const double slack = a.radius() + b.radius();
        rep.equal_within_resolution.push_back(std::abs(a.value - b.value) <= slack);
        if (a.value > b.value + slack) rep.ordered = false;
    }

    // Telescoping sum of the steps between consecutive states.
    const auto& q0 = rep.states.front().profile.values();
    const auto& qJ = rep.states.back().profile.values();
    for (std::size_t k = 0; k < q0.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = 1; j < rep.states.size(); ++j)
            sum += rep.states[j - 1].profile.values()[k] - rep.states[j].profile.values()[k];
        rep.telescoping_error = std::max(rep.telescoping_error, std::abs(sum - (q0[k] - qJ[k])));
    }

    // No stable catalog state strictly between consecutive states.
    for (std::size_t j = 1; j < rep.states.size(); ++j) {
        const PeriodicField& hi = rep.states[j - 1].profile;
        const PeriodicField& lo = rep.states[j].profile;
        for (const SteadyState* s : stable) {
            if (sup_distance(s->profile, hi) < 1e-6 || sup_distance(s->profile, lo) < 1e-6) continue;
            if (min_gap(lo, s->profile) > 0.0 && min_gap(s->profile, hi) > 0.0) {
                rep.bracketing_ok = false;
                rep.notes.push_back("stable state with mean " + std::to_string(s->profile.mean()) +
                                    " lies between terrace states " + std::to_string(j - 1) + " and " +
                                    std::to_string(j));
            }
        }
    }
    return rep;
}

}  // namespace frontlab
