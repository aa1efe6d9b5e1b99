#include "frontlab/assumptions.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <utility>

#include "frontlab/errors.hpp"
#include "frontlab/terrace.hpp"

namespace frontlab {

namespace {

PeriodicField negated(const PeriodicField& f) {
    PeriodicField out = f;
    for (double& v : out.values()) v = -v;
    return out;
}

double min_gap(const PeriodicField& a, const PeriodicField& b) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < a.values().size(); ++k) g = std::min(g, b.values()[k] - a.values()[k]);
    return g;
}

SpeedEstimate negate(const SpeedEstimate& s) {
    SpeedEstimate out = s;
    out.value = -s.value;
    out.lower = -s.upper;
    out.upper = -s.lower;
    return out;
}

// The datum q + delta behind / q ahead on the band [q, p_plus].
InitialCondition band_datum(const ProblemSpec& band, const Frame& frame, const PeriodicField& q,
                            const PeriodicField& p_plus, const CounterPropagationOptions& options) {
    const double delta = options.delta_fraction * min_gap(q, p_plus);
    return heaviside_datum(band, frame, q, p_plus, delta, options.datum);
}

}  // namespace

std::string to_string(ProblemClass c) {
    switch (c) {
        case ProblemClass::bistable: return "bistable";
        case ProblemClass::multistable: return "multistable";
        case ProblemClass::indeterminate: return "indeterminate";
    }
    return "unknown";
}

SpeedEstimate upper_spreading_speed(const ProblemSpec& spec, const PeriodicField& q,
                                    const PeriodicField& p_plus, Direction direction,
                                    const CounterPropagationOptions& options) {
    const ProblemSpec band = clamp_to_interval(spec, q, p_plus);
    const Frame frame = make_frame(band, direction, options.h);
    const InitialCondition datum = band_datum(band, frame, q, p_plus, options);
    const double level = 0.5 * (q.mean() + p_plus.mean());
    return measure_spreading_speed(band, datum, level, options.spreading).estimate;
}

CounterPropagation counter_propagation_check(const ProblemSpec& spec,
                                             const std::vector<SteadyState>& states, int index,
                                             Direction direction,
                                             const CounterPropagationOptions& options) {
    if (index < 0 || index >= static_cast<int>(states.size()))
        throw ParameterError("state index out of range");
    const PeriodicField& q = states[index].profile;
    const PeriodicField* above = nullptr;
    const PeriodicField* below = nullptr;
    for (const auto& s : states) {
        if (s.stability != Stability::linearly_stable) continue;
        const PeriodicField& p = s.profile;
        if (min_gap(q, p) > 0.0 && (!above || p.mean() < above->mean())) above = &p;
        if (min_gap(p, q) > 0.0 && (!below || p.mean() > below->mean())) below = &p;
    }
    if (!above) throw StructuralError("no stable state lies above the intermediate state");
    if (!below) throw StructuralError("no stable state lies below the intermediate state");

    CounterPropagation out;
    out.state_index = index;
    out.c_bar = upper_spreading_speed(spec, q, *above, direction, options);

    // Lower band seen through u -> -u, propagating in direction -e.
    const ProblemSpec lower_band = clamp_to_interval(spec, *below, q);
    const ProblemSpec reflected = reflect_problem(lower_band);
    const Direction back{-direction.m, -direction.n};
    const PeriodicField rq = negated(q), rp = negated(*below);
    const Frame back_frame = make_frame(reflected, back, options.h);
    const InitialCondition rdatum = band_datum(reflected, back_frame, rq, rp, options);
    const double rlevel = 0.5 * (rq.mean() + rp.mean());
    out.c_under =
        negate(measure_spreading_speed(reflected, rdatum, rlevel, options.spreading).estimate);

    if (options.cross_check) {
        // Same datum mapped back: q behind, q - delta ahead; its front moves backwards.
        const Frame frame = make_frame(lower_band, direction, options.h);
        const InitialCondition datum = reflect_datum(rdatum, frame);
        SpreadingOptions so = options.spreading;
        std::swap(so.refill_left, so.refill_right);
        out.c_under_direct = measure_spreading_speed(lower_band, datum, -rlevel, so).estimate;
        const double slack = out.c_under.radius() + out.c_under_direct->radius() + 0.02;
        out.cross_check_ok = std::abs(out.c_under_direct->value - out.c_under.value) <= slack;
    }
    out.pass = out.c_bar.value - out.c_under.value > out.c_bar.radius() + out.c_under.radius();
    return out;
}

AssumptionReport check_assumptions(const ProblemSpec& spec, const std::vector<SteadyState>& states,
                                   Direction direction, bool audit,
                                   const CounterPropagationOptions& options) {
    AssumptionReport rep;
    if (states.empty()) {
        rep.notes.push_back("no steady states supplied");
        return rep;
    }
    std::vector<int> order(states.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return states[a].profile.mean() < states[b].profile.mean();
    });
    for (int k : order) {
        switch (states[k].stability) {
            case Stability::linearly_stable: rep.stable.push_back(k); break;
            case Stability::linearly_unstable: rep.unstable.push_back(k); break;
            case Stability::marginal: rep.marginal.push_back(k); break;
        }
    }

    bool determinate = true;
    if (!rep.marginal.empty()) {
        rep.notes.push_back(std::to_string(rep.marginal.size()) +
                            " state(s) are marginal; linear stability cannot be certified");
        determinate = false;
    }
    for (int k : order)
        if (!states[k].polished) {
            rep.notes.push_back("state " + std::to_string(k) + " is not a polished steady state");
            determinate = false;
        }
    if (states[order.front()].stability != Stability::linearly_stable ||
        states[order.back()].stability != Stability::linearly_stable) {
        rep.notes.push_back("the extremal states are not both linearly stable");
        determinate = false;
    }
    if (rep.stable.size() < 2) determinate = false;
    if (determinate)
        rep.label = rep.stable.size() == 2 ? ProblemClass::bistable : ProblemClass::multistable;

    if (audit) {
        for (int k : rep.unstable) {
            try {
                CounterPropagation cp = counter_propagation_check(spec, states, k, direction, options);
                if (!cp.pass) rep.counter_propagation_ok = false;
                rep.counter.push_back(cp);
            } catch (const StructuralError& e) {
                rep.counter_propagation_ok = false;
                rep.notes.push_back("state " + std::to_string(k) + ": " + e.what());
            }
        }
    }
    return rep;
}

}  // namespace frontlab
