#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frontlab/geometry.hpp"
#include "frontlab/model.hpp"
#include "frontlab/speed.hpp"
#include "frontlab/spreading.hpp"
#include "frontlab/steady.hpp"

namespace frontlab {

struct CounterPropagationOptions {
    // Longitudinal grid spacing of the spreading runs.
    double h = 1.0 / 16.0;
    // Datum bump delta = delta_fraction * min over the cell of the gap to the neighbour.
    double delta_fraction = 0.25;
    SpreadingOptions spreading;
    DatumOptions datum;
    // Also measure the lower speed directly on the unreflected problem.
    bool cross_check = true;
};

// Spreading speed of the band [q, p_plus] from the datum q + delta behind the
// origin, q ahead of it, measured at the mid level between the cell means.
SpeedEstimate upper_spreading_speed(const ProblemSpec& spec, const PeriodicField& q,
                                    const PeriodicField& p_plus, Direction direction,
                                    const CounterPropagationOptions& options = {});

struct CounterPropagation {
    int state_index = -1;
    SpeedEstimate c_bar;
    SpeedEstimate c_under;
    std::optional<SpeedEstimate> c_under_direct;
    // c_bar exceeds c_under by more than the two uncertainty radii.
    bool pass = false;
    bool cross_check_ok = true;
};

// c_bar: spreading speed of [q, p_plus]. c_under: minus the spreading speed of
// the u -> -u image of [p_minus, q] in direction -e. p_plus (p_minus) is the
// lowest (highest) stable state lying above (below) q everywhere; a missing
// neighbour throws StructuralError.
CounterPropagation counter_propagation_check(const ProblemSpec& spec,
                                             const std::vector<SteadyState>& states, int index,
                                             Direction direction,
                                             const CounterPropagationOptions& options = {});

enum class ProblemClass { bistable, multistable, indeterminate };

std::string to_string(ProblemClass c);

struct AssumptionReport {
    ProblemClass label = ProblemClass::indeterminate;
    std::vector<int> stable;
    std::vector<int> unstable;
    std::vector<int> marginal;
    std::vector<CounterPropagation> counter;
    // Every audited intermediate state passed the counter-propagation check.
    bool counter_propagation_ok = true;
    std::vector<std::string> notes;
};

// Labels the problem from the stability of its states (sorted by cell mean) and,
// when `audit` is set, runs the counter-propagation check on each unstable state
// lying between two stable ones.
AssumptionReport check_assumptions(const ProblemSpec& spec, const std::vector<SteadyState>& states,
                                   Direction direction = {1, 0}, bool audit = true,
                                   const CounterPropagationOptions& options = {});

}  // namespace frontlab
