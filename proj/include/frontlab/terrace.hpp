#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "frontlab/front.hpp"
#include "frontlab/geometry.hpp"
#include "frontlab/model.hpp"
#include "frontlab/speed.hpp"
#include "frontlab/spreading.hpp"
#include "frontlab/steady.hpp"

namespace frontlab {

// Reaction restricted to the band [floor, ceiling]: unchanged inside, continued
// linearly (C1) below the floor and above the ceiling, so both stay steady
// states and solutions started inside the band stay inside.
// Throws ParameterError unless floor < ceiling on the lattice.
ProblemSpec clamp_to_interval(const ProblemSpec& spec, const PeriodicField& floor,
                              const PeriodicField& ceiling);

// How the critical speed of each stage is estimated before extraction.
enum class StageSpeed {
    // Bisection on the evolution operator.
    bisection,
    // Spreading of a step datum from ceiling to floor, tracked at the initializer level.
    spreading,
};

struct TerraceOptions {
    FrontOptions front;
    double h = 1.0 / 16.0;
    StageSpeed stage_speed = StageSpeed::bisection;
    // Bisection tolerance for each critical speed.
    double tol = 0.01;
    // Used when stage_speed is spreading.
    SpreadingOptions spreading;
    DatumOptions datum;
    // Datum height behind the step as a fraction of the smallest floor-ceiling gap.
    double datum_fraction = 0.95;
    double phi_width = 3.0;
    // Initializer levels tried in turn: ceiling - fraction * (ceiling - floor).
    std::vector<double> level_fractions{0.15, 0.08, 0.04};
    int max_floors = 8;
    // p* counts as the floor when closer than this in sup norm.
    double floor_tol = 1e-5;
    double residual_tol = 1e-4;
};

struct TerraceReport {
    Direction direction;
    // q_0 = top state down to q_J = bottom state.
    std::vector<SteadyState> states;
    std::vector<ProfileGrid> fronts;
    // Critical speed estimates, one per front (top first).
    std::vector<SpeedEstimate> speeds;
    // Speeds at which the extracted profiles are fixed points.
    std::vector<double> front_speeds;
    std::vector<double> residuals;
    // Per consecutive pair of fronts: speeds agree within the combined uncertainty.
    std::vector<bool> equal_within_resolution;
    bool ordered = true;
    bool residuals_ok = true;
    // No stable catalog state lies strictly between consecutive states.
    bool bracketing_ok = true;
    // max |sum_j (q_{j-1} - q_j) - (q_0 - q_J)|.
    double telescoping_error = 0.0;
    std::vector<std::string> notes;

    int floors() const { return static_cast<int>(fronts.size()); }
};

// Raised when a stage fails; carries the terrace built so far.
class TerraceError : public std::runtime_error {
public:
    TerraceError(const std::string& what, TerraceReport partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const TerraceReport& partial() const noexcept { return partial_; }

private:
    TerraceReport partial_;
};

// Extracts the top front on [floor, ceiling], lowers the ceiling to its p* and
// repeats until p* reaches the floor. `catalog` (stable and unstable states of
// the full problem) is used for the bracketing check; top and bottom are the
// extremal stable states of the catalog.
TerraceReport build_terrace(const ProblemSpec& spec, const CellLattice& lattice, Direction direction,
                            const std::vector<SteadyState>& catalog,
                            const TerraceOptions& options = {});

}  // namespace frontlab
