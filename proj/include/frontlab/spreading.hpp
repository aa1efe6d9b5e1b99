#pragma once

#include <array>
#include <string>
#include <vector>

#include "frontlab/geometry.hpp"
#include "frontlab/model.hpp"
#include "frontlab/speed.hpp"
#include "frontlab/stepper.hpp"

namespace frontlab {

// Initial condition on a strip aligned with a frame. s_min is a multiple of
// the longitudinal supercell period so node i sits on site i mod n_cell_s.
struct InitialCondition {
    Frame frame;
    double s_min = 0.0;
    int n_s = 0;
    std::vector<double> values;  // index j * n_s + i
    bool degenerate = false;
};

struct DatumOptions {
    // Half-width of the window in supercell periods (or unit lengths when the
    // longitudinal axis is collapsed).
    double half_width = 40.0;
};

// H(y, z) = lower + delta for z < -sqrt(N) * period, lower otherwise.
// Throws ParameterError unless delta >= 0 and lower + delta < upper on the lattice;
// delta = 0 yields a flagged degenerate datum.
InitialCondition heaviside_datum(const ProblemSpec& spec, const Frame& frame,
                                 const PeriodicField& lower, const PeriodicField& upper,
                                 double delta, const DatumOptions& options = {});

// The u -> -u, s -> -s image of a datum (a datum for the reflected problem in direction -e).
InitialCondition reflect_datum(const InitialCondition& datum, const Frame& reflected_frame);

struct SpreadingOptions {
    double t_max = 200.0;
    double sample_dt = 1.0;
    double fit_fraction = 0.5;
    // Cells uncovered by recentring are refilled from the datum on these sides
    // (the side the front moves into) and copied from the window edge otherwise.
    bool refill_left = false;
    bool refill_right = true;
    StepperOptions stepper;
};

struct SpreadingResult {
    SpeedEstimate estimate;
    // Samples (t, X(t), level).
    std::vector<std::array<double, 3>> trajectory;
};

// Evolves the Cauchy problem on a recentred window and fits the position where
// the cell-averaged profile crosses `level`. Samples before the first crossing
// are skipped. Throws MeasurementError if the level is not crossed by the start
// of the fit window or stops being crossed later, and TruncationError if the
// front escapes the window.
SpreadingResult measure_spreading_speed(const ProblemSpec& spec, const InitialCondition& datum,
                                        double level, const SpreadingOptions& options = {});

void write_trajectory_csv(const std::string& path, const SpreadingResult& result);

}  // namespace frontlab
