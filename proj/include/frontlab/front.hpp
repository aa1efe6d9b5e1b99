#pragma once

#include <string>
#include <vector>

#include "frontlab/geometry.hpp"
#include "frontlab/model.hpp"
#include "frontlab/speed.hpp"
#include "frontlab/steady.hpp"
#include "frontlab/weinberger.hpp"

namespace frontlab {

struct FrontOptions {
    WeinbergerOptions weinberger;
    SteadyOptions steady;
    // Capture runs at c* - max(bracket width, capture_offset).
    double capture_offset = 0.02;
    // Allowed excess over the stall bound 2 sqrt(c* - c).
    double stall_slack = 0.25;
    int capture_n_max = 5000;
    // Speed control: c += (speed_gain * step + position_gain * error) / tau, where
    // step is the last displacement of the crossing and error its distance to the target.
    double speed_gain = 1.0;
    double position_gain = 0.5;
    double converge_tol = 1e-6;
    int max_iterations = 5000;
    // Reseed pulsating fronts (several z-offsets per supercell) from one physical
    // solution before the controlled iteration, when a supercell is crossed in at
    // most pulsating_max_period time units.
    bool resample_pulsating = true;
    double pulsating_max_period = 2000.0;
    PulsatingOptions pulsating;
    // When the controlled iteration does not settle, return the settled physical
    // front (flagged as not settled) instead of raising ExtractionError.
    bool fallback_to_physical = false;
    // Right part of the window used to read off the lower limit p*.
    double plateau_fraction = 0.1;
    double plateau_variance = 1e-8;
    // Largest admissible fixed-point residual of the extracted front.
    double residual_tol = 1e-4;
};

struct FrontResult {
    ProfileGrid profile;
    // Speed at which the profile is a fixed point of the shifted evolution operator.
    double speed = 0.0;
    SteadyState p_star;
    double residual = 0.0;
    // sup |U(., left end) - ceiling|.
    double left_limit_error = 0.0;
    double capture_speed = 0.0;
    int capture_steps = 0;
    int iterations = 0;
    // The iteration started from a resampled physical solution.
    bool resampled = false;
    // False when the controlled iteration did not settle and the physical front is reported.
    bool settled = true;
    // |speed| below the bisection resolution: the grid profile is only an approximation
    // of a possibly discontinuous stationary front.
    bool zero_speed = false;
    std::vector<double> speed_history;
};

// Captures a_{c,n} slightly below c* when its level set stalls, recentres it and
// iterates the shifted evolution operator with speed control until successive
// profiles agree. p* is read off the right plateau, polished and classified.
// Throws CaptureError when no stall is seen and ExtractionError when the iteration
// does not settle or the plateau is not a steady state.
FrontResult extract_front(const ProblemSpec& spec, const CellLattice& lattice,
                          const SpeedEstimate& cstar, const ProfileGrid& phi,
                          const PeriodicField& ceiling, const FrontOptions& options = {});

// sup |F_{e,c}[U] - U| away from the window ends (boundary_margin excluded).
double fixed_point_residual(const ProblemSpec& spec, double c, const ProfileGrid& u,
                            const WeinbergerOptions& options = {});

struct ShiftedDistance {
    double shift = 0.0;
    double distance = 0.0;
};

// min over z-shifts |s| <= max_shift of sup |a(., . + s) - b| on the interior.
ShiftedDistance shifted_distance(const ProfileGrid& a, const ProfileGrid& b, double max_shift,
                                 double margin = 2.0);

// Mean over the supercell of the physical profile U(y, z + y.e); the level crossing
// of this curve is the front position.
std::vector<double> site_mean(const ProfileGrid& u);

struct TimeStepEntry {
    double tau = 0.0;
    SpeedEstimate cstar;
    double front_speed = 0.0;
    // Displacement per step, front_speed * tau.
    double displacement = 0.0;
};

struct TimeStepReport {
    std::vector<TimeStepEntry> entries;
    // Per consecutive pair: |(d_{k+1} / d_k) / (tau_{k+1} / tau_k) - 1|.
    std::vector<double> ratio_errors;
    // (max - min) / |mean| of the continuous front speeds.
    double speed_spread = 0.0;
};

// Repeats the speed computation for each time step of a decreasing chain.
TimeStepReport refine_time_step(const ProblemSpec& spec, const CellLattice& lattice,
                                const ProfileGrid& phi, const PeriodicField& ceiling,
                                const std::vector<double>& taus, double tol,
                                const FrontOptions& options = {});

// CSV: site, z, u.
void write_profile_csv(const std::string& path, const ProfileGrid& u);

}  // namespace frontlab
