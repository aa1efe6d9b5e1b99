#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frontlab/geometry.hpp"
#include "frontlab/model.hpp"
#include "frontlab/speed.hpp"
#include "frontlab/stepper.hpp"

namespace frontlab {

// Profile U(y, z) on (supercell sites) x (uniform z lattice with the frame's
// longitudinal spacing). Site index j * n_cell_s + m, value index site * n_z + l,
// z_l = z_min + l * h.
struct ProfileGrid {
    Frame frame;
    double z_min = 0.0;
    int n_z = 0;
    std::vector<double> values;
    // Limits as z -> -inf and z -> +inf, one value per site.
    std::vector<double> clamp_left;
    std::vector<double> clamp_right;
    bool monotone = false;

    double h() const { return frame.h_s; }
    double z(int l) const { return z_min + l * frame.h_s; }
    double z_max() const { return z(n_z - 1); }
    int sites() const { return frame.sites(); }
    double& at(int site, int l) { return values[static_cast<std::size_t>(site) * n_z + l]; }
    double at(int site, int l) const { return values[static_cast<std::size_t>(site) * n_z + l]; }
    // Linear interpolation in z at fractional lattice position p. Beyond the right
    // end the profile takes clamp_right (when set); beyond the left end it is constant.
    double sample(int site, double p) const;
    // Longitudinal offset of a site inside the supercell, in lattice steps.
    int site_offset(int site) const { return site % frame.n_cell_s; }
};

// Largest violation of "nonincreasing in z" over all sites (0 when monotone).
double monotonicity_defect(const ProfileGrid& u);

// Integer lattice shift: result(l) = u(l + k), extended as in ProfileGrid::sample.
ProfileGrid shift_cells(const ProfileGrid& u, int k);

double sup_difference(const ProfileGrid& a, const ProfileGrid& b, int margin = 0);

struct WeinbergerOptions {
    double tau = 1.0;
    // Window [-window_left, window_right] in z (length units).
    double window_left = 30.0;
    double window_right = 30.0;
    StepperOptions stepper;
    // classify: margin = margin_factor * min over the cell of (phi(., -inf) - floor).
    double margin_factor = 1e-3;
    int n_stall = 50;
    int n_warmup = 5;
    // A stall also needs the last sup-increment per unit time below this.
    double stall_increment = 1e-7;
    // Per-probe iteration cap; an undecided probe at the cap is inconclusive.
    int n_max = 20000;
    // The level set may not come closer than this to the right end of the window.
    double boundary_margin = 2.0;
    // Relaxation used to check that the initializer lies in the upper basin.
    double basin_delta = 0.05;
    double basin_t_max = 2000.0;
};

// Initializer phi(y, z) = floor(y) + (level(y) - floor(y)) * ramp(z): ramp is a
// C2 smoothstep equal to 1 for z <= -width and 0 for z >= 0. The level must
// lie in the basin of `ceiling` (checked by relaxing level - delta).
// clamp_left holds level, clamp_right holds floor.
ProfileGrid make_phi(const ProblemSpec& spec, const Frame& frame, const PeriodicField& floor,
                     const PeriodicField& level, const PeriodicField& ceiling, double width,
                     const WeinbergerOptions& options = {});

struct PulsatingOptions {
    // Supercell passages run before the speed is first measured.
    int settle_periods = 4;
    int max_periods = 60;
    // Successive one-supercell speeds must agree to this relative tolerance.
    double speed_tol = 1e-7;
    // Sampling interval of the front position, in time units.
    double sample_dt = 0.25;
};

struct PulsatingSample {
    ProfileGrid profile;
    // Supercell period over the measured passage time.
    double speed = 0.0;
    int periods = 0;
    bool settled = false;
};

// Time-tau evolution in the frame of the profile window, shared across calls.
class EvolutionOperator {
public:
    EvolutionOperator(const ProblemSpec& spec, const ProfileGrid& shape,
                      const WeinbergerOptions& options = {});

    // Unshifted samples G(y, z) = v(tau, y; V(x, z - y.e + x.e)). Outside the window
    // the datum is extended as in ProfileGrid::sample.
    std::vector<double> propagate(const ProfileGrid& v) const;
    // F_{e,c}[V](y, z) = G(y, z + c tau).
    ProfileGrid shift(const ProfileGrid& v, const std::vector<double>& g, double c) const;
    ProfileGrid apply(const ProfileGrid& v, double c) const { return shift(v, propagate(v), c); }

    // Rebuilds v from a single physical solution: the z-offset 0 strip is evolved
    // (recentred by whole supercells) until its front advances by one supercell
    // in a fixed time, and every other offset is read off at the time the front
    // has moved by the matching number of lattice steps. The strips of the result
    // are then phases of one pulsating front, which free iteration of F alone
    // only reconciles through interpolation. Requires c_guess > 0.
    PulsatingSample resample_pulsating(const ProfileGrid& v, double c_guess,
                                       const PulsatingOptions& options = {}) const;

    double tau() const { return options_.tau; }
    const ProblemSpec& spec() const { return spec_; }

private:
    ProblemSpec spec_;
    WeinbergerOptions options_;
    int buffer_ = 2;
    Domain domain_;
};

ProfileGrid apply_F(const ProblemSpec& spec, double c, const ProfileGrid& v,
                    const WeinbergerOptions& options = {});

enum class Classification { below_cstar, at_or_above_cstar, undecided };

std::string to_string(Classification c);

struct IterationState {
    double c = 0.0;
    int n = 0;
    ProfileGrid profile;
    ProfileGrid phi;
    std::vector<std::optional<double>> z_history;
    std::vector<double> sup_increments;  // entry n - 1 is |a_n - a_{n-1}|
    Classification status = Classification::undecided;
};

// Level-set position sup{z : a(y, z + y.e) > phi(y, -inf) for all y in the cell},
// refined by linear interpolation; nullopt when the set is empty.
std::optional<double> level_set_position(const ProfileGrid& a, const std::vector<double>& level);

// Applies the spec's decision rules to the current iteration state.
Classification classify(const IterationState& state, const WeinbergerOptions& options = {});

IterationState start_iteration(const ProfileGrid& phi, double c);

// One step a_{n+1} = max(phi, F[a_n]) with bookkeeping. Throws TruncationError
// when the level set reaches the right boundary margin.
void advance(const EvolutionOperator& op, IterationState& state,
             const WeinbergerOptions& options = {});

// Iterates until classify decides or n_max steps have run (status undecided).
IterationState iterate_a(const EvolutionOperator& op, const ProfileGrid& phi, double c,
                         int n_max, bool stop_when_decided = true,
                         const WeinbergerOptions& options = {});

// Guard speed 2 sqrt(C2 K) * 1.1 from exponential supersolutions.
double guard_speed(const ProblemSpec& spec, const Frame& frame);

struct Probe {
    double c = 0.0;
    Classification result = Classification::undecided;
    int steps = 0;
};

struct CStarResult {
    SpeedEstimate estimate;
    std::vector<Probe> probes;
};

// Bisection on classify, starting from the guard bracket.
CStarResult find_cstar(const ProblemSpec& spec, const ProfileGrid& phi, double tol,
                       const WeinbergerOptions& options = {});

// CSV: n, z, sup_increment.
void write_iteration_csv(const std::string& path, const IterationState& state);

}  // namespace frontlab
