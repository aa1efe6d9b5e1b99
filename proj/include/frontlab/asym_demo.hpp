#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontlab/assumptions.hpp"
#include "frontlab/front.hpp"
#include "frontlab/speed.hpp"
#include "frontlab/terrace.hpp"

namespace frontlab {

// Threshold used when searching for the layer strength M.
enum class SeparationRule {
    // c(e1) >= 2L / tau_L + gap with tau_L = (L - ln 4) / 2 (a priori bound on c(e2)).
    analytic_bound,
    // c(e1).lower >= (1 + gap) * c(e2).upper with both speeds measured.
    measured,
};

std::string to_string(SeparationRule r);

struct DemoOptions {
    double L = 10.0;
    double eps = 0.05;
    // Grid spacing of the strip and of the cross-layer lattice.
    double h = 0.25;
    double tol = 0.01;
    // Primary estimator of the layered speeds and of each terrace stage. At a
    // coarse h, bisection locks onto lattice-commensurate speeds and its probes
    // near the critical speed are slow; spreading is cheaper and closer to the
    // converged value.
    StageSpeed speed_method = StageSpeed::spreading;
    // Half-widths of the z-windows along the layers (e1) and across them (e2).
    double window_e1 = 30.0;
    double window_e2 = 80.0;
    SeparationRule rule = SeparationRule::measured;
    double gap = 0.25;
    double M_start = 1.0;
    double M_max = 1e3;
    double Mprime_max = 1e3;
    // Accepted |speed - c_target| when tuning M'.
    double Mprime_tol = 2e-3;
    // Cross-check the layered speeds with the other estimator.
    bool cross_check = false;
    double spreading_t_max = 150.0;
    // Cross-layer fronts of the stacked problem are sharper than the grid; when the
    // controlled iteration does not settle the physical front is reported instead.
    FrontOptions front = [] {
        FrontOptions f;
        f.fallback_to_physical = true;
        f.max_iterations = 1500;
        return f;
    }();
    // Called with the name of each stage as it starts.
    std::function<void(const std::string&)> progress;

    static DemoOptions smoke();
    static DemoOptions full();
};

// a priori bound 2L / tau_L = 4L / (L - ln 4) on the cross-layer speed.
double cross_layer_bound(double L);

struct DirectionalSpeeds {
    double M = 0.0;
    SpeedEstimate e1;
    SpeedEstimate e2;
    // Cross-check by the other estimator, when requested.
    std::optional<SpeedEstimate> e1_check;
    std::optional<SpeedEstimate> e2_check;
    // The two estimators differ by more than their combined uncertainty plus tol.
    bool e1_disagrees = false;
    bool e2_disagrees = false;
};

// Critical speeds of the layered problem on [0, 1] along the layers (a 2-D strip
// periodic across them) and across the layers (a 1-D periodic problem).
DirectionalSpeeds measure_directional_speeds(double L, double M, double eps,
                                             const DemoOptions& options = {});

struct MTuning {
    double M = 0.0;
    DirectionalSpeeds speeds;
    std::vector<DirectionalSpeeds> trace;
    double threshold = 0.0;
    // c(e1) nondecreasing along the trace within uncertainty.
    bool monotone = true;
};

// Doubles M from M_start until the separation rule holds; throws TuningError
// with the (M, c(e1)) trace past M_max.
MTuning tune_M(double L, double target_gap, const DemoOptions& options = {});

// Speed of the homogeneous front of f2 = 2u(u - 1/2)(1 - u) + M' chi2(u).
double f2_front_speed(double Mprime, double eps, const DemoOptions& options = {});

struct MprimeTuning {
    double Mprime = 0.0;
    double speed = 0.0;
    std::vector<std::pair<double, double>> trace;
    bool monotone = true;
};

// Bisection on M' in [0, Mprime_max] for f2_front_speed = c_target.
MprimeTuning tune_Mprime(double c_target, const DemoOptions& options = {});

struct DirectionOutcome {
    std::string name;
    Direction direction;
    TerraceReport terrace;
};

struct DemoReport {
    double L = 0.0;
    double eps = 0.0;
    double S = 0.0;
    MTuning m;
    double c = 0.0;
    MprimeTuning mprime;
    AssumptionReport assumptions;
    std::vector<SteadyState> catalog;
    std::vector<DirectionOutcome> directions;
    double bound = 0.0;
    bool bound_holds = false;
    bool counts_differ = false;
    // Name of the direction with two fronts (empty when none).
    std::string two_floor_direction;
    bool two_floor_ordered = false;
    // The one-front direction connects the top state to the bottom state.
    bool single_front_spans = false;
    bool speeds_positive = false;
    std::vector<std::string> notes;
    // Stage reached; "complete" on success.
    std::string stage;

    bool ok() const {
        return counts_differ && two_floor_ordered && single_front_spans && speeds_positive &&
               bound_holds;
    }
};

class DemoError : public std::runtime_error {
public:
    DemoError(const std::string& what, DemoReport partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const DemoReport& partial() const noexcept { return partial_; }

private:
    DemoReport partial_;
};

// Builds the stacked problem with a direction-dependent terrace and measures
// its floors along and across the layers. Throws DemoError with the partial report.
DemoReport run_asymmetric_demo(const DemoOptions& options = DemoOptions::full());

}  // namespace frontlab
