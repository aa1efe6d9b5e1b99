#pragma once

#include <string>

namespace frontlab {

enum class SpeedMethod { weinberger_bisection, direct_spreading, front_extraction };

std::string to_string(SpeedMethod m);

struct GridMetadata {
    double h_s = 0.0;
    double h_r = 0.0;
    double tau = 1.0;
    double dt_max = 0.0;
    double window_min = 0.0;
    double window_max = 0.0;
};

// A speed with its uncertainty interval [lower, upper].
struct SpeedEstimate {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    SpeedMethod method = SpeedMethod::weinberger_bisection;
    GridMetadata grid;

    double radius() const { return 0.5 * (upper - lower); }
};

}  // namespace frontlab
