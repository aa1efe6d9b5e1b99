#include "frontlab/smooth.hpp"

namespace frontlab {

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double smoothstep_du(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double s = t * (1.0 - t);
    return 30.0 * s * s;
}

double PlateauBump::operator()(double t) const {
    if (t <= a || t >= d) return 0.0;
    return smoothstep((t - a) / (b - a)) * smoothstep((d - t) / (d - c));
}

double PlateauBump::derivative(double t) const {
    if (t <= a || t >= d) return 0.0;
    const double rise = (t - a) / (b - a);
    const double fall = (d - t) / (d - c);
    return smoothstep_du(rise) / (b - a) * smoothstep(fall) -
           smoothstep(rise) * smoothstep_du(fall) / (d - c);
}

}  // namespace frontlab
