#pragma once

namespace frontlab {

// Quintic smoothstep 6t^5 - 15t^4 + 10t^3 clamped to [0, 1]; C2 at both ends.
double smoothstep(double t);
double smoothstep_du(double t);

// C2 bump that rises on [a, b], equals 1 on [b, c], falls on [c, d] and
// vanishes outside (a, d). Requires a < b <= c < d.
struct PlateauBump {
    double a = 0.0, b = 0.25, c = 0.75, d = 1.0;

    double operator()(double t) const;
    double derivative(double t) const;
};

}  // namespace frontlab
