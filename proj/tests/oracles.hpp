#pragma once

// Independent reference values used by the tests. Nothing here calls into the
// library's solvers.

#include <cmath>
#include <functional>
#include <utility>

#include <boost/math/tools/minima.hpp>
#include <boost/numeric/odeint.hpp>

namespace oracle {

// Exact speed of u(1-u)(u-a): substituting U(z) = 1 / (1 + exp(z / sqrt 2))
// into U'' + c U' + f(U) = 0 gives c = (1 - 2a) / sqrt 2.
inline double cubic_speed(double a) { return (1.0 - 2.0 * a) / std::sqrt(2.0); }

inline double cubic_profile(double z) { return 1.0 / (1.0 + std::exp(z / std::sqrt(2.0))); }

// Residual of the travelling-wave equation for the cubic ansatz, by central
// differences; used to confirm cubic_speed itself.
inline double cubic_ansatz_residual(double a, double z, double h = 1e-3) {
    const double c = cubic_speed(a);
    const double u = cubic_profile(z);
    const double up = (cubic_profile(z + h) - cubic_profile(z - h)) / (2 * h);
    const double upp = (cubic_profile(z + h) - 2 * u + cubic_profile(z - h)) / (h * h);
    return upp + c * up + u * (1 - u) * (u - a);
}

// Heat equation from the step datum 1 for x < 0, 0 for x > 0.
inline double heat_step(double t, double x) { return 0.5 * std::erfc(x / (2.0 * std::sqrt(t))); }

// Minimal KPP speed: min over lambda > 0 of (lambda^2 + f'(0)) / lambda.
inline double kpp_dispersion_speed(double fu0) {
    auto g = [fu0](double l) { return (l * l + fu0) / l; };
    auto r = boost::math::tools::brent_find_minima(g, 1e-3, 100.0, 50);
    return r.second;
}

// Speed of the bistable travelling wave U'' + c U' + f(U) = 0 connecting
// `hi` (z -> -inf) to `lo` (z -> +inf), by shooting from the unstable
// manifold of (hi, 0) and bisecting on c. Positive c means `hi` invades.
inline double shooting_speed(const std::function<double(double)>& f,
                             const std::function<double(double)>& fu, double lo, double hi,
                             double c_lo = -5.0, double c_hi = 5.0) {
    using State = std::array<double, 2>;
    namespace ode = boost::numeric::odeint;
    // +1: trajectory reaches lo while still decreasing (c too small);
    // -1: it turns back before lo (c too large).
    auto shoot = [&](double c) {
        const double mu = 0.5 * (-c + std::sqrt(c * c - 4.0 * fu(hi)));
        const double eps = 1e-7 * (hi - lo);
        State x{hi - eps, -eps * mu};
        auto rhs = [&](const State& s, State& d, double) {
            d[0] = s[1];
            d[1] = -c * s[1] - f(s[0]);
        };
        ode::runge_kutta4<State> stepper;
        const double dz = 1e-3;
        for (int k = 0; k < 2000000; ++k) {
            stepper.do_step(rhs, x, 0.0, dz);
            if (x[0] <= lo) return 1;
            if (x[1] >= 0.0) return -1;
        }
        return -1;
    };
    for (int it = 0; it < 60; ++it) {
        const double c = 0.5 * (c_lo + c_hi);
        if (shoot(c) > 0)
            c_lo = c;
        else
            c_hi = c;
    }
    return 0.5 * (c_lo + c_hi);
}

}  // namespace oracle
