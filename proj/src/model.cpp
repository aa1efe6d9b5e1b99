#include "frontlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double cubic_core(double u) { return 2.0 * u * (u - 0.5) * (1.0 - u); }
double cubic_core_du(double u) { return -6.0 * u * u + 6.0 * u - 1.0; }

PlateauBump f0_bump() { return PlateauBump{0.55, 0.75, 0.75, 0.95}; }

double integrate(const std::function<double(double)>& f, double a, double b) {
    if (b <= a) return 0.0;
    // Break at the bump knots so each panel is smooth.
    std::vector<double> knots{a};
    for (double k : {0.5, 0.55, 0.75, 0.95}) {
        if (k > a && k < b) knots.push_back(k);
    }
    knots.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, knots[i], knots[i + 1], 10, 1e-15);
    }
    return total;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError(what);
}

ProblemSpec homogeneous_1d(std::string name, std::function<double(double)> f,
                           std::function<double(double)> fu, double floor, double ceiling) {
    ProblemSpec spec;
    spec.name = std::move(name);
    spec.dimension = 1;
    spec.period = {1.0, 1.0};
    spec.invariant = {true, true};
    spec.diffusion = [](const Vec2&) { return Mat2{}; };
    spec.reaction = [f](const Vec2&, double u) { return f(u); };
    spec.reaction_du = [fu](const Vec2&, double u) { return fu(u); };
    spec.u_floor = floor;
    spec.u_ceiling = ceiling;
    return spec;
}

void finalize(ProblemSpec& spec) {
    const ProblemValidation v = validate_problem(spec);
    if (!v.ok) {
        std::string msg = "problem '" + spec.name + "' fails validation:";
        for (const auto& s : v.violated) msg += " " + s + ";";
        throw ConstructionError(msg, v.violated);
    }
    spec.ellipticity_lower = v.ellipticity_lower;
    spec.ellipticity_upper = v.ellipticity_upper;
    spec.lipschitz = v.lipschitz;
}

}  // namespace

double ProblemSpec::rate(const Vec2& x, double u) const {
    if (u < u_floor) return reaction(x, u_floor) + reaction_du(x, u_floor) * (u - u_floor);
    if (u > u_ceiling)
        return reaction(x, u_ceiling) + reaction_du(x, u_ceiling) * (u - u_ceiling);
    return reaction(x, u);
}

double ProblemSpec::rate_du(const Vec2& x, double u) const {
    return reaction_du(x, std::clamp(u, u_floor, u_ceiling));
}

double ProblemSpec::primitive(const Vec2& x, double u) const {
    // Gauss-Legendre on panels of width <= 1/16 keeps the error far below 1e-12
    // for the C2 reactions used here.
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(u) * 16.0)));
    const double w = u / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = p * w;
        total += boost::math::quadrature::gauss<double, 10>::integrate(
            [&](double s) { return rate(x, s); }, a, a + w);
    }
    return total;
}

std::string to_string(RecipeKind kind) {
    switch (kind) {
        case RecipeKind::cubic_bistable: return "cubic_bistable";
        case RecipeKind::tristable_quintic: return "tristable_quintic";
        case RecipeKind::fisher_kpp: return "fisher_kpp";
        case RecipeKind::periodic_cubic: return "periodic_cubic";
        case RecipeKind::f0_asymmetric: return "f0_asymmetric";
        case RecipeKind::f1_heterogeneous: return "f1_heterogeneous";
        case RecipeKind::f2_homogeneous: return "f2_homogeneous";
        case RecipeKind::stacked: return "stacked";
    }
    return "unknown";
}

RecipeKind recipe_kind_from_string(const std::string& name) {
    for (auto k : {RecipeKind::cubic_bistable, RecipeKind::tristable_quintic,
                   RecipeKind::fisher_kpp, RecipeKind::periodic_cubic,
                   RecipeKind::f0_asymmetric, RecipeKind::f1_heterogeneous,
                   RecipeKind::f2_homogeneous, RecipeKind::stacked}) {
        if (to_string(k) == name) return k;
    }
    throw ParameterError("unknown reaction kind '" + name + "'");
}

double ReactionRecipe::get(const std::string& key, double fallback) const {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : it->second;
}

std::vector<std::string> recipe_parameter_names(RecipeKind kind) {
    switch (kind) {
        case RecipeKind::cubic_bistable: return {"a"};
        case RecipeKind::tristable_quintic: return {"r0", "r1", "r2", "r3", "r4", "scale"};
        case RecipeKind::fisher_kpp: return {"rate"};
        case RecipeKind::periodic_cubic:
            return {"a", "amplitude", "diffusion_amplitude", "period"};
        case RecipeKind::f0_asymmetric: return {"eps"};
        case RecipeKind::f1_heterogeneous: return {"L", "M", "eps"};
        case RecipeKind::f2_homogeneous: return {"Mprime", "eps"};
        case RecipeKind::stacked: return {"L", "M", "Mprime", "eps"};
    }
    return {};
}

// ---------------------------------------------------------------------------
// f0 and S

double F0Function::operator()(double u) const { return cubic_core(u) + eps * f0_bump()(u); }

double F0Function::derivative(double u) const {
    return cubic_core_du(u) + eps * f0_bump().derivative(u);
}

F0Validation validate_f0(const F0Function& f0) {
    F0Validation out;
    auto fail = [&](const std::string& s) {
        out.ok = false;
        out.violated.push_back(s);
    };
    const double tiny = 1e-14;
    if (std::abs(f0(0.0)) > tiny || std::abs(f0(0.5)) > tiny || std::abs(f0(1.0)) > tiny)
        fail("f0 must vanish at 0, 1/2 and 1");
    if (std::abs(f0.derivative(0.0) + 1.0) > 1e-12 || std::abs(f0.derivative(1.0) + 1.0) > 1e-12)
        fail("f0'(0) = f0'(1) = -1");
    if (!(f0.derivative(0.5) > 0.0)) fail("f0'(1/2) > 0");

    constexpr int samples = 10000;
    bool neg_ok = true, pos_ok = true;
    for (int i = 1; i < samples; ++i) {
        const double u = static_cast<double>(i) / samples;
        const double v = f0(u);
        if (u < 0.5 && !(v < 0.0)) neg_ok = false;
        if (u > 0.5 && !(v > 0.0)) pos_ok = false;
    }
    for (int i = 0; i <= samples; ++i) {
        const double u = static_cast<double>(i) / samples;
        out.max_abs_derivative = std::max(out.max_abs_derivative, std::abs(f0.derivative(u)));
    }
    if (!neg_ok) fail("f0 < 0 on (0, 1/2)");
    if (!pos_ok) fail("f0 > 0 on (1/2, 1)");
    if (out.max_abs_derivative > 1.0 + 1e-12) fail("|f0'| <= 1");

    out.integral = integrate([&](double u) { return f0(u); }, 0.0, 1.0);
    if (!(out.integral > 1e-12)) fail("integral of f0 over (0, 1) is positive");
    return out;
}

F0Function make_f0(double eps) {
    if (!(eps >= 0.0)) throw ParameterError("f0 asymmetry eps must be >= 0, got " + fmt(eps));
    F0Function f0{eps};
    const F0Validation v = validate_f0(f0);
    if (!v.ok) {
        std::string msg = "f0 with eps = " + fmt(eps) + " violates:";
        for (const auto& s : v.violated) msg += " " + s + ";";
        throw ConstructionError(msg, v.violated);
    }
    return f0;
}

double compute_S(const std::function<double(double)>& f0) {
    auto cumulative = [&](double s) { return integrate(f0, 0.0, s); };
    const double at_half = cumulative(0.5);
    const double at_one = cumulative(1.0);
    if (std::abs(at_one) <= 1e-12) return 1.0;
    if (!(at_half < 0.0 && at_one > 0.0))
        throw ConstructionError("cumulative integral of f0 has no sign change in (1/2, 1)");
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) < 1e-15; };
    auto [lo, hi] = boost::math::tools::toms748_solve(cumulative, 0.5, 1.0, at_half, at_one, tol,
                                                      iters);
    const double S = 0.5 * (lo + hi);
    if (std::abs(cumulative(S)) >= 1e-10)
        throw ConstructionError("root of the cumulative integral not resolved to 1e-10");
    return S;
}

PlateauBump chi1_bump() { return PlateauBump{0.05, 0.25, 0.75, 0.95}; }

PlateauBump chi2_bump(double S) {
    const double eta = (1.0 - S) / 10.0;
    const double a = S + eta;
    const double d = 1.0 - eta;
    const double w = d - a;
    return PlateauBump{a, a + 0.3 * w, d - 0.3 * w, d};
}

// ---------------------------------------------------------------------------
// Recipes

ProblemSpec build_problem(const ReactionRecipe& recipe) {
    const auto names = recipe_parameter_names(recipe.kind);
    for (const auto& [key, value] : recipe.parameters) {
        if (std::find(names.begin(), names.end(), key) == names.end())
            throw ParameterError("recipe " + to_string(recipe.kind) + " has no parameter '" +
                                 key + "'");
        require(std::isfinite(value), "parameter '" + key + "' must be finite");
    }

    ProblemSpec spec;
    switch (recipe.kind) {
        case RecipeKind::cubic_bistable: {
            const double a = recipe.get("a", 0.25);
            require(a > 0.0 && a < 1.0, "cubic_bistable requires a in (0, 1), got " + fmt(a));
            spec = homogeneous_1d(
                "cubic_bistable", [a](double u) { return u * (1.0 - u) * (u - a); },
                [a](double u) { return -3.0 * u * u + 2.0 * (1.0 + a) * u - a; }, 0.0, 1.0);
            break;
        }
        case RecipeKind::tristable_quintic: {
            std::array<double, 5> r{recipe.get("r0", 0.0), recipe.get("r1", 0.2),
                                    recipe.get("r2", 0.5), recipe.get("r3", 0.7),
                                    recipe.get("r4", 1.0)};
            const double scale = recipe.get("scale", 1.0);
            for (int i = 0; i < 4; ++i)
                require(r[i] < r[i + 1], "tristable_quintic roots must be strictly increasing");
            require(scale > 0.0, "tristable_quintic scale must be positive");
            auto f = [r, scale](double u) {
                double p = -scale;
                for (double ri : r) p *= (u - ri);
                return p;
            };
            auto fu = [r, scale](double u) {
                double sum = 0.0;
                for (int i = 0; i < 5; ++i) {
                    double p = 1.0;
                    for (int k = 0; k < 5; ++k)
                        if (k != i) p *= (u - r[k]);
                    sum += p;
                }
                return -scale * sum;
            };
            spec = homogeneous_1d("tristable_quintic", f, fu, r[0], r[4]);
            break;
        }
        case RecipeKind::fisher_kpp: {
            const double k = recipe.get("rate", 1.0);
            require(k > 0.0, "fisher_kpp rate must be positive");
            spec = homogeneous_1d(
                "fisher_kpp", [k](double u) { return k * u * (1.0 - u); },
                [k](double u) { return k * (1.0 - 2.0 * u); }, 0.0, 1.0);
            break;
        }
        case RecipeKind::periodic_cubic: {
            const double a = recipe.get("a", 0.3);
            const double amp = recipe.get("amplitude", 0.1);
            const double damp = recipe.get("diffusion_amplitude", 0.3);
            const double P = recipe.get("period", 1.0);
            require(P > 0.0, "periodic_cubic period must be positive");
            require(a - std::abs(amp) > 0.0 && a + std::abs(amp) < 1.0,
                    "periodic_cubic requires a +- amplitude inside (0, 1)");
            require(std::abs(damp) < 1.0, "periodic_cubic requires |diffusion_amplitude| < 1");
            const double k = 2.0 * kPi / P;
            spec.name = "periodic_cubic";
            spec.dimension = 1;
            spec.period = {P, 1.0};
            spec.invariant = {false, true};
            spec.diffusion = [damp, k](const Vec2& x) {
                const double d = 1.0 + damp * std::cos(k * x[0]);
                return Mat2{d, 0.0, d};
            };
            spec.reaction = [a, amp, k](const Vec2& x, double u) {
                return u * (1.0 - u) * (u - a - amp * std::sin(k * x[0]));
            };
            spec.reaction_du = [a, amp, k](const Vec2& x, double u) {
                const double ax = a + amp * std::sin(k * x[0]);
                return -3.0 * u * u + 2.0 * (1.0 + ax) * u - ax;
            };
            spec.u_floor = 0.0;
            spec.u_ceiling = 1.0;
            break;
        }
        case RecipeKind::f0_asymmetric: {
            const F0Function f0 = make_f0(recipe.get("eps", 0.05));
            spec = homogeneous_1d(
                "f0_asymmetric", [f0](double u) { return f0(u); },
                [f0](double u) { return f0.derivative(u); }, 0.0, 1.0);
            break;
        }
        case RecipeKind::f2_homogeneous: {
            const double Mp = recipe.get("Mprime", 0.0);
            require(Mp >= 0.0, "f2_homogeneous requires Mprime >= 0");
            const double S = compute_S(make_f0(recipe.get("eps", 0.05)));
            const PlateauBump chi2 = chi2_bump(S);
            spec = homogeneous_1d(
                "f2_homogeneous",
                [Mp, chi2](double u) { return cubic_core(u) + Mp * chi2(u); },
                [Mp, chi2](double u) { return cubic_core_du(u) + Mp * chi2.derivative(u); }, 0.0,
                1.0);
            break;
        }
        case RecipeKind::f1_heterogeneous:
        case RecipeKind::stacked: {
            const double L = recipe.get("L", 10.0);
            const double M = recipe.get("M", 0.0);
            require(L > 8.0, "layered medium requires L > 8, got " + fmt(L));
            require(M >= 0.0, "layered medium requires M >= 0, got " + fmt(M));
            const F0Function f0 = make_f0(recipe.get("eps", 0.05));
            const PlateauBump chi1 = chi1_bump();
            const PlateauBump chi2 = chi2_bump(compute_S(f0));
            auto layer = [L, chi1](double y) {
                double t = std::fmod(y / L, 2.0);
                if (t < 0.0) t += 2.0;
                return chi1(t);
            };
            auto f1 = [f0, chi2, M, layer](double y, double u) {
                return f0(u) + M * layer(y) * chi2(u);
            };
            auto f1u = [f0, chi2, M, layer](double y, double u) {
                return f0.derivative(u) + M * layer(y) * chi2.derivative(u);
            };
            spec.dimension = 2;
            spec.period = {1.0, 2.0 * L};
            spec.invariant = {true, false};
            spec.diffusion = [](const Vec2&) { return Mat2{}; };
            if (recipe.kind == RecipeKind::f1_heterogeneous) {
                spec.name = "f1_heterogeneous";
                spec.reaction = [f1](const Vec2& x, double u) { return f1(x[1], u); };
                spec.reaction_du = [f1u](const Vec2& x, double u) { return f1u(x[1], u); };
                spec.u_ceiling = 1.0;
            } else {
                const double Mp = recipe.get("Mprime", 0.0);
                require(Mp >= 0.0, "stacked requires Mprime >= 0");
                auto f2 = [Mp, chi2](double u) { return cubic_core(u) + Mp * chi2(u); };
                auto f2u = [Mp, chi2](double u) {
                    return cubic_core_du(u) + Mp * chi2.derivative(u);
                };
                spec.name = "stacked";
                spec.reaction = [f1, f2](const Vec2& x, double u) {
                    return u <= 1.0 ? f1(x[1], u) : f2(u - 1.0);
                };
                spec.reaction_du = [f1u, f2u](const Vec2& x, double u) {
                    return u <= 1.0 ? f1u(x[1], u) : f2u(u - 1.0);
                };
                spec.u_ceiling = 2.0;
            }
            spec.u_floor = 0.0;
            break;
        }
    }
    finalize(spec);
    return spec;
}

// ---------------------------------------------------------------------------
// Validation

ProblemValidation validate_problem(const ProblemSpec& spec, int samples_per_axis) {
    ProblemValidation out;
    out.ellipticity_lower = 1e300;
    auto fail = [&](const std::string& s) {
        out.ok = false;
        out.violated.push_back(s);
    };
    if (spec.dimension != 1 && spec.dimension != 2) fail("dimension must be 1 or 2");
    if (!(spec.period[0] > 0.0 && spec.period[1] > 0.0)) fail("periods must be positive");
    if (!(spec.u_floor < spec.u_ceiling)) fail("u_floor < u_ceiling");
    if (!out.ok) return out;

    const int ny = spec.dimension == 2 ? samples_per_axis : 1;
    constexpr int nu = 64;
    bool periodic = true, spd = true, floor_zero = true;
    for (int i = 0; i < samples_per_axis; ++i) {
        for (int j = 0; j < ny; ++j) {
            const Vec2 x{spec.period[0] * (i + 0.37) / samples_per_axis,
                         spec.dimension == 2 ? spec.period[1] * (j + 0.61) / ny : 0.0};
            const Mat2 A = spec.diffusion(x);
            double lo, hi;
            if (spec.dimension == 1) {
                lo = hi = A.xx;
            } else {
                const double tr = 0.5 * (A.xx + A.yy);
                const double disc = std::sqrt(0.25 * (A.xx - A.yy) * (A.xx - A.yy) + A.xy * A.xy);
                lo = tr - disc;
                hi = tr + disc;
            }
            if (!(lo > 0.0)) spd = false;
            out.ellipticity_lower = std::min(out.ellipticity_lower, lo);
            out.ellipticity_upper = std::max(out.ellipticity_upper, hi);

            if (std::abs(spec.reaction(x, spec.u_floor)) > 1e-12) floor_zero = false;
            for (int shift = 1; shift <= 2; ++shift) {
                Vec2 xs = x;
                xs[0] += shift * spec.period[0];
                if (spec.dimension == 2) xs[1] -= shift * spec.period[1];
                const Mat2 As = spec.diffusion(xs);
                if (std::abs(As.xx - A.xx) > 1e-12 || std::abs(As.xy - A.xy) > 1e-12 ||
                    std::abs(As.yy - A.yy) > 1e-12)
                    periodic = false;
                for (int k = 0; k <= 8; ++k) {
                    const double u =
                        spec.u_floor + (spec.u_ceiling - spec.u_floor) * (k + 0.5) / 9.0;
                    if (std::abs(spec.reaction(xs, u) - spec.reaction(x, u)) > 1e-12)
                        periodic = false;
                }
            }
            for (int k = 0; k <= nu; ++k) {
                const double u = spec.u_floor + (spec.u_ceiling - spec.u_floor) * k / nu;
                out.lipschitz = std::max(out.lipschitz, std::abs(spec.reaction_du(x, u)));
            }
        }
    }
    if (!spd) fail("diffusion matrix is not positive definite on the sample lattice");
    if (!periodic) fail("coefficients are not periodic to 1e-12");
    if (!floor_zero) fail("f(x, u_floor) = 0");
    return out;
}

ProblemSpec reflect_problem(const ProblemSpec& spec) {
    ProblemSpec out = spec;
    out.name = spec.name + "_reflected";
    auto f = spec.reaction;
    auto fu = spec.reaction_du;
    out.reaction = [f](const Vec2& x, double u) { return -f(x, -u); };
    out.reaction_du = [fu](const Vec2& x, double u) { return fu(x, -u); };
    out.u_floor = -spec.u_ceiling;
    out.u_ceiling = -spec.u_floor;
    return out;
}

}  // namespace frontlab
