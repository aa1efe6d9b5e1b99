#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "frontlab/geometry.hpp"
#include "frontlab/smooth.hpp"

namespace frontlab {

using ReactionFn = std::function<double(const Vec2&, double)>;
using DiffusionFn = std::function<Mat2(const Vec2&)>;

// Immutable definition of du/dt = div(A(x) grad u) + f(x, u) on a periodic medium.
struct ProblemSpec {
    std::string name;
    int dimension = 1;
    Vec2 period{1.0, 1.0};
    // invariant[i]: the medium does not depend on x_i (that axis collapses on lattices).
    std::array<bool, 2> invariant{false, false};
    DiffusionFn diffusion;
    ReactionFn reaction;
    ReactionFn reaction_du;
    double u_floor = 0.0;
    double u_ceiling = 1.0;
    // Ellipticity bounds C1 |xi|^2 <= xi.A xi <= C2 |xi|^2.
    double ellipticity_lower = 1.0;
    double ellipticity_upper = 1.0;
    // Bound of |f_u| over the cell and [u_floor, u_ceiling].
    double lipschitz = 1.0;

    bool homogeneous() const {
        return invariant[0] && (dimension == 1 || invariant[1]);
    }

    // Reaction with a C1 linear extension outside [u_floor, u_ceiling]. The
    // extension is a numerical guard only.
    double rate(const Vec2& x, double u) const;
    double rate_du(const Vec2& x, double u) const;
    // F(x, u) = integral of rate(x, .) from 0 to u.
    double primitive(const Vec2& x, double u) const;
};

enum class RecipeKind {
    cubic_bistable,
    tristable_quintic,
    fisher_kpp,
    periodic_cubic,
    f0_asymmetric,
    f1_heterogeneous,
    f2_homogeneous,
    stacked,
};

std::string to_string(RecipeKind kind);
RecipeKind recipe_kind_from_string(const std::string& name);

struct ReactionRecipe {
    RecipeKind kind = RecipeKind::cubic_bistable;
    std::map<std::string, double> parameters;

    double get(const std::string& key, double fallback) const;
};

// Parameter names understood by each recipe kind.
std::vector<std::string> recipe_parameter_names(RecipeKind kind);

// Throws ParameterError naming the violated constraint.
ProblemSpec build_problem(const ReactionRecipe& recipe);

// The asymmetric bistable nonlinearity 2u(u - 1/2)(1 - u) + eps * b(u) where b
// is a C2 bump supported in (0.55, 0.95).
struct F0Function {
    double eps = 0.05;

    double operator()(double u) const;
    double derivative(double u) const;
};

struct F0Validation {
    bool ok = true;
    std::vector<std::string> violated;
    double integral = 0.0;
    double max_abs_derivative = 0.0;
};

F0Validation validate_f0(const F0Function& f0);

// Validates and returns f0; throws ConstructionError listing every violated constraint.
F0Function make_f0(double eps);

// Root of u -> integral_0^u f in (1/2, 1]. Returns 1 when the total integral
// vanishes (symmetric cubic); throws ConstructionError when there is no sign change.
double compute_S(const std::function<double(double)>& f0);

// Bumps of the layered construction.
PlateauBump chi1_bump();
PlateauBump chi2_bump(double S);

// Periodic lattice checks of the ProblemSpec invariants.
struct ProblemValidation {
    bool ok = true;
    std::vector<std::string> violated;
    double ellipticity_lower = 0.0;
    double ellipticity_upper = 0.0;
    double lipschitz = 0.0;
};

ProblemValidation validate_problem(const ProblemSpec& spec, int samples_per_axis = 16);

// u -> -u change of variables: f~(x, u) = -f(x, -u), range [-u_ceiling, -u_floor].
ProblemSpec reflect_problem(const ProblemSpec& spec);

}  // namespace frontlab
