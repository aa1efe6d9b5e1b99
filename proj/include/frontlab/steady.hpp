#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/geometry.hpp"
#include "frontlab/model.hpp"
#include "frontlab/stepper.hpp"

namespace frontlab {

enum class Stability { linearly_stable, linearly_unstable, marginal };

std::string to_string(Stability s);

struct SteadyState {
    PeriodicField profile;
    // Sup norm of div(A grad q) + f(x, q) on the cell lattice.
    double residual = 0.0;
    double lambda = 0.0;
    // Positive principal eigenfunction normalized to max 1.
    PeriodicField eigenfunction;
    Stability stability = Stability::marginal;
    // False when Newton did not converge and the relaxed state is returned as is.
    bool polished = true;
};

struct EigenOptions {
    int max_iterations = 10000;
    double lambda_tol = 1e-13;
    double vector_tol = 1e-10;
    // Minimum number of implicit sub-steps per unit time in the propagator.
    int min_substeps = 16;
};

struct EigenResult {
    double lambda = 0.0;
    PeriodicField eigenfunction;
    int iterations = 0;
};

// Principal eigenvalue of
//   L_sigma w = div(A grad w) + 2 sigma (A e).grad w + (sigma^2 e.A e + sigma div(A e) + f_u(x, q)) w
// over cell-periodic functions, by power iteration on the time-1 propagator
// (I - L/n)^(-n). sigma = 0 gives the linearization around q.
EigenResult principal_eigenvalue(const ProblemSpec& spec, const PeriodicField& q, double sigma = 0.0,
                                 Vec2 e = {1.0, 0.0}, const EigenOptions& options = {},
                                 const std::vector<double>* start = nullptr);

Stability classify_stability(double lambda, double tol_lambda);

struct SteadyOptions {
    double tol_lambda = 1e-5;
    // Relaxation stops once one unit of time changes the state by less than this.
    double relax_tol = 1e-9;
    double relax_t_max = 2000.0;
    double newton_tol = 1e-11;
    int newton_max_iterations = 60;
    double dedup_tol = 1e-6;
    StepperOptions stepper;
    EigenOptions eigen;
};

double steady_residual(const ProblemSpec& spec, const PeriodicField& q);

// Damped Newton on the discrete elliptic system; nullopt if it fails to converge.
std::optional<PeriodicField> newton_polish(const ProblemSpec& spec, const PeriodicField& seed,
                                           const SteadyOptions& options = {});

// Long-time cell-periodic evolution.
PeriodicField relax(const ProblemSpec& spec, const PeriodicField& seed,
                    const SteadyOptions& options = {});

// Attaches residual, eigenpair and stability label.
SteadyState make_steady_state(const ProblemSpec& spec, const PeriodicField& q,
                              const SteadyOptions& options = {}, bool polished = true);

// Constants spread over (u_floor, u_ceiling) plus randomly perturbed periodic fields.
std::vector<PeriodicField> default_seeds(const ProblemSpec& spec, const CellLattice& lattice,
                                         int n_constants = 30, int n_random = 10,
                                         std::uint64_t seed = 1);

// Newton from every seed and from its relaxed state; deduplicated, sorted by cell average.
std::vector<SteadyState> find_steady_states(const ProblemSpec& spec,
                                            const std::vector<PeriodicField>& seeds,
                                            const SteadyOptions& options = {});

}  // namespace frontlab
