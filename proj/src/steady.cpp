#include "frontlab/steady.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
constexpr double kTwoPi = 6.28318530717958647692;

// Discrete div(A grad .) on the cell lattice, matching the stepper's fluxes.
std::vector<Triplet> diffusion_triplets(const Domain& d) {
    std::vector<Triplet> t;
    const int n0 = d.n_s(), n1 = d.n_r();
    const auto& ks = d.ks();
    const auto& kr = d.kr();
    auto link = [&](std::size_t a, std::size_t b, double k) {
        t.emplace_back(a, b, k);
        t.emplace_back(a, a, -k);
    };
    for (int j = 0; j < n1; ++j) {
        for (int i = 0; i < n0; ++i) {
            const std::size_t k = d.index(i, j);
            if (n0 > 1) {
                link(k, d.index((i + n0 - 1) % n0, j), ks[static_cast<std::size_t>(j) * (n0 + 1) + i]);
                link(k, d.index((i + 1) % n0, j), ks[static_cast<std::size_t>(j) * (n0 + 1) + i + 1]);
            }
            if (n1 > 1) {
                link(k, d.index(i, (j + n1 - 1) % n1), kr[d.index(i, (j + n1 - 1) % n1)]);
                link(k, d.index(i, (j + 1) % n1), kr[k]);
            }
        }
    }
    return t;
}

void apply_diffusion(const Domain& d, const std::vector<double>& q, std::vector<double>& out) {
    const int n0 = d.n_s(), n1 = d.n_r();
    const auto& ks = d.ks();
    const auto& kr = d.kr();
    out.assign(q.size(), 0.0);
    for (int j = 0; j < n1; ++j) {
        for (int i = 0; i < n0; ++i) {
            const std::size_t k = d.index(i, j);
            double acc = 0.0;
            if (n0 > 1) {
                acc += ks[static_cast<std::size_t>(j) * (n0 + 1) + i] *
                       (q[d.index((i + n0 - 1) % n0, j)] - q[k]);
                acc += ks[static_cast<std::size_t>(j) * (n0 + 1) + i + 1] *
                       (q[d.index((i + 1) % n0, j)] - q[k]);
            }
            if (n1 > 1) {
                const std::size_t lo = d.index(i, (j + n1 - 1) % n1);
                const std::size_t hi = d.index(i, (j + 1) % n1);
                acc += kr[lo] * (q[lo] - q[k]) + kr[k] * (q[hi] - q[k]);
            }
            out[k] = acc;
        }
    }
}

std::vector<double> residual_vector(const ProblemSpec& spec, const Domain& d,
                                    const std::vector<double>& q) {
    std::vector<double> g;
    apply_diffusion(d, q, g);
    for (std::size_t k = 0; k < q.size(); ++k) g[k] += spec.rate(d.points()[k], q[k]);
    return g;
}

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

std::string to_string(Stability s) {
    switch (s) {
        case Stability::linearly_stable: return "linearly_stable";
        case Stability::linearly_unstable: return "linearly_unstable";
        case Stability::marginal: return "marginal";
    }
    return "unknown";
}

Stability classify_stability(double lambda, double tol_lambda) {
    if (lambda < -tol_lambda) return Stability::linearly_stable;
    if (lambda > tol_lambda) return Stability::linearly_unstable;
    return Stability::marginal;
}

double steady_residual(const ProblemSpec& spec, const PeriodicField& q) {
    const Domain d = Domain::cell(spec, q.lattice());
    return sup_norm(residual_vector(spec, d, q.values()));
}

EigenResult principal_eigenvalue(const ProblemSpec& spec, const PeriodicField& q, double sigma,
                                 Vec2 e, const EigenOptions& options,
                                 const std::vector<double>* start) {
    const CellLattice& lat = q.lattice();
    const Domain d = Domain::cell(spec, lat);
    const std::size_t N = d.size();
    const int n0 = lat.n[0], n1 = lat.n[1];
    const double en = std::hypot(e[0], e[1]);
    if (!(en > 0.0)) throw ParameterError("eigenvalue direction must be nonzero");
    e = {e[0] / en, e[1] / en};

    // Node values of A e for the drift and the div(A e) term.
    std::vector<Vec2> Ae(N);
    std::vector<double> eAe(N);
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n0; ++i) {
            const Mat2 A = spec.diffusion(lat.point(i, j));
            const std::size_t k = d.index(i, j);
            Ae[k] = {A.xx * e[0] + A.xy * e[1], A.xy * e[0] + A.yy * e[1]};
            eAe[k] = dot(e, Ae[k]);
        }

    std::vector<Triplet> t = diffusion_triplets(d);
    std::vector<double> zero_order(N);
    for (int j = 0; j < n1; ++j) {
        for (int i = 0; i < n0; ++i) {
            const std::size_t k = d.index(i, j);
            double c = sigma * sigma * eAe[k] + spec.rate_du(d.points()[k], q.values()[k]);
            if (sigma != 0.0) {
                if (n0 > 1) {
                    const std::size_t l = d.index((i + n0 - 1) % n0, j), r = d.index((i + 1) % n0, j);
                    const double b = sigma * Ae[k][0] / lat.h[0];
                    t.emplace_back(k, r, b);
                    t.emplace_back(k, l, -b);
                    c += sigma * (Ae[r][0] - Ae[l][0]) / (2.0 * lat.h[0]);
                }
                if (n1 > 1) {
                    const std::size_t l = d.index(i, (j + n1 - 1) % n1), r = d.index(i, (j + 1) % n1);
                    const double b = sigma * Ae[k][1] / lat.h[1];
                    t.emplace_back(k, r, b);
                    t.emplace_back(k, l, -b);
                    c += sigma * (Ae[r][1] - Ae[l][1]) / (2.0 * lat.h[1]);
                }
            }
            zero_order[k] = c;
            t.emplace_back(k, k, c);
        }
    }
    SpMat L(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    L.setFromTriplets(t.begin(), t.end());

    // Implicit propagator (I - L/n)^(-n); n large enough that I - L/n is an M-matrix.
    const double cmax = *std::max_element(zero_order.begin(), zero_order.end());
    const int n = std::max(options.min_substeps, static_cast<int>(std::ceil(2.0 * std::max(cmax, 0.0))) + 1);
    SpMat I(L.rows(), L.cols());
    I.setIdentity();
    SpMat B = I - L / static_cast<double>(n);
    B.makeCompressed();
    Eigen::SparseLU<SpMat> lu;
    lu.compute(B);
    if (lu.info() != Eigen::Success)
        throw ToleranceError("eigenvalue propagator could not be factorized", 0.0);

    Eigen::VectorXd v(static_cast<Eigen::Index>(N));
    if (start) {
        if (start->size() != N) throw ParameterError("start vector has the wrong size");
        for (std::size_t k = 0; k < N; ++k) v[k] = (*start)[k];
    } else {
        v.setOnes();
    }
    if (!(v.minCoeff() > 0.0)) throw ParameterError("start vector must be positive");
    v /= v.maxCoeff();

    double lambda = 0.0, prev_lambda = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= options.max_iterations; ++it) {
        Eigen::VectorXd w = v;
        for (int s = 0; s < n; ++s) w = lu.solve(w);
        const double g = w.maxCoeff();
        w /= g;
        lambda = n * (1.0 - std::pow(g, -1.0 / n));
        const double dv = (w - v).cwiseAbs().maxCoeff();
        v = w;
        if (std::abs(lambda - prev_lambda) < options.lambda_tol && dv < options.vector_tol) {
            EigenResult out;
            out.lambda = lambda;
            out.iterations = it;
            out.eigenfunction = PeriodicField(lat, std::vector<double>(v.data(), v.data() + N));
            return out;
        }
        prev_lambda = lambda;
    }
    throw ToleranceError("power iteration did not converge", lambda);
}

std::optional<PeriodicField> newton_polish(const ProblemSpec& spec, const PeriodicField& seed,
                                           const SteadyOptions& options) {
    const Domain d = Domain::cell(spec, seed.lattice());
    const std::size_t N = d.size();
    const std::vector<Triplet> dt = diffusion_triplets(d);
    std::vector<double> q = seed.values();
    std::vector<double> g = residual_vector(spec, d, q);
    double gn = sup_norm(g);
    const double tol = options.newton_tol * std::max(1.0, sup_norm(q));
    for (int it = 0; it < options.newton_max_iterations && gn >= tol; ++it) {
        std::vector<Triplet> t = dt;
        for (std::size_t k = 0; k < N; ++k) t.emplace_back(k, k, spec.rate_du(d.points()[k], q[k]));
        SpMat J(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
        J.setFromTriplets(t.begin(), t.end());
        J.makeCompressed();
        Eigen::SparseLU<SpMat> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) return std::nullopt;
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(N));
        for (std::size_t k = 0; k < N; ++k) rhs[k] = -g[k];
        const Eigen::VectorXd delta = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !delta.allFinite()) return std::nullopt;

        bool accepted = false;
        for (double alpha = 1.0; alpha >= 1.0 / 64; alpha *= 0.5) {
            std::vector<double> trial(q);
            for (std::size_t k = 0; k < N; ++k) trial[k] += alpha * delta[k];
            std::vector<double> gt = residual_vector(spec, d, trial);
            const double gtn = sup_norm(gt);
            if (gtn < gn) {
                q = std::move(trial);
                g = std::move(gt);
                gn = gtn;
                accepted = true;
                break;
            }
        }
        if (!accepted) return std::nullopt;
    }
    if (gn >= tol) return std::nullopt;
    const double lo = spec.u_floor - 1e-9, hi = spec.u_ceiling + 1e-9;
    for (double v : q)
        if (v < lo || v > hi) return std::nullopt;
    return PeriodicField(seed.lattice(), std::move(q));
}

PeriodicField relax(const ProblemSpec& spec, const PeriodicField& seed,
                    const SteadyOptions& options) {
    const Domain d = Domain::cell(spec, seed.lattice());
    FieldState s{seed.values(), 0.0};
    while (s.time < options.relax_t_max) {
        FieldState next = evolve(spec, d, s, 1.0, options.stepper);
        double change = 0.0;
        for (std::size_t k = 0; k < s.values.size(); ++k)
            change = std::max(change, std::abs(next.values[k] - s.values[k]));
        s = std::move(next);
        if (change < options.relax_tol) break;
    }
    return PeriodicField(seed.lattice(), std::move(s.values));
}

SteadyState make_steady_state(const ProblemSpec& spec, const PeriodicField& q,
                              const SteadyOptions& options, bool polished) {
    SteadyState st;
    st.profile = q;
    st.residual = steady_residual(spec, q);
    const EigenResult eig = principal_eigenvalue(spec, q, 0.0, {1.0, 0.0}, options.eigen);
    st.lambda = eig.lambda;
    st.eigenfunction = eig.eigenfunction;
    st.stability = classify_stability(eig.lambda, options.tol_lambda);
    st.polished = polished;
    return st;
}

std::vector<PeriodicField> default_seeds(const ProblemSpec& spec, const CellLattice& lattice,
                                         int n_constants, int n_random, std::uint64_t seed) {
    std::vector<PeriodicField> seeds;
    const double lo = spec.u_floor, hi = spec.u_ceiling, range = hi - lo;
    seeds.emplace_back(lattice, lo);
    seeds.emplace_back(lattice, hi);
    for (int k = 1; k <= n_constants; ++k)
        seeds.emplace_back(lattice, lo + range * k / (n_constants + 1.0));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int r = 0; r < n_random; ++r) {
        const double base = lo + range * (0.1 + 0.8 * U(rng));
        double coef[2][3][2];
        for (auto& axis : coef)
            for (auto& mode : axis)
                for (auto& c : mode) c = (U(rng) - 0.5) * 0.2 * range;
        PeriodicField f(lattice, 0.0);
        for (int j = 0; j < lattice.n[1]; ++j) {
            for (int i = 0; i < lattice.n[0]; ++i) {
                double v = base;
                const double t[2] = {static_cast<double>(i) / lattice.n[0],
                                     static_cast<double>(j) / lattice.n[1]};
                for (int a = 0; a < 2; ++a) {
                    if (lattice.n[a] == 1) continue;
                    for (int m = 0; m < 3; ++m)
                        v += coef[a][m][0] * std::cos(kTwoPi * (m + 1) * t[a]) +
                             coef[a][m][1] * std::sin(kTwoPi * (m + 1) * t[a]);
                }
                f(i, j) = std::clamp(v, lo, hi);
            }
        }
        seeds.push_back(std::move(f));
    }
    return seeds;
}

std::vector<SteadyState> find_steady_states(const ProblemSpec& spec,
                                            const std::vector<PeriodicField>& seeds,
                                            const SteadyOptions& options) {
    struct Candidate {
        PeriodicField q;
        double residual;
        bool polished;
    };
    std::vector<Candidate> found;
    auto add = [&](const PeriodicField& q, bool polished) {
        const double res = steady_residual(spec, q);
        for (auto& c : found) {
            if (sup_distance(c.q, q) < options.dedup_tol) {
                if (polished && (!c.polished || res < c.residual)) c = {q, res, polished};
                return;
            }
        }
        found.push_back({q, res, polished});
    };
    for (const auto& seed : seeds) {
        if (seed.min() < spec.u_floor - 1e-12 || seed.max() > spec.u_ceiling + 1e-12)
            throw ParameterError("steady-state seeds must lie within [u_floor, u_ceiling]");
        if (auto q = newton_polish(spec, seed, options)) add(*q, true);
        const PeriodicField relaxed = relax(spec, seed, options);
        if (auto q = newton_polish(spec, relaxed, options))
            add(*q, true);
        else
            add(relaxed, false);
    }
    std::sort(found.begin(), found.end(),
              [](const Candidate& a, const Candidate& b) { return a.q.mean() < b.q.mean(); });
    std::vector<SteadyState> out;
    for (const auto& c : found) out.push_back(make_steady_state(spec, c.q, options, c.polished));
    return out;
}

}  // namespace frontlab
