#include "frontlab/weinberger.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "frontlab/errors.hpp"
#include "frontlab/smooth.hpp"
#include "frontlab/steady.hpp"

namespace frontlab {

namespace {

int window_cells(double length, double h) {
    return std::max(1, static_cast<int>(std::lround(length / h)));
}

// g(l) = min over sites of a(site, l + offset(site)) - level(site).
double level_gap(const ProfileGrid& a, const std::vector<double>& level, int l) {
    double g = std::numeric_limits<double>::infinity();
    for (int site = 0; site < a.sites(); ++site)
        g = std::min(g, a.sample(site, l + a.site_offset(site)) - level[site]);
    return g;
}

double slope(const std::vector<double>& y) {
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    const double mt = 0.5 * (n - 1);
    double my = 0.0;
    for (double v : y) my += v;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (k - mt) * (k - mt);
        sxy += (k - mt) * (y[k] - my);
    }
    return sxy / sxx;
}

}  // namespace

double ProfileGrid::sample(int site, double p) const {
    const double* row = values.data() + static_cast<std::size_t>(site) * n_z;
    if (p <= 0.0) return row[0];
    const double right = clamp_right.empty() ? row[n_z - 1] : clamp_right[site];
    if (p >= n_z) return right;
    const int i = static_cast<int>(std::floor(p));
    const double w = p - i;
    const double next = i + 1 < n_z ? row[i + 1] : right;
    return w == 0.0 ? row[i] : (1.0 - w) * row[i] + w * next;
}

double monotonicity_defect(const ProfileGrid& u) {
    double worst = 0.0;
    for (int site = 0; site < u.sites(); ++site)
        for (int l = 0; l + 1 < u.n_z; ++l)
            worst = std::max(worst, u.at(site, l + 1) - u.at(site, l));
    return worst;
}

ProfileGrid shift_cells(const ProfileGrid& u, int k) {
    ProfileGrid out = u;
    for (int site = 0; site < u.sites(); ++site)
        for (int l = 0; l < u.n_z; ++l)
            out.at(site, l) = l + k >= u.n_z && !u.clamp_right.empty()
                                  ? u.clamp_right[site]
                                  : u.at(site, std::clamp(l + k, 0, u.n_z - 1));
    return out;
}

double sup_difference(const ProfileGrid& a, const ProfileGrid& b, int margin) {
    if (a.values.size() != b.values.size() || a.n_z != b.n_z)
        throw ParameterError("profiles live on different grids");
    double d = 0.0;
    for (int site = 0; site < a.sites(); ++site)
        for (int l = margin; l < a.n_z - margin; ++l)
            d = std::max(d, std::abs(a.at(site, l) - b.at(site, l)));
    return d;
}

ProfileGrid make_phi(const ProblemSpec& spec, const Frame& frame, const PeriodicField& floor,
                     const PeriodicField& level, const PeriodicField& ceiling, double width,
                     const WeinbergerOptions& options) {
    if (!(width > 0.0)) throw ParameterError("initializer width must be positive");
    const std::vector<double> lo = cell_to_frame(floor, frame);
    const std::vector<double> lv = cell_to_frame(level, frame);
    const std::vector<double> hi = cell_to_frame(ceiling, frame);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < lv.size(); ++k) {
        if (!(lv[k] > lo[k] && lv[k] < hi[k]))
            throw InitializerError("initializer level must lie strictly between floor and ceiling");
        gap = std::min(gap, lv[k] - lo[k]);
    }

    // Basin check: level - delta must relax to the ceiling.
    const double delta = std::min(options.basin_delta, 0.5 * gap);
    PeriodicField lowered = level;
    for (double& v : lowered.values()) v -= delta;
    SteadyOptions so;
    so.relax_t_max = options.basin_t_max;
    so.stepper = options.stepper;
    const PeriodicField relaxed = relax(spec, lowered, so);
    const double miss = sup_distance(relaxed, ceiling);
    if (!(miss < 1e-4))
        throw InitializerError("initializer level - " + std::to_string(delta) +
                               " does not relax to the ceiling (distance " + std::to_string(miss) +
                               ")");

    ProfileGrid phi;
    phi.frame = frame;
    const double h = frame.h_s;
    const int left = window_cells(options.window_left, h);
    const int right = window_cells(options.window_right, h);
    phi.z_min = -left * h;
    phi.n_z = left + right + 1;
    phi.values.resize(static_cast<std::size_t>(frame.sites()) * phi.n_z);
    phi.clamp_left = lv;
    phi.clamp_right = lo;
    for (int site = 0; site < frame.sites(); ++site)
        for (int l = 0; l < phi.n_z; ++l) {
            const double ramp = smoothstep(-phi.z(l) / width);
            phi.at(site, l) = lo[site] + (lv[site] - lo[site]) * ramp;
        }
    phi.monotone = true;
    return phi;
}

namespace {

// Supercells padded on each side of the window: about eight diffusion lengths,
// so the continuation boundaries are invisible at the window ends.
int buffer_cells(const ProblemSpec& spec, const ProfileGrid& shape, double tau) {
    const double reach = 8.0 * std::sqrt(tau * std::max(spec.ellipticity_upper, 0.0));
    return std::max(2, static_cast<int>(std::ceil(reach / shape.frame.period_s())) + 1);
}

}  // namespace

EvolutionOperator::EvolutionOperator(const ProblemSpec& spec, const ProfileGrid& shape,
                                     const WeinbergerOptions& options)
    : spec_(spec),
      options_(options),
      buffer_(options.tau > 0.0 ? buffer_cells(spec, shape, options.tau) : 2),
      domain_(spec, shape.frame, -buffer_ * shape.frame.period_s(),
              shape.n_z + 2 * buffer_ * shape.frame.n_cell_s, Boundary::continuation(),
              Boundary::continuation()) {
    if (!(options.tau > 0.0)) throw ParameterError("time step tau must be positive");
}

std::vector<double> EvolutionOperator::propagate(const ProfileGrid& v) const {
    const int K = v.frame.n_cell_s, nr = v.frame.n_r, nz = v.n_z;
    const int ns = domain_.n_s();
    const int pad = buffer_ * K;
    if (ns != nz + 2 * pad || domain_.n_r() != nr)
        throw ParameterError("profile does not match the evolution operator's window");
    std::vector<double> g(v.values.size(), 0.0);
    FieldState st;
    st.values.resize(domain_.size());
    // Node ii sits at s = (ii - pad) h on site ii mod K; offset k pairs it with z index
    // ii - pad + k. The end supercells only see the extensions, which are periodic,
    // so the continuation boundaries are consistent with the datum.
    for (int k = 0; k < K; ++k) {
        for (int j = 0; j < nr; ++j)
            for (int ii = 0; ii < ns; ++ii) {
                const int site = j * K + ii % K;
                const int l = ii - pad + k;
                st.values[domain_.index(ii, j)] = l >= nz && !v.clamp_right.empty()
                                                      ? v.clamp_right[site]
                                                      : v.at(site, std::clamp(l, 0, nz - 1));
            }
        st.time = 0.0;
        st = evolve(spec_, domain_, std::move(st), options_.tau, options_.stepper);
        for (int j = 0; j < nr; ++j)
            for (int ii = 0; ii < ns; ++ii) {
                const int l = ii - pad + k;
                if (l < 0 || l >= nz) continue;
                g[static_cast<std::size_t>(j * K + ii % K) * nz + l] = st.values[domain_.index(ii, j)];
            }
    }
    return g;
}

ProfileGrid EvolutionOperator::shift(const ProfileGrid& v, const std::vector<double>& g,
                                     double c) const {
    ProfileGrid g_grid = v;
    g_grid.values = g;
    ProfileGrid out = v;
    const double p = c * options_.tau / v.h();
    for (int site = 0; site < v.sites(); ++site)
        for (int l = 0; l < v.n_z; ++l) out.at(site, l) = g_grid.sample(site, l + p);
    out.monotone = false;
    return out;
}

PulsatingSample EvolutionOperator::resample_pulsating(const ProfileGrid& v, double c_guess,
                                                      const PulsatingOptions& options) const {
    if (!(c_guess > 0.0)) throw ParameterError("pulsating resampling needs a positive speed");
    const int K = v.frame.n_cell_s, nr = v.frame.n_r, nz = v.n_z;
    const int ns = domain_.n_s();
    const int pad = buffer_ * K;
    const double h = v.h(), period = v.frame.period_s();
    if (ns != nz + 2 * pad || domain_.n_r() != nr)
        throw ParameterError("profile does not match the evolution operator's window");

    // Strip of offset 0: node ii carries z index ii - pad.
    FieldState st;
    st.values.resize(domain_.size());
    for (int j = 0; j < nr; ++j)
        for (int ii = 0; ii < ns; ++ii) {
            const int l = ii - pad;
            st.values[domain_.index(ii, j)] = l >= nz && !v.clamp_right.empty()
                                                  ? v.clamp_right[j * K + ii % K]
                                                  : v.at(j * K + ii % K, std::clamp(l, 0, nz - 1));
        }

    // Front position from the mass above the right end, scaled so that a shift by
    // one supercell moves it by one period.
    std::vector<double> lo(static_cast<std::size_t>(K) * nr), hi(lo.size());
    double D = 0.0;
    for (int j = 0; j < nr; ++j)
        for (int m = 0; m < K; ++m) {
            lo[j * K + m] = st.values[domain_.index(ns - K + m, j)];
            hi[j * K + m] = st.values[domain_.index(m, j)];
            D += hi[j * K + m] - lo[j * K + m];
        }
    if (!(D > 0.0)) throw ParameterError("pulsating resampling needs a descending front");
    auto position = [&](const FieldState& f) {
        double M = 0.0;
        for (int j = 0; j < nr; ++j)
            for (int ii = 0; ii < ns; ++ii) M += f.values[domain_.index(ii, j)] - lo[j * K + ii % K];
        return M * period / D;
    };
    int dropped = 0;  // supercells removed on the left
    const double home = position(st);
    auto recentre = [&](FieldState& f) {
        while (position(f) - home > period) {
            for (int j = 0; j < nr; ++j) {
                for (int ii = 0; ii + K < ns; ++ii)
                    f.values[domain_.index(ii, j)] = f.values[domain_.index(ii + K, j)];
            }
            ++dropped;
        }
    };
    auto absolute = [&](const FieldState& f) { return position(f) + dropped * period; };

    // Advance to the time at which the absolute position first reaches `target`.
    double t = 0.0;
    auto advance_to = [&](double target) {
        double x = absolute(st);
        const double budget = t + 4.0 * period / c_guess + 100.0;
        while (x < target) {
            if (t > budget) throw TruncationError("pulsating front stalls while resampling");
            FieldState prev = st;
            const double x_prev = x;
            st = evolve(spec_, domain_, std::move(st), options.sample_dt, options_.stepper);
            t += options.sample_dt;
            x = absolute(st);
            if (x >= target) {
                // Finish exactly at the crossing time (linear in the position).
                const double frac = (target - x_prev) / (x - x_prev);
                st = evolve(spec_, domain_, std::move(prev), frac * options.sample_dt, options_.stepper);
                t += (frac - 1.0) * options.sample_dt;
                x = absolute(st);
            }
            recentre(st);
        }
        return t;
    };

    PulsatingSample out;
    for (; out.periods < options.settle_periods; ++out.periods) advance_to(absolute(st) + period);
    double t0 = t, last = 0.0;
    double x0 = absolute(st);
    while (out.periods < options.max_periods) {
        advance_to(x0 + period);
        ++out.periods;
        const double speed = period / (t - t0);
        if (last > 0.0 && std::abs(speed - last) <= options.speed_tol * speed) {
            out.settled = true;
            out.speed = speed;
            break;
        }
        last = out.speed = speed;
        t0 = t;
        x0 = absolute(st);
    }

    // Offset k = (site - l - pad) mod K is read k h / c later, when the front has
    // advanced k lattice steps on average.
    out.profile = v;
    out.profile.monotone = false;
    const int shift0 = dropped;
    for (int k = 0; k < K; ++k) {
        if (k > 0) {
            st = evolve(spec_, domain_, std::move(st), h / out.speed, options_.stepper);
            recentre(st);
        }
        const int moved = dropped - shift0;
        for (int j = 0; j < nr; ++j)
            for (int l = 0; l < nz; ++l) {
                const int site_s = ((k + l + pad) % K + K) % K;
                const int ii = l + pad + k - moved * K;
                if (ii < 0 || ii >= ns) throw TruncationError("resampling left the strip");
                out.profile.at(j * K + site_s, l) = st.values[domain_.index(ii, j)];
            }
    }
    return out;
}

ProfileGrid apply_F(const ProblemSpec& spec, double c, const ProfileGrid& v,
                    const WeinbergerOptions& options) {
    return EvolutionOperator(spec, v, options).apply(v, c);
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::below_cstar: return "below_cstar";
        case Classification::at_or_above_cstar: return "at_or_above_cstar";
        case Classification::undecided: return "undecided";
    }
    return "unknown";
}

std::optional<double> level_set_position(const ProfileGrid& a, const std::vector<double>& level) {
    int last = -1;
    double g_last = 0.0;
    for (int l = a.n_z - 1; l >= 0; --l) {
        const double g = level_gap(a, level, l);
        if (g > 0.0) {
            last = l;
            g_last = g;
            break;
        }
    }
    if (last < 0) return std::nullopt;
    if (last == a.n_z - 1) return a.z(last);
    const double g_next = level_gap(a, level, last + 1);
    return a.z(last) + a.h() * g_last / (g_last - g_next);
}

Classification classify(const IterationState& state, const WeinbergerOptions& options) {
    const ProfileGrid& a = state.profile;
    const std::vector<double>& level = state.phi.clamp_left;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < level.size(); ++k)
        margin = std::min(margin, level[k] - state.phi.clamp_right[k]);
    margin *= options.margin_factor;

    if (state.n >= 1) {
        // First lattice point strictly to the right of z = 0.
        int l0 = static_cast<int>(std::floor(-a.z_min / a.h())) + 1;
        while (l0 > 0 && a.z(l0 - 1) > 0.0) --l0;
        if (l0 < a.n_z && level_gap(a, level, l0) > margin) return Classification::below_cstar;
    }
    if (state.n < std::max(options.n_warmup, options.n_stall)) return Classification::undecided;

    const auto& zh = state.z_history;
    const std::size_t n = zh.size();
    for (std::size_t k = n - 1 - options.n_stall; k < n; ++k)
        if (!zh[k]) return Classification::undecided;
    std::vector<double> inc;
    for (std::size_t k = n - options.n_stall; k < n; ++k) inc.push_back(*zh[k] - *zh[k - 1]);
    const double trend = slope(inc);
    const double last = state.sup_increments.back() / options.tau;
    if (trend <= 1e-12 && last < options.stall_increment) return Classification::at_or_above_cstar;
    return Classification::undecided;
}

IterationState start_iteration(const ProfileGrid& phi, double c) {
    IterationState st;
    st.c = c;
    st.n = 0;
    st.profile = phi;
    st.phi = phi;
    st.z_history.push_back(level_set_position(phi, phi.clamp_left));
    return st;
}

void advance(const EvolutionOperator& op, IterationState& state, const WeinbergerOptions& options) {
    ProfileGrid next = op.apply(state.profile, state.c);
    double inc = 0.0;
    for (std::size_t k = 0; k < next.values.size(); ++k) {
        next.values[k] = std::max(next.values[k], state.phi.values[k]);
        inc = std::max(inc, std::abs(next.values[k] - state.profile.values[k]));
    }
    state.profile = std::move(next);
    ++state.n;
    state.sup_increments.push_back(inc);
    const auto z = level_set_position(state.profile, state.phi.clamp_left);
    state.z_history.push_back(z);
    if (z && *z > state.profile.z_max() - options.boundary_margin)
        throw TruncationError("level set reached the right end of the z-window at n = " +
                              std::to_string(state.n) + "; widen the window");
}

IterationState iterate_a(const EvolutionOperator& op, const ProfileGrid& phi, double c, int n_max,
                         bool stop_when_decided, const WeinbergerOptions& options) {
    IterationState st = start_iteration(phi, c);
    while (st.n < n_max) {
        advance(op, st, options);
        st.status = classify(st, options);
        if (stop_when_decided && st.status != Classification::undecided) break;
    }
    return st;
}

double guard_speed(const ProblemSpec& spec, const Frame&) {
    const double K = std::max(spec.lipschitz, 1e-3);
    return 1.1 * 2.0 * std::sqrt(spec.ellipticity_upper * K);
}

CStarResult find_cstar(const ProblemSpec& spec, const ProfileGrid& phi, double tol,
                       const WeinbergerOptions& options) {
    if (!(tol > 0.0)) throw ParameterError("bisection tolerance must be positive");
    const EvolutionOperator op(spec, phi, options);
    CStarResult out;
    double lower = -guard_speed(spec, phi.frame), upper = -lower;
    auto probe = [&](double c) {
        const IterationState st = iterate_a(op, phi, c, options.n_max, true, options);
        out.probes.push_back({c, st.status, st.n});
        if (st.status == Classification::undecided)
            throw InconclusiveError("classification undecided at c = " + std::to_string(c) +
                                        " after " + std::to_string(st.n) + " steps",
                                    lower, upper);
        return st.status;
    };
    for (int k = 0; probe(upper) != Classification::at_or_above_cstar; ++k) {
        if (k == 4) throw InconclusiveError("upper guard speed is not above c*", lower, upper);
        lower = upper;
        upper *= 2.0;
    }
    for (int k = 0; probe(lower) != Classification::below_cstar; ++k) {
        if (k == 4) throw InconclusiveError("lower guard speed is not below c*", lower, upper);
        upper = lower;
        lower *= 2.0;
    }
    while (upper - lower >= tol) {
        const double mid = 0.5 * (lower + upper);
        if (probe(mid) == Classification::below_cstar)
            lower = mid;
        else
            upper = mid;
    }
    SpeedEstimate& e = out.estimate;
    e.value = 0.5 * (lower + upper);
    e.lower = lower;
    e.upper = upper;
    e.method = SpeedMethod::weinberger_bisection;
    e.grid.h_s = phi.frame.h_s;
    e.grid.h_r = phi.frame.h_r;
    e.grid.tau = options.tau;
    e.grid.dt_max = options.stepper.dt_max;
    e.grid.window_min = phi.z_min;
    e.grid.window_max = phi.z_max();
    return out;
}

void write_iteration_csv(const std::string& path, const IterationState& state) {
    std::ofstream os(path);
    if (!os) throw ConfigurationError("cannot open " + path + " for writing");
    os.precision(12);
    os << "n,z,sup_increment\n";
    for (std::size_t n = 0; n < state.z_history.size(); ++n) {
        os << n << ',';
        if (state.z_history[n]) os << *state.z_history[n];
        os << ',';
        if (n > 0) os << state.sup_increments[n - 1];
        os << '\n';
    }
}

}  // namespace frontlab
