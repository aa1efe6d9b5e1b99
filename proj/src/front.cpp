#include "frontlab/front.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>

#include <boost/math/tools/minima.hpp>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / v.size();
}

// Rightmost downward crossing of `level` by the site mean, in z units.
std::optional<double> crossing(const ProfileGrid& u, double level) {
    const std::vector<double> m = site_mean(u);
    for (int l = u.n_z - 2; l >= 0; --l) {
        if (m[l] >= level && m[l + 1] < level)
            return u.z(l) + u.h() * (m[l] - level) / (m[l] - m[l + 1]);
    }
    return std::nullopt;
}

double sup_change(const ProfileGrid& a, const ProfileGrid& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) d = std::max(d, std::abs(a.values[k] - b.values[k]));
    return d;
}

// Runs a_{c,n} at c below c* until the level set has stalled for ceil(1/sqrt(gap)) steps.
IterationState capture(const ProblemSpec& spec, const ProfileGrid& phi, double c, double gap,
                       const FrontOptions& options) {
    const WeinbergerOptions& w = options.weinberger;
    const EvolutionOperator op(spec, phi, w);
    IterationState st = start_iteration(phi, c);
    const int window = static_cast<int>(std::ceil(1.0 / std::sqrt(gap)));
    const double bound = 2.0 * std::sqrt(gap) * (1.0 + options.stall_slack);
    while (st.n < options.capture_n_max) {
        try {
            advance(op, st, w);
        } catch (const TruncationError& e) {
            throw CaptureError(std::string("no stall before the level set left the window: ") + e.what());
        }
        if (st.n < std::max(w.n_warmup, window)) continue;
        const auto& zh = st.z_history;
        const std::size_t n = zh.size() - 1;
        bool stalled = zh[n].has_value();
        for (int m = 1; stalled && m <= window; ++m)
            stalled = zh[n - m].has_value() && *zh[n] - *zh[n - m] <= bound;
        if (stalled) return st;
    }
    throw CaptureError("no level-set stall within " + std::to_string(options.capture_n_max) +
                       " steps at c = " + std::to_string(c));
}

}  // namespace

std::vector<double> site_mean(const ProfileGrid& u) {
    std::vector<double> m(u.n_z, 0.0);
    const int sites = u.sites();
    for (int l = 0; l < u.n_z; ++l) {
        double s = 0.0;
        for (int site = 0; site < sites; ++site) s += u.sample(site, l + u.site_offset(site));
        m[l] = s / sites;
    }
    return m;
}

double fixed_point_residual(const ProblemSpec& spec, double c, const ProfileGrid& u,
                            const WeinbergerOptions& options) {
    const ProfileGrid next = apply_F(spec, c, u, options);
    const int margin = static_cast<int>(std::ceil(options.boundary_margin / u.h()));
    return sup_difference(next, u, margin);
}

ShiftedDistance shifted_distance(const ProfileGrid& a, const ProfileGrid& b, double max_shift,
                                 double margin) {
    if (a.n_z != b.n_z || a.sites() != b.sites())
        throw ParameterError("profiles live on different grids");
    const double h = a.h();
    const int mc = static_cast<int>(std::ceil(margin / h));
    auto dist = [&](double s) {
        const double p = s / h;
        double d = 0.0;
        for (int site = 0; site < a.sites(); ++site)
            for (int l = mc; l < a.n_z - mc; ++l)
                d = std::max(d, std::abs(a.sample(site, l + p) - b.at(site, l)));
        return d;
    };
    const int reach = static_cast<int>(std::floor(max_shift / h));
    int best = 0;
    double best_d = dist(0.0);
    for (int k = -reach; k <= reach; ++k) {
        const double d = dist(k * h);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    const double lo = std::max(-max_shift, (best - 1) * h);
    const double hi = std::min(max_shift, (best + 1) * h);
    ShiftedDistance out{best * h, best_d};
    if (hi > lo) {
        const auto [s, d] = boost::math::tools::brent_find_minima(dist, lo, hi, 30);
        if (d < out.distance) out = {s, d};
    }
    return out;
}

FrontResult extract_front(const ProblemSpec& spec, const CellLattice& lattice,
                          const SpeedEstimate& cstar, const ProfileGrid& phi,
                          const PeriodicField& ceiling, const FrontOptions& options) {
    const WeinbergerOptions& w = options.weinberger;
    const double gap = std::max(cstar.upper - cstar.lower, options.capture_offset);
    FrontResult out;
    out.capture_speed = cstar.value - gap;
    const IterationState st = capture(spec, phi, out.capture_speed, gap, options);
    out.capture_steps = st.n;

    // Recentre on the crossing of the initializer level and drop the right clamp:
    // the lower limit of the front is not known yet, so the window continues
    // its right end as a constant.
    const double level = mean_of(phi.clamp_left);
    ProfileGrid u = st.profile;
    u.clamp_right.clear();
    auto x = crossing(u, level);
    if (!x) throw ExtractionError("captured profile does not cross the initializer level");
    u = shift_cells(u, static_cast<int>(std::lround(*x / u.h())));
    x = crossing(u, level);
    if (!x) throw ExtractionError("recentred profile does not cross the initializer level");

    const EvolutionOperator op(spec, u, w);
    double c = cstar.value;
    std::optional<PulsatingSample> physical;
    // Several z-offsets per supercell: start from phases of one physical solution.
    const double period = u.frame.period_s();
    if (options.resample_pulsating && u.frame.n_cell_s > 1 && c > 0.0 &&
        period / c <= options.pulsating_max_period) {
        physical = op.resample_pulsating(u, c, options.pulsating);
        ProfileGrid& p = physical->profile;
        x = crossing(p, level);
        if (!x) throw ExtractionError("resampled profile does not cross the initializer level");
        p = shift_cells(p, static_cast<int>(std::lround(*x / p.h())));
        x = crossing(p, level);
        if (!x) throw ExtractionError("resampled profile does not cross the initializer level");
        u = p;
        c = physical->speed;
        out.resampled = true;
    }
    const double target = 0.0;
    double x_prev = *x;
    bool converged = false;
    for (int it = 1; it <= options.max_iterations; ++it) {
        ProfileGrid next = op.apply(u, c);
        const double change = sup_change(next, u);
        u = std::move(next);
        x = crossing(u, level);
        if (!x) throw ExtractionError("front lost its level crossing during extraction");
        const double err = *x - target;
        out.speed_history.push_back(c);
        out.iterations = it;
        if (change < options.converge_tol && it > 1) {
            converged = true;
            break;
        }
        c += (options.speed_gain * (*x - x_prev) + options.position_gain * err) / w.tau;
        x_prev = *x;
        if (std::abs(err) > 2.0 * u.h()) {
            const int k = static_cast<int>(std::lround(err / u.h()));
            u = shift_cells(u, k);
            x_prev -= k * u.h();
        }
    }
    if (!converged) {
        if (!(options.fallback_to_physical && physical && physical->settled))
            throw ExtractionError("front iteration did not settle within " +
                                  std::to_string(options.max_iterations) + " steps");
        // Keep the physical pulsating front; its residual shows how far the grid
        // operator is from having it as a fixed point.
        u = physical->profile;
        c = physical->speed;
        out.settled = false;
    }
    out.speed = c;

    // Lower limit: per-site plateau on the right end of the window.
    const int first = u.n_z - std::max(2, static_cast<int>(std::ceil(options.plateau_fraction * u.n_z)));
    std::vector<double> plateau(u.sites());
    for (int site = 0; site < u.sites(); ++site) {
        double m = 0.0, v = 0.0;
        for (int l = first; l < u.n_z; ++l) m += u.at(site, l);
        m /= u.n_z - first;
        for (int l = first; l < u.n_z; ++l) v += (u.at(site, l) - m) * (u.at(site, l) - m);
        v /= u.n_z - first;
        if (!(v < options.plateau_variance))
            throw ExtractionError("no plateau at the right end of the window (variance " +
                                  std::to_string(v) + ")");
        plateau[site] = m;
    }
    PeriodicField q = frame_to_cell(plateau, u.frame, lattice);
    bool polished = false;
    if (auto p = newton_polish(spec, q, options.steady); p && sup_distance(*p, q) < 1e-3) {
        q = *p;
        polished = true;
    }
    out.p_star = make_steady_state(spec, q, options.steady, polished);
    const double scale = std::max(1.0, std::max(std::abs(q.max()), std::abs(q.min())));
    if (!(out.p_star.residual < 1e-7 * scale))
        throw ExtractionError("plateau is not a steady state (residual " +
                              std::to_string(out.p_star.residual) + ")");

    u.clamp_left = cell_to_frame(ceiling, u.frame);
    u.clamp_right = cell_to_frame(q, u.frame);
    u.monotone = monotonicity_defect(u) < 1e-9;
    for (int site = 0; site < u.sites(); ++site)
        out.left_limit_error = std::max(out.left_limit_error, std::abs(u.at(site, 0) - u.clamp_left[site]));
    out.residual = fixed_point_residual(spec, c, u, w);
    out.zero_speed = std::abs(c) <= cstar.radius();
    out.profile = std::move(u);
    return out;
}

TimeStepReport refine_time_step(const ProblemSpec& spec, const CellLattice& lattice,
                                const ProfileGrid& phi, const PeriodicField& ceiling,
                                const std::vector<double>& taus, double tol,
                                const FrontOptions& options) {
    if (taus.empty()) throw ParameterError("time-step chain is empty");
    for (double t : taus)
        if (!(t > 0.0)) throw ParameterError("time steps must be positive");
    TimeStepReport out;
    for (double tau : taus) {
        FrontOptions o = options;
        o.weinberger.tau = tau;
        TimeStepEntry e;
        e.tau = tau;
        e.cstar = find_cstar(spec, phi, tol, o.weinberger).estimate;
        e.front_speed = extract_front(spec, lattice, e.cstar, phi, ceiling, o).speed;
        e.displacement = e.front_speed * tau;
        out.entries.push_back(e);
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    for (std::size_t k = 0; k < out.entries.size(); ++k) {
        const TimeStepEntry& e = out.entries[k];
        lo = std::min(lo, e.front_speed);
        hi = std::max(hi, e.front_speed);
        sum += e.front_speed;
        if (k > 0) {
            const TimeStepEntry& p = out.entries[k - 1];
            out.ratio_errors.push_back(
                std::abs((e.displacement / p.displacement) / (e.tau / p.tau) - 1.0));
        }
    }
    const double mean = sum / out.entries.size();
    out.speed_spread = out.entries.size() > 1 ? (hi - lo) / std::abs(mean) : 0.0;
    return out;
}

void write_profile_csv(const std::string& path, const ProfileGrid& u) {
    std::ofstream os(path);
    if (!os) throw ConfigurationError("cannot open " + path + " for writing");
    os.precision(12);
    os << "site,z,u\n";
    for (int site = 0; site < u.sites(); ++site)
        for (int l = 0; l < u.n_z; ++l) os << site << ',' << u.z(l) << ',' << u.at(site, l) << '\n';
}

}  // namespace frontlab
