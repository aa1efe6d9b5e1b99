#include "frontlab/spreading.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace {

// Length unit used for window sizes: one supercell period, or 1 when the
// longitudinal axis is collapsed.
double length_unit(const Frame& f) { return f.n_cell_s > 1 ? f.period_s() : 1.0; }

struct LineFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
};

LineFit fit_line(const std::vector<double>& t, const std::vector<double>& x) {
    const std::size_t n = t.size();
    LineFit out;
    if (n < 2) return out;
    double mt = 0.0, mx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mt += t[k];
        mx += x[k];
    }
    mt /= n;
    mx /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (t[k] - mt) * (t[k] - mt);
        sxy += (t[k] - mt) * (x[k] - mx);
    }
    out.slope = sxy / sxx;
    if (n > 2) {
        double ssr = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double r = x[k] - mx - out.slope * (t[k] - mt);
            ssr += r * r;
        }
        out.stderr_slope = std::sqrt(ssr / (n - 2) / sxx);
    }
    return out;
}

// Moving average over one supercell (all transverse lines), positioned at the
// centre of its window; returns the rightmost downward crossing of `level`.
std::optional<double> crossing(const std::vector<double>& u, const Domain& d, double level) {
    const int ns = d.n_s(), nr = d.n_r();
    const int w = std::min(d.frame().n_cell_s, ns);
    std::vector<double> col(ns, 0.0);
    for (int j = 0; j < nr; ++j)
        for (int i = 0; i < ns; ++i) col[i] += u[d.index(i, j)];
    std::vector<double> avg(ns - w + 1, 0.0);
    double run = 0.0;
    for (int i = 0; i < w; ++i) run += col[i];
    avg[0] = run / (w * nr);
    for (int i = 1; i + w <= ns; ++i) {
        run += col[i + w - 1] - col[i - 1];
        avg[i] = run / (w * nr);
    }
    const int last = static_cast<int>(avg.size()) - 1;
    if (avg[last] >= level) return std::nullopt;
    for (int i = last - 1; i >= 0; --i) {
        if (avg[i] >= level) {
            const double frac = (avg[i] - level) / (avg[i] - avg[i + 1]);
            return d.s(i) + (frac + 0.5 * (w - 1)) * d.frame().h_s;
        }
    }
    return std::nullopt;
}

// Shifts the window content by k supercells (k > 0 moves the window towards
// +s). Uncovered cells either copy the nearest supercell with the same site or,
// on a side flagged for refilling, are taken from the datum: ahead of a front
// the invaded state must not inherit the small leading tail of the window edge.
void shift_window(std::vector<double>& u, const Domain& d, int k, const std::vector<double>& datum,
                  bool refill_left, bool refill_right) {
    const int ns = d.n_s(), nr = d.n_r(), p = d.frame().n_cell_s;
    const int shift = k * p;
    std::vector<double> out(u.size());
    for (int j = 0; j < nr; ++j) {
        for (int i = 0; i < ns; ++i) {
            int src = i + shift;
            if (src >= ns) {
                src = ns - p + ((src - (ns - p)) % p);
                out[d.index(i, j)] = refill_right ? datum[d.index(src, j)] : u[d.index(src, j)];
                continue;
            }
            if (src < 0) {
                src = ((src % p) + p) % p;
                out[d.index(i, j)] = refill_left ? datum[d.index(src, j)] : u[d.index(src, j)];
                continue;
            }
            out[d.index(i, j)] = u[d.index(src, j)];
        }
    }
    u = std::move(out);
}

}  // namespace

std::string to_string(SpeedMethod m) {
    switch (m) {
        case SpeedMethod::weinberger_bisection: return "weinberger_bisection";
        case SpeedMethod::direct_spreading: return "direct_spreading";
        case SpeedMethod::front_extraction: return "front_extraction";
    }
    return "unknown";
}

InitialCondition heaviside_datum(const ProblemSpec& spec, const Frame& frame,
                                 const PeriodicField& lower, const PeriodicField& upper,
                                 double delta, const DatumOptions& options) {
    if (!(delta >= 0.0)) throw ParameterError("Heaviside datum needs delta >= 0");
    const std::vector<double> lo = cell_to_frame(lower, frame);
    const std::vector<double> hi = cell_to_frame(upper, frame);
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (!(lo[k] + delta < hi[k]))
            throw ParameterError("Heaviside datum needs lower + delta < upper everywhere");

    InitialCondition ic;
    ic.frame = frame;
    const double P = frame.period_s();
    const double unit = length_unit(frame);
    const int cells = std::max(2, static_cast<int>(std::ceil(options.half_width * unit / P)));
    ic.s_min = -cells * P;
    ic.n_s = 2 * cells * frame.n_cell_s + 1;
    ic.degenerate = delta == 0.0;
    const double step = -std::sqrt(static_cast<double>(spec.dimension)) * unit;
    ic.values.resize(static_cast<std::size_t>(ic.n_s) * frame.n_r);
    for (int j = 0; j < frame.n_r; ++j) {
        for (int i = 0; i < ic.n_s; ++i) {
            const double s = ic.s_min + i * frame.h_s;
            const std::size_t site = static_cast<std::size_t>(j) * frame.n_cell_s + i % frame.n_cell_s;
            ic.values[static_cast<std::size_t>(j) * ic.n_s + i] = lo[site] + (s < step ? delta : 0.0);
        }
    }
    return ic;
}

InitialCondition reflect_datum(const InitialCondition& datum, const Frame& reflected_frame) {
    const Frame& f = datum.frame;
    if (reflected_frame.n_cell_s != f.n_cell_s || reflected_frame.n_r != f.n_r)
        throw ParameterError("reflected frame does not match the datum's frame");
    InitialCondition out;
    out.frame = reflected_frame;
    out.n_s = datum.n_s;
    out.s_min = -(datum.s_min + (datum.n_s - 1) * f.h_s);
    out.degenerate = datum.degenerate;
    out.values.resize(datum.values.size());
    for (int j = 0; j < f.n_r; ++j) {
        const int jr = (f.n_r - j) % f.n_r;
        for (int i = 0; i < datum.n_s; ++i) {
            const int ir = datum.n_s - 1 - i;
            out.values[static_cast<std::size_t>(jr) * out.n_s + ir] =
                -datum.values[static_cast<std::size_t>(j) * datum.n_s + i];
        }
    }
    return out;
}

SpreadingResult measure_spreading_speed(const ProblemSpec& spec, const InitialCondition& datum,
                                        double level, const SpreadingOptions& options) {
    if (datum.degenerate)
        throw MeasurementError("degenerate datum (delta = 0): nothing spreads");
    if (!(options.t_max > 0.0 && options.sample_dt > 0.0))
        throw ParameterError("spreading run needs positive t_max and sample_dt");
    const Frame& fr = datum.frame;
    const Domain d(spec, fr, datum.s_min, datum.n_s, Boundary::continuation(), Boundary::continuation());
    const double P = fr.period_s();
    const double span = (d.n_s() - 1) * fr.h_s;

    FieldState st{datum.values, 0.0};
    const double t_fit = (1.0 - options.fit_fraction) * options.t_max;
    double offset = 0.0;
    SpreadingResult out;
    std::vector<double> ts, xs;
    const int samples = static_cast<int>(std::lround(options.t_max / options.sample_dt));
    for (int k = 1; k <= samples; ++k) {
        st = evolve(spec, d, std::move(st), options.sample_dt, options.stepper);
        const auto x = crossing(st.values, d, level);
        // The datum may need a transient before its upper part reaches the level.
        if (!x && out.trajectory.empty() && st.time < t_fit - 1e-9) continue;
        if (!x) throw MeasurementError("level " + std::to_string(level) + " is not crossed at t = " +
                                       std::to_string(st.time));
        const double rel = (*x - d.s_min()) / span;
        if (rel < 0.05 || rel > 0.95)
            throw TruncationError("front left the spreading window; widen the window");
        out.trajectory.push_back({st.time, *x + offset, level});
        ts.push_back(st.time);
        xs.push_back(*x + offset);
        if (rel > 0.6 || rel < 0.3) {
            const int cells = static_cast<int>(std::lround((rel - 0.45) * span / P));
            if (cells != 0) {
                shift_window(st.values, d, cells, datum.values, options.refill_left,
                             options.refill_right);
                offset += cells * P;
            }
        }
    }

    std::vector<double> tf, xf;
    for (std::size_t k = 0; k < ts.size(); ++k)
        if (ts[k] >= t_fit - 1e-9) {
            tf.push_back(ts[k]);
            xf.push_back(xs[k]);
        }
    if (tf.size() < 4) throw MeasurementError("too few samples in the fit window");
    const LineFit all = fit_line(tf, xf);
    const std::size_t half = tf.size() / 2;
    const LineFit first = fit_line({tf.begin(), tf.begin() + half}, {xf.begin(), xf.begin() + half});
    const LineFit second = fit_line({tf.begin() + half, tf.end()}, {xf.begin() + half, xf.end()});
    const double radius = 2.0 * all.stderr_slope + 0.5 * std::abs(second.slope - first.slope);

    SpeedEstimate& e = out.estimate;
    e.value = all.slope;
    e.lower = all.slope - radius;
    e.upper = all.slope + radius;
    e.method = SpeedMethod::direct_spreading;
    e.grid.h_s = fr.h_s;
    e.grid.h_r = fr.h_r;
    e.grid.tau = options.sample_dt;
    e.grid.dt_max = options.stepper.dt_max;
    e.grid.window_min = datum.s_min;
    e.grid.window_max = datum.s_min + span;
    return out;
}

void write_trajectory_csv(const std::string& path, const SpreadingResult& result) {
    std::ofstream os(path);
    if (!os) throw ConfigurationError("cannot open " + path + " for writing");
    os.precision(12);
    os << "t,X,level\n";
    for (const auto& r : result.trajectory) os << r[0] << ',' << r[1] << ',' << r[2] << '\n';
}

}  // namespace frontlab
