#include "frontlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "frontlab/errors.hpp"
#include "frontlab/model.hpp"

namespace frontlab {

namespace {

int divisions(double period, double h) {
    return std::max(1, static_cast<int>(std::lround(period / h)));
}

int wrap(long i, int n) {
    long r = i % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

// Bilinear periodic interpolation on an n0 x n1 array stored row-major in axis 0.
double bilinear(const std::vector<double>& v, int n0, int n1, double t0, double t1) {
    const double f0 = std::floor(t0), f1 = std::floor(t1);
    const double w0 = n0 == 1 ? 0.0 : t0 - f0;
    const double w1 = n1 == 1 ? 0.0 : t1 - f1;
    const int i0 = wrap(static_cast<long>(f0), n0), i1 = wrap(i0 + 1, n0);
    const int j0 = wrap(static_cast<long>(f1), n1), j1 = wrap(j0 + 1, n1);
    auto at = [&](int i, int j) { return v[static_cast<std::size_t>(j) * n0 + i]; };
    return (1 - w0) * (1 - w1) * at(i0, j0) + w0 * (1 - w1) * at(i1, j0) +
           (1 - w0) * w1 * at(i0, j1) + w0 * w1 * at(i1, j1);
}

}  // namespace

CellLattice make_cell_lattice(const ProblemSpec& spec, double h) {
    if (!(h > 0.0)) throw ParameterError("lattice spacing must be positive");
    CellLattice lat;
    lat.dimension = spec.dimension;
    for (int a = 0; a < 2; ++a) {
        if (a >= spec.dimension || spec.invariant[a]) {
            lat.n[a] = 1;
            lat.h[a] = 1.0;
        } else {
            lat.n[a] = divisions(spec.period[a], h);
            lat.h[a] = spec.period[a] / lat.n[a];
        }
    }
    return lat;
}

PeriodicField::PeriodicField(CellLattice lattice, double value)
    : lattice_(lattice), values_(lattice.size(), value) {}

PeriodicField::PeriodicField(CellLattice lattice, std::vector<double> values)
    : lattice_(lattice), values_(std::move(values)) {
    if (values_.size() != lattice_.size())
        throw ParameterError("periodic field size does not match its lattice");
}

double PeriodicField::at(const Vec2& x) const {
    return bilinear(values_, lattice_.n[0], lattice_.n[1], x[0] / lattice_.h[0],
                    x[1] / lattice_.h[1]);
}

double PeriodicField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double PeriodicField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double PeriodicField::mean() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) / values_.size();
}

double sup_distance(const PeriodicField& a, const PeriodicField& b) {
    if (a.values().size() != b.values().size())
        throw ParameterError("fields live on different lattices");
    double d = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
    return d;
}

Frame make_frame(const ProblemSpec& spec, Direction direction, double h) {
    if (!(h > 0.0)) throw ParameterError("grid spacing must be positive");
    int m = direction.m, n = direction.n;
    if (m == 0 && n == 0) throw ParameterError("direction must be nonzero");
    const int g = std::gcd(std::abs(m), std::abs(n));
    m /= g;
    n /= g;

    Frame fr;
    fr.dimension = spec.dimension;
    fr.direction = {m, n};
    double period_s = 0.0, period_r = 0.0;
    bool collapse_s = false, collapse_r = false;

    if (spec.dimension == 1) {
        if (n != 0) throw ConfigurationError("one-dimensional problems only have directions +-1");
        const double sg = m > 0 ? 1.0 : -1.0;
        fr.e = {sg, 0.0};
        fr.e_perp = {0.0, sg};
        period_s = spec.period[0];
        collapse_s = spec.invariant[0];
        collapse_r = true;
    } else if (n == 0) {
        const double sg = m > 0 ? 1.0 : -1.0;
        fr.e = {sg, 0.0};
        fr.e_perp = {0.0, sg};
        period_s = spec.period[0];
        period_r = spec.period[1];
        collapse_s = spec.invariant[0];
        collapse_r = spec.invariant[1];
    } else if (m == 0) {
        const double sg = n > 0 ? 1.0 : -1.0;
        fr.e = {0.0, sg};
        fr.e_perp = {-sg, 0.0};
        period_s = spec.period[1];
        period_r = spec.period[0];
        collapse_s = spec.invariant[1];
        collapse_r = spec.invariant[0];
    } else {
        double p0 = spec.period[0], p1 = spec.period[1];
        if (spec.invariant[0]) p0 = p1;
        if (spec.invariant[1]) p1 = p0;
        if (std::abs(p0 - p1) > 1e-12 * std::max(p0, p1))
            throw ConfigurationError(
                "oblique directions require a square periodicity cell");
        const double norm = std::hypot(static_cast<double>(m), static_cast<double>(n));
        fr.e = {m / norm, n / norm};
        fr.e_perp = {-fr.e[1], fr.e[0]};
        period_s = period_r = p0 * norm;
        collapse_s = collapse_r = spec.homogeneous();
    }

    if (collapse_s) {
        fr.n_cell_s = 1;
        fr.h_s = h;
    } else {
        fr.n_cell_s = divisions(period_s, h);
        fr.h_s = period_s / fr.n_cell_s;
    }
    if (collapse_r) {
        fr.n_r = 1;
        fr.h_r = 1.0;
    } else {
        fr.n_r = divisions(period_r, h);
        fr.h_r = period_r / fr.n_r;
    }

    if (spec.dimension == 2) {
        const int ns = std::max(fr.n_cell_s, 4), nr = std::max(fr.n_r, 4);
        for (int i = 0; i < ns; ++i) {
            for (int j = 0; j < nr; ++j) {
                const Vec2 x = fr.point(i * fr.period_s() / ns, j * fr.period_r() / nr);
                const Mat2 A = spec.diffusion(x);
                if (std::abs(quad(A, fr.e, fr.e_perp)) > 1e-12)
                    throw ConfigurationError(
                        "diffusion has a cross term in the propagation frame; only frames "
                        "in which A is diagonal are supported");
            }
        }
    }
    return fr;
}

std::vector<double> cell_to_frame(const PeriodicField& field, const Frame& frame) {
    std::vector<double> out(static_cast<std::size_t>(frame.sites()));
    for (int j = 0; j < frame.n_r; ++j)
        for (int m = 0; m < frame.n_cell_s; ++m)
            out[static_cast<std::size_t>(j) * frame.n_cell_s + m] =
                field.at(frame.point(m * frame.h_s, j * frame.h_r));
    return out;
}

PeriodicField frame_to_cell(const std::vector<double>& sites, const Frame& frame,
                            const CellLattice& lattice) {
    if (sites.size() != static_cast<std::size_t>(frame.sites()))
        throw ParameterError("site vector does not match the frame");
    PeriodicField out(lattice, 0.0);
    for (int j = 0; j < lattice.n[1]; ++j) {
        for (int i = 0; i < lattice.n[0]; ++i) {
            const Vec2 x = lattice.point(i, j);
            // Round to the nearest lattice coordinate so exact matches stay exact.
            double ts = dot(x, frame.e) / frame.h_s;
            double tr = dot(x, frame.e_perp) / frame.h_r;
            if (std::abs(ts - std::round(ts)) < 1e-9) ts = std::round(ts);
            if (std::abs(tr - std::round(tr)) < 1e-9) tr = std::round(tr);
            out(i, j) = bilinear(sites, frame.n_cell_s, frame.n_r, ts, tr);
        }
    }
    return out;
}

}  // namespace frontlab
