#include "frontlab/stepper.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

// Factorization of one (possibly cyclic) tridiagonal line system
//   a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i,
// where for cyclic systems a_0 couples x_{n-1} and c_{n-1} couples x_0.
class LineFactor {
public:
    // Optional couplings of the first row to column `first_col` and of the last
    // row to column `last_col` (values 0 disable them), handled by a rank-2 update.
    void build(std::vector<double> a, std::vector<double> b, std::vector<double> c, bool cyclic,
               int first_col = 0, double first_val = 0.0, int last_col = 0,
               double last_val = 0.0) {
        n_ = static_cast<int>(b.size());
        cyclic_ = cyclic && n_ > 1;
        if (cyclic_) {
            beta_ = a[0];
            alpha_ = c[n_ - 1];
            gamma_ = -b[0];
            b[0] -= gamma_;
            b[n_ - 1] -= alpha_ * beta_ / gamma_;
            a[0] = 0.0;
            c[n_ - 1] = 0.0;
        } else if (n_ == 1) {
            a[0] = c[0] = 0.0;
        }
        a_ = std::move(a);
        cp_.assign(n_, 0.0);
        inv_.assign(n_, 0.0);
        inv_[0] = 1.0 / b[0];
        cp_[0] = c[0] * inv_[0];
        for (int i = 1; i < n_; ++i) {
            inv_[i] = 1.0 / (b[i] - a_[i] * cp_[i - 1]);
            cp_[i] = c[i] * inv_[i];
        }
        if (cyclic_) {
            z_.assign(n_, 0.0);
            z_[0] = gamma_;
            z_[n_ - 1] = alpha_;
            thomas(z_.data(), 1);
            denom_ = 1.0 + z_[0] + beta_ * z_[n_ - 1] / gamma_;
        }
        extra_ = !cyclic_ && (first_val != 0.0 || last_val != 0.0);
        if (extra_) {
            col_ = {first_col, last_col};
            z0_.assign(n_, 0.0);
            z1_.assign(n_, 0.0);
            z0_[0] = first_val;
            z1_[n_ - 1] = last_val;
            thomas(z0_.data(), 1);
            thomas(z1_.data(), 1);
            s_[0] = 1.0 + z0_[col_[0]];
            s_[1] = z1_[col_[0]];
            s_[2] = z0_[col_[1]];
            s_[3] = 1.0 + z1_[col_[1]];
        }
    }

    // Solves in place on a strided line.
    void solve(double* x, std::ptrdiff_t stride) const {
        thomas(x, stride);
        if (cyclic_) {
            const double fact = (x[0] + beta_ * x[(n_ - 1) * stride] / gamma_) / denom_;
            for (int i = 0; i < n_; ++i) x[i * stride] -= fact * z_[i];
        }
        if (extra_) {
            const double y0 = x[col_[0] * stride], y1 = x[col_[1] * stride];
            const double det = s_[0] * s_[3] - s_[1] * s_[2];
            const double w0 = (s_[3] * y0 - s_[1] * y1) / det;
            const double w1 = (s_[0] * y1 - s_[2] * y0) / det;
            for (int i = 0; i < n_; ++i) x[i * stride] -= w0 * z0_[i] + w1 * z1_[i];
        }
    }

private:
    void thomas(double* x, std::ptrdiff_t stride) const {
        x[0] *= inv_[0];
        for (int i = 1; i < n_; ++i)
            x[i * stride] = (x[i * stride] - a_[i] * x[(i - 1) * stride]) * inv_[i];
        for (int i = n_ - 2; i >= 0; --i) x[i * stride] -= cp_[i] * x[(i + 1) * stride];
    }

    int n_ = 0;
    bool cyclic_ = false, extra_ = false;
    double alpha_ = 0.0, beta_ = 0.0, gamma_ = 1.0, denom_ = 1.0;
    std::array<int, 2> col_{0, 0};
    std::array<double, 4> s_{1.0, 0.0, 0.0, 1.0};
    std::vector<double> a_, cp_, inv_, z_, z0_, z1_;
};

// Backward-Euler diffusion for a fixed time step: one longitudinal solve per
// transverse line followed by one transverse solve per longitudinal column.
class ImplicitDiffusion {
public:
    ImplicitDiffusion(const Domain& d, double dt) : domain_(d), dt_(dt) {
        const int ns = d.n_s(), nr = d.n_r();
        const auto& ks = d.ks();
        const bool periodic = d.left().kind == BoundaryKind::periodic;
        s_lines_.resize(nr);
        left_coef_.assign(nr, 0.0);
        right_coef_.assign(nr, 0.0);
        for (int j = 0; j < nr; ++j) {
            const double* k = ks.data() + static_cast<std::size_t>(j) * (ns + 1);
            std::vector<double> a(ns), b(ns), c(ns);
            // Continuation ghosts repeat the node one supercell inwards.
            const int p = d.frame().n_cell_s;
            double first_val = 0.0, last_val = 0.0;
            for (int i = 0; i < ns; ++i) {
                double kl = k[i], kr = k[i + 1];
                if (!periodic) {
                    if (i == 0) {
                        if (d.left().kind == BoundaryKind::neumann) kl = 0.0;
                        if (d.left().kind == BoundaryKind::continuation) first_val = -dt * kl;
                        left_coef_[j] = dt * kl;
                    }
                    if (i == ns - 1) {
                        if (d.right().kind == BoundaryKind::neumann) kr = 0.0;
                        if (d.right().kind == BoundaryKind::continuation) last_val = -dt * kr;
                        right_coef_[j] = dt * kr;
                    }
                }
                a[i] = (i == 0 && !periodic) ? 0.0 : -dt * kl;
                c[i] = (i == ns - 1 && !periodic) ? 0.0 : -dt * kr;
                b[i] = 1.0 + dt * (kl + kr);
            }
            if (periodic && ns == 1) b[0] = 1.0;
            s_lines_[j].build(std::move(a), std::move(b), std::move(c), periodic, p - 1, first_val,
                              ns - p, last_val);
        }
        if (nr > 1) {
            const auto& kr = d.kr();
            r_lines_.resize(ns);
            for (int i = 0; i < ns; ++i) {
                std::vector<double> a(nr), b(nr), c(nr);
                for (int j = 0; j < nr; ++j) {
                    const double lo = kr[static_cast<std::size_t>((j + nr - 1) % nr) * ns + i];
                    const double hi = kr[static_cast<std::size_t>(j) * ns + i];
                    a[j] = -dt * lo;
                    c[j] = -dt * hi;
                    b[j] = 1.0 + dt * (lo + hi);
                }
                r_lines_[i].build(std::move(a), std::move(b), std::move(c), true);
            }
        }
    }

    void apply(std::vector<double>& u) const {
        const int ns = domain_.n_s(), nr = domain_.n_r();
        const bool dl = domain_.left().kind == BoundaryKind::dirichlet;
        const bool dr = domain_.right().kind == BoundaryKind::dirichlet;
        for (int j = 0; j < nr; ++j) {
            double* line = u.data() + static_cast<std::size_t>(j) * ns;
            if (dl) line[0] += left_coef_[j] * domain_.left().ghost[j];
            if (dr) line[ns - 1] += right_coef_[j] * domain_.right().ghost[j];
            s_lines_[j].solve(line, 1);
        }
        if (nr > 1) {
            for (int i = 0; i < ns; ++i) r_lines_[i].solve(u.data() + i, ns);
        }
    }

private:
    const Domain& domain_;
    double dt_;
    std::vector<LineFactor> s_lines_, r_lines_;
    std::vector<double> left_coef_, right_coef_;
};

void check_guard(const ProblemSpec& spec, const Domain& domain, const std::vector<double>& u,
                 double time, double guard) {
    const double lo = spec.u_floor - guard, hi = spec.u_ceiling + guard;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!(u[k] >= lo && u[k] <= hi)) {
            const int i = static_cast<int>(k % domain.n_s());
            const int j = static_cast<int>(k / domain.n_s());
            throw DivergenceError("solution left the guard band (value " + std::to_string(u[k]) +
                                      ") at t = " + std::to_string(time),
                                  time, domain.s(i), j * domain.frame().h_r);
        }
    }
}

int substeps(double duration, double dt) {
    return std::max(1, static_cast<int>(std::ceil(duration / dt - 1e-9)));
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

Domain::Domain(const ProblemSpec& spec, const Frame& frame, double s_min, int n_s, Boundary left,
               Boundary right)
    : frame_(frame), s_min_(s_min), n_s_(n_s), left_(std::move(left)), right_(std::move(right)) {
    if (n_s < 1) throw ParameterError("domain needs at least one longitudinal node");
    if ((left_.kind == BoundaryKind::periodic) != (right_.kind == BoundaryKind::periodic))
        throw ParameterError("periodic longitudinal boundaries must be periodic on both sides");
    if ((left_.kind == BoundaryKind::continuation || right_.kind == BoundaryKind::continuation) &&
        n_s < frame_.n_cell_s)
        throw ParameterError("continuation boundaries need at least one supercell of nodes");
    check_boundary(left_);
    check_boundary(right_);
    const int nr = frame_.n_r;
    const double hs2 = frame_.h_s * frame_.h_s, hr2 = frame_.h_r * frame_.h_r;
    points_.resize(static_cast<std::size_t>(n_s) * nr);
    std::vector<double> a_ss(static_cast<std::size_t>(n_s + 2) * nr);
    std::vector<double> a_rr(points_.size());
    for (int j = 0; j < nr; ++j) {
        for (int i = -1; i <= n_s; ++i) {
            const Vec2 x = frame_.point(s(i), j * frame_.h_r);
            const Mat2 A = spec.diffusion(x);
            const double ass = quad(A, frame_.e, frame_.e);
            if (!(ass > 0.0)) throw ConfigurationError("diffusion is not positive definite");
            a_ss[static_cast<std::size_t>(j) * (n_s + 2) + (i + 1)] = ass;
            if (i >= 0 && i < n_s) {
                points_[index(i, j)] = x;
                a_rr[index(i, j)] = quad(A, frame_.e_perp, frame_.e_perp);
            }
        }
    }
    const bool periodic = left_.kind == BoundaryKind::periodic;
    ks_.assign(static_cast<std::size_t>(n_s + 1) * nr, 0.0);
    for (int j = 0; j < nr; ++j) {
        const double* a = a_ss.data() + static_cast<std::size_t>(j) * (n_s + 2);
        double* k = ks_.data() + static_cast<std::size_t>(j) * (n_s + 1);
        for (int f = 0; f <= n_s; ++f) k[f] = harmonic(a[f], a[f + 1]) / hs2;
        if (periodic) k[0] = k[n_s] = harmonic(a[n_s], a[1]) / hs2;
    }
    kr_.assign(points_.size(), 0.0);
    if (nr > 1) {
        for (int j = 0; j < nr; ++j)
            for (int i = 0; i < n_s; ++i)
                kr_[index(i, j)] = harmonic(a_rr[index(i, j)], a_rr[index(i, (j + 1) % nr)]) / hr2;
    }
}

Domain Domain::cell(const ProblemSpec& spec, const CellLattice& lattice) {
    Frame fr;
    fr.dimension = spec.dimension;
    fr.e = {1.0, 0.0};
    fr.e_perp = {0.0, 1.0};
    fr.h_s = lattice.h[0];
    fr.h_r = lattice.h[1];
    fr.n_cell_s = lattice.n[0];
    fr.n_r = lattice.n[1];
    for (int i = 0; i < lattice.n[0]; ++i)
        for (int j = 0; j < lattice.n[1]; ++j)
            if (std::abs(spec.diffusion(lattice.point(i, j)).xy) > 1e-12)
                throw ConfigurationError("cell solver requires a diagonal diffusion matrix");
    return Domain(spec, fr, 0.0, lattice.n[0], Boundary::periodic(), Boundary::periodic());
}

void Domain::check_boundary(const Boundary& b) const {
    if (b.kind == BoundaryKind::dirichlet && b.ghost.size() != static_cast<std::size_t>(frame_.n_r))
        throw ParameterError("Dirichlet boundary needs one value per transverse line");
}

void Domain::set_left(Boundary b) {
    if (b.kind != left_.kind) throw ParameterError("boundary kind cannot change");
    check_boundary(b);
    left_ = std::move(b);
}

void Domain::set_right(Boundary b) {
    if (b.kind != right_.kind) throw ParameterError("boundary kind cannot change");
    check_boundary(b);
    right_ = std::move(b);
}

std::vector<std::size_t> Domain::sample_nodes() const {
    std::vector<std::size_t> out;
    const int ni = std::min(n_s_, frame_.n_cell_s);
    for (int j = 0; j < frame_.n_r; ++j)
        for (int i = 0; i < ni; ++i) out.push_back(index(i, j));
    return out;
}

// ---------------------------------------------------------------------------
// Time stepping

double stable_time_step(const ProblemSpec& spec, const Domain& domain,
                        const std::vector<double>& values, const StepperOptions& options) {
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = std::max(*lo_it, spec.u_floor), hi = std::min(*hi_it, spec.u_ceiling);
    double K = 0.0;
    constexpr int nu = 16;
    for (std::size_t node : domain.sample_nodes()) {
        const Vec2& x = domain.points()[node];
        for (int k = 0; k <= nu; ++k) {
            const double u = hi > lo ? lo + (hi - lo) * k / nu : lo;
            K = std::max(K, std::abs(spec.rate_du(x, u)));
        }
    }
    double dt = options.dt_max;
    if (K > 0.0) dt = std::min(dt, options.reaction_safety / K);
    return dt;
}

FieldState evolve(const ProblemSpec& spec, const Domain& domain, FieldState state,
                  double duration, const StepperOptions& options) {
    if (!(duration > 0.0)) throw ParameterError("evolution duration must be positive");
    if (state.values.size() != domain.size())
        throw ParameterError("state does not live on the domain lattice");
    const int n = substeps(duration, stable_time_step(spec, domain, state.values, options));
    const double dt = duration / n;
    const ImplicitDiffusion diffusion(domain, dt);
    const auto& pts = domain.points();
    auto& u = state.values;
    const double t0 = state.time;
    check_guard(spec, domain, u, t0, options.guard);
    for (int step = 0; step < n; ++step) {
        for (std::size_t k = 0; k < u.size(); ++k) u[k] += dt * spec.rate(pts[k], u[k]);
        diffusion.apply(u);
        check_guard(spec, domain, u, t0 + (step + 1) * dt, options.guard);
    }
    state.time = t0 + duration;
    return state;
}

FieldState evolve_linearized(const ProblemSpec& spec, const Domain& domain,
                             const std::vector<double>& base, FieldState w, double duration,
                             const StepperOptions& options) {
    if (!(duration > 0.0)) throw ParameterError("evolution duration must be positive");
    if (base.size() != domain.size() || w.values.size() != domain.size())
        throw ParameterError("linearization data does not live on the domain lattice");
    const auto& pts = domain.points();
    std::vector<double> rate(base.size());
    double K = 0.0;
    for (std::size_t k = 0; k < base.size(); ++k) {
        rate[k] = spec.rate_du(pts[k], base[k]);
        K = std::max(K, std::abs(rate[k]));
    }
    double dt = options.dt_max;
    if (K > 0.0) dt = std::min(dt, options.reaction_safety / K);
    const int n = substeps(duration, dt);
    dt = duration / n;
    std::vector<double> growth(rate.size());
    for (std::size_t k = 0; k < rate.size(); ++k) growth[k] = std::exp(dt * rate[k]);
    const ImplicitDiffusion diffusion(domain, dt);
    for (int step = 0; step < n; ++step) {
        for (std::size_t k = 0; k < w.values.size(); ++k) w.values[k] *= growth[k];
        diffusion.apply(w.values);
    }
    w.time += duration;
    return w;
}

double energy(const ProblemSpec& spec, const PeriodicField& w) {
    const CellLattice& lat = w.lattice();
    const int n0 = lat.n[0], n1 = lat.n[1];
    std::vector<double> axx(lat.size()), ayy(lat.size());
    for (int j = 0; j < n1; ++j) {
        for (int i = 0; i < n0; ++i) {
            const Mat2 A = spec.diffusion(lat.point(i, j));
            axx[lat.index(i, j)] = A.xx;
            ayy[lat.index(i, j)] = A.yy;
        }
    }
    const double vol = lat.h[0] * lat.h[1];
    double total = 0.0;
    for (int j = 0; j < n1; ++j) {
        for (int i = 0; i < n0; ++i) {
            const std::size_t k = lat.index(i, j);
            double grad = 0.0;
            if (n0 > 1) {
                const std::size_t kn = lat.index((i + 1) % n0, j);
                const double d = (w.values()[kn] - w.values()[k]) / lat.h[0];
                grad += harmonic(axx[k], axx[kn]) * d * d;
            }
            if (n1 > 1) {
                const std::size_t kn = lat.index(i, (j + 1) % n1);
                const double d = (w.values()[kn] - w.values()[k]) / lat.h[1];
                grad += harmonic(ayy[k], ayy[kn]) * d * d;
            }
            total += vol * (0.5 * grad - spec.primitive(lat.point(i, j), w.values()[k]));
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Snapshots

namespace {

template <class T>
void put_le(std::ofstream& os, T v) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::ifstream& is) {
    unsigned char bytes[sizeof(T)];
    is.read(reinterpret_cast<char*>(bytes), sizeof(T));
    if (!is) throw ParameterError("truncated raw snapshot");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T v;
    std::memcpy(&v, bytes, sizeof(T));
    return v;
}

constexpr char kMagic[8] = {'F', 'R', 'N', 'T', 'L', 'A', 'B', '1'};

}  // namespace

void write_raw(const std::string& path, const RawArray& array) {
    const std::size_t count =
        static_cast<std::size_t>(array.dims[0]) * array.dims[1] * array.dims[2];
    if (count != array.values.size()) throw ParameterError("raw array size mismatch");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigurationError("cannot open " + path + " for writing");
    os.write(kMagic, 8);
    const std::uint32_t rank = array.dims[2] > 1 ? 3 : (array.dims[1] > 1 ? 2 : 1);
    put_le(os, rank);
    for (auto d : array.dims) put_le(os, d);
    for (auto h : array.spacing) put_le(os, h);
    put_le(os, array.origin);
    put_le(os, array.time);
    put_le(os, std::uint64_t{0});
    for (double v : array.values) put_le(os, v);
}

RawArray read_raw(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigurationError("cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) throw ParameterError("not a raw snapshot");
    RawArray a;
    (void)get_le<std::uint32_t>(is);
    for (auto& d : a.dims) d = get_le<std::uint32_t>(is);
    for (auto& h : a.spacing) h = get_le<double>(is);
    a.origin = get_le<double>(is);
    a.time = get_le<double>(is);
    (void)get_le<std::uint64_t>(is);
    a.values.resize(static_cast<std::size_t>(a.dims[0]) * a.dims[1] * a.dims[2]);
    for (auto& v : a.values) v = get_le<double>(is);
    return a;
}

void write_field_csv(const std::string& path, const Domain& domain, const FieldState& state) {
    std::ofstream os(path);
    if (!os) throw ConfigurationError("cannot open " + path + " for writing");
    os.precision(17);
    os << "s,r,x,y,value\n";
    for (int j = 0; j < domain.n_r(); ++j) {
        for (int i = 0; i < domain.n_s(); ++i) {
            const Vec2& x = domain.points()[domain.index(i, j)];
            os << domain.s(i) << ',' << j * domain.frame().h_r << ',' << x[0] << ',' << x[1]
               << ',' << state.values[domain.index(i, j)] << '\n';
        }
    }
}

}  // namespace frontlab
