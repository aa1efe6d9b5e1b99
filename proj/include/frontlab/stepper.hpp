#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "frontlab/geometry.hpp"
#include "frontlab/model.hpp"

namespace frontlab {

enum class BoundaryKind { dirichlet, neumann, periodic, continuation };

// Longitudinal boundary. Dirichlet boundaries carry one ghost value per
// transverse line, placed one grid step outside the strip. Continuation
// boundaries extend the solution periodically by one supercell, which is exact
// when the far field is supercell-periodic (it reduces to Neumann when the
// supercell has a single longitudinal node).
struct Boundary {
    BoundaryKind kind = BoundaryKind::neumann;
    std::vector<double> ghost;

    static Boundary dirichlet(std::vector<double> values) {
        return {BoundaryKind::dirichlet, std::move(values)};
    }
    static Boundary neumann() { return {BoundaryKind::neumann, {}}; }
    static Boundary periodic() { return {BoundaryKind::periodic, {}}; }
    static Boundary continuation() { return {BoundaryKind::continuation, {}}; }
};

struct StepperOptions {
    double dt_max = 1.0 / 32.0;
    // Sub-steps satisfy dt <= reaction_safety / max |f_u|.
    double reaction_safety = 0.5;
    // Allowed excursion outside [u_floor, u_ceiling] before aborting.
    double guard = 0.1;
};

// Lattice of a strip along frame.e (nodes s_i = s_min + i h_s) times the
// periodic transverse lattice, with precomputed medium coefficients.
class Domain {
public:
    Domain(const ProblemSpec& spec, const Frame& frame, double s_min, int n_s, Boundary left,
           Boundary right);

    // Cell-periodic domain on a cell lattice (periodic in both directions).
    static Domain cell(const ProblemSpec& spec, const CellLattice& lattice);

    const Frame& frame() const { return frame_; }
    int n_s() const { return n_s_; }
    int n_r() const { return frame_.n_r; }
    std::size_t size() const { return points_.size(); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_s_ + i; }
    double s_min() const { return s_min_; }
    double s(int i) const { return s_min_ + i * frame_.h_s; }
    const std::vector<Vec2>& points() const { return points_; }
    const Boundary& left() const { return left_; }
    const Boundary& right() const { return right_; }
    void set_left(Boundary b);
    void set_right(Boundary b);

    // Face conductances over h^2. ks: face i - 1/2 of line j at j * (n_s + 1) + i.
    // kr: face j + 1/2 at column i stored at j * n_s + i.
    const std::vector<double>& ks() const { return ks_; }
    const std::vector<double>& kr() const { return kr_; }

    // One node per distinct medium site (one supercell worth of nodes).
    std::vector<std::size_t> sample_nodes() const;

private:
    void check_boundary(const Boundary& b) const;

    Frame frame_;
    double s_min_ = 0.0;
    int n_s_ = 0;
    Boundary left_, right_;
    std::vector<Vec2> points_;
    std::vector<double> ks_, kr_;
};

struct FieldState {
    std::vector<double> values;
    double time = 0.0;
};

// Advances the state by `duration` with implicit (backward Euler) diffusion,
// split into longitudinal and transverse line solves, and explicit reaction.
// Throws DivergenceError if the solution leaves the guard band.
FieldState evolve(const ProblemSpec& spec, const Domain& domain, FieldState state,
                  double duration, const StepperOptions& options = {});

// Linearization dw/dt = div(A grad w) + f_u(x, p(x)) w around the frozen
// state `base` (values on the domain nodes). The zero-order term is integrated
// exactly, so spatially constant modes grow like exp(f_u t).
FieldState evolve_linearized(const ProblemSpec& spec, const Domain& domain,
                             const std::vector<double>& base, FieldState w, double duration,
                             const StepperOptions& options = {});

// Time step used for a given state (exposed for diagnostics and tests).
double stable_time_step(const ProblemSpec& spec, const Domain& domain,
                        const std::vector<double>& values, const StepperOptions& options);

// Discrete E(w) = sum over the cell of (grad w . A grad w / 2 - F(x, w)) times the cell volume.
double energy(const ProblemSpec& spec, const PeriodicField& w);

// Snapshot output. The raw format is a 64-byte little-endian header
// ("FRNTLAB1", uint32 rank, uint32 dims[3], double spacing[2], double origin,
// double time, 8 reserved bytes) followed by float64 values, first index fastest.
struct RawArray {
    std::array<std::uint32_t, 3> dims{1, 1, 1};
    std::array<double, 2> spacing{1.0, 1.0};
    double origin = 0.0;
    double time = 0.0;
    std::vector<double> values;
};

void write_raw(const std::string& path, const RawArray& array);
RawArray read_raw(const std::string& path);
void write_field_csv(const std::string& path, const Domain& domain, const FieldState& state);

}  // namespace frontlab
