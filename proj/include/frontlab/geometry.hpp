#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace frontlab {

struct ProblemSpec;

using Vec2 = std::array<double, 2>;

// Symmetric 2x2 matrix. One-dimensional problems only use xx.
struct Mat2 {
    double xx = 1.0;
    double xy = 0.0;
    double yy = 1.0;
};

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double quad(const Mat2& A, const Vec2& u, const Vec2& v) {
    return u[0] * (A.xx * v[0] + A.xy * v[1]) + u[1] * (A.xy * v[0] + A.yy * v[1]);
}

// Propagation direction given by an integer lattice vector; e = (m*L1, n*L2) normalized.
struct Direction {
    int m = 1;
    int n = 0;
};

// Uniform lattice on one periodicity cell. Axes along which the medium is
// invariant collapse to a single node.
struct CellLattice {
    int dimension = 1;
    std::array<int, 2> n{1, 1};
    std::array<double, 2> h{1.0, 1.0};

    std::size_t size() const { return static_cast<std::size_t>(n[0]) * n[1]; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n[0] + i; }
    Vec2 point(int i, int j) const { return {i * h[0], j * h[1]}; }
    double length(int axis) const { return n[axis] * h[axis]; }
};

// Builds the cell lattice of a problem with spacing close to h (exactly dividing each period).
CellLattice make_cell_lattice(const ProblemSpec& spec, double h);

class PeriodicField {
public:
    PeriodicField() = default;
    PeriodicField(CellLattice lattice, double value);
    PeriodicField(CellLattice lattice, std::vector<double> values);

    const CellLattice& lattice() const { return lattice_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator()(int i, int j) const { return values_[lattice_.index(i, j)]; }
    double& operator()(int i, int j) { return values_[lattice_.index(i, j)]; }

    // Bilinear periodic interpolation at a physical point.
    double at(const Vec2& x) const;
    double max() const;
    double min() const;
    double mean() const;

private:
    CellLattice lattice_;
    std::vector<double> values_;
};

double sup_distance(const PeriodicField& a, const PeriodicField& b);

// Rotated computational frame: s = x.e runs along the direction of propagation,
// r = x.e_perp is periodic with period `period_r`. A supercell is
// [0, period_s) x [0, period_r) with n_cell_s x n_r nodes.
struct Frame {
    int dimension = 1;
    Direction direction;
    Vec2 e{1.0, 0.0};
    Vec2 e_perp{0.0, 1.0};
    double h_s = 1.0;
    double h_r = 1.0;
    int n_cell_s = 1;
    int n_r = 1;

    double period_s() const { return n_cell_s * h_s; }
    double period_r() const { return n_r * h_r; }
    int sites() const { return n_cell_s * n_r; }
    Vec2 point(double s, double r) const {
        return {s * e[0] + r * e_perp[0], s * e[1] + r * e_perp[1]};
    }
};

// Throws ConfigurationError when the direction is incompatible with the cell
// (non-square cell for an oblique direction) or when A has an off-diagonal
// part in the rotated frame.
Frame make_frame(const ProblemSpec& spec, Direction direction, double h);

// Samples a cell field on the supercell sites of a frame, index j * n_cell_s + m.
std::vector<double> cell_to_frame(const PeriodicField& field, const Frame& frame);

// Inverse of cell_to_frame (bilinear on the supercell for oblique directions).
PeriodicField frame_to_cell(const std::vector<double>& sites, const Frame& frame,
                            const CellLattice& lattice);

}  // namespace frontlab
