#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdlab {

enum class BoundaryKind { Dirichlet, Neumann };

/// Uniform cell-centered discretization of a box in R^N, N in {1,2,3}.
/// Cell (i,j,k) has its sample point at ((i+1/2)h0, (j+1/2)h1, (k+1/2)h2).
/// Unused axes carry one cell of unit extent and are skipped by loops.
struct Grid {
    int dim = 1;
    std::array<int, 3> cells{1, 1, 1};
    std::array<double, 3> extents{1.0, 1.0, 1.0};
    BoundaryKind boundary = BoundaryKind::Neumann;

    static Grid make(int dim, std::array<int, 3> cells, std::array<double, 3> extents,
                     BoundaryKind boundary = BoundaryKind::Neumann);

    double spacing(int axis) const { return extents[axis] / cells[axis]; }
    long cell_count() const {
        long n = 1;
        for (int a = 0; a < dim; ++a) n *= cells[a];
        return n;
    }
    /// h^N, the measure of one cell.
    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= spacing(a);
        return v;
    }
    double volume() const {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= extents[a];
        return v;
    }

    long index(const std::array<int, 3>& c) const {
        long idx = 0;
        for (int a = dim - 1; a >= 0; --a) idx = idx * cells[a] + c[a];
        return idx;
    }
    std::array<int, 3> coords(long idx) const {
        std::array<int, 3> c{0, 0, 0};
        for (int a = 0; a < dim; ++a) {
            c[a] = static_cast<int>(idx % cells[a]);
            idx /= cells[a];
        }
        return c;
    }
    std::array<double, 3> center(const std::array<int, 3>& c) const {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < dim; ++a) x[a] = (c[a] + 0.5) * spacing(a);
        return x;
    }
    std::array<double, 3> center(long idx) const { return center(coords(idx)); }

    /// Euclidean distance from a cell center to the nearest boundary face.
    double boundary_distance(const std::array<int, 3>& c) const {
        double d = extents[0];
        for (int a = 0; a < dim; ++a) {
            double x = (c[a] + 0.5) * spacing(a);
            d = std::min({d, x, extents[a] - x});
        }
        return d;
    }

    bool operator==(const Grid&) const = default;
};

/// m-component samples on a grid, stored component-major
/// (component c occupies the contiguous block [c*ncells, (c+1)*ncells)).
class Field {
public:
    Field() = default;
    Field(const Grid& grid, int components, double fill = 0.0);

    static Field sample(const Grid& grid, int components,
                        const std::function<void(const std::array<double, 3>&, std::span<double>)>& f);
    static Field sample_scalar(const Grid& grid,
                               const std::function<double(const std::array<double, 3>&)>& f);

    const Grid& grid() const { return grid_; }
    int components() const { return components_; }
    long cell_count() const { return ncells_; }

    double at(long cell, int c = 0) const { return data_[static_cast<size_t>(c) * ncells_ + cell]; }
    double& at(long cell, int c = 0) { return data_[static_cast<size_t>(c) * ncells_ + cell]; }

    std::span<const double> comp(int c) const {
        return {data_.data() + static_cast<size_t>(c) * ncells_, static_cast<size_t>(ncells_)};
    }
    std::span<double> comp(int c) {
        return {data_.data() + static_cast<size_t>(c) * ncells_, static_cast<size_t>(ncells_)};
    }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    /// Euclidean norm over components at one cell.
    double norm_at(long cell) const;

    bool all_finite() const;

private:
    Grid grid_{};
    int components_ = 0;
    long ncells_ = 0;
    std::vector<double> data_;
};

/// Axis-aligned cube of `side` cells per axis anchored at cell `anchor`.
struct Cube {
    std::array<int, 3> anchor{0, 0, 0};
    int side = 1;

    double measure(const Grid& g) const {
        double m = 1.0;
        for (int a = 0; a < g.dim; ++a) m *= side * g.spacing(a);
        return m;
    }
    long cell_count(const Grid& g) const {
        long n = 1;
        for (int a = 0; a < g.dim; ++a) n *= side;
        return n;
    }
    bool inside(const Grid& g) const {
        if (side < 1) return false;
        for (int a = 0; a < g.dim; ++a)
            if (anchor[a] < 0 || anchor[a] + side > g.cells[a]) return false;
        return true;
    }
    static Cube whole(const Grid& g) {
        int s = g.cells[0];
        for (int a = 1; a < g.dim; ++a) s = std::min(s, g.cells[a]);
        return Cube{{0, 0, 0}, s};
    }
};

/// Index box [lo, hi] per axis (inclusive); the cell-index form of
/// Omega ∩ B_r regions. Cube suprema range over cubes inside this box.
struct IndexBox {
    std::array<int, 3> lo{0, 0, 0};
    std::array<int, 3> hi{0, 0, 0};

    static IndexBox whole(const Grid& g) {
        IndexBox b;
        for (int a = 0; a < g.dim; ++a) {
            b.lo[a] = 0;
            b.hi[a] = g.cells[a] - 1;
        }
        return b;
    }
    static IndexBox of_cube(const Cube& c, const Grid& g) {
        IndexBox b;
        for (int a = 0; a < g.dim; ++a) {
            b.lo[a] = c.anchor[a];
            b.hi[a] = c.anchor[a] + c.side - 1;
        }
        return b;
    }
    /// Cells whose centers lie within sup-norm distance r of `center`,
    /// clipped to the grid.
    static IndexBox around(const Grid& g, const std::array<double, 3>& center, double r);

    int extent(int axis) const { return hi[axis] - lo[axis] + 1; }
    bool empty(const Grid& g) const {
        for (int a = 0; a < g.dim; ++a)
            if (lo[a] > hi[a]) return true;
        return false;
    }
    long cell_count(const Grid& g) const {
        long n = 1;
        for (int a = 0; a < g.dim; ++a) n *= extent(a);
        return n;
    }
};

enum class GradientRule {
    FromBoundaryKind,  // resolve to DirichletZero/NeumannMirror from the grid
    OneSided,          // 3-point one-sided second order at the boundary
    DirichletZero,     // odd reflection through the homogeneous face value
    NeumannMirror,     // even reflection
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Average of f over cube B, one value per component (exact Riemann
/// midpoint sum). Throws std::out_of_range if B is not inside the grid.
std::vector<double> cube_average(const Field& f, const Cube& b);

/// Gradient of an m-component field: result has m*N components, laid out
/// component-major as (c*N + axis). Central differences in the interior;
/// boundary treatment per `rule`. Requires >= 3 cells per active axis.
Field gradient(const Field& f, GradientRule rule = GradientRule::FromBoundaryKind);

/// Divergence of a flux field with m*N components (axis fastest, as
/// produced by `gradient`): result has m components. Adjoint-consistent
/// with `gradient` on compactly supported test functions. Throws on a
/// component count that is not a multiple of N.
Field divergence(const Field& v, GradientRule rule = GradientRule::FromBoundaryKind);

/// Sum of f * weight * h^N over cells; f scalar, weight optional scalar.
double integrate(const Field& f, const Field* weight = nullptr);
double integrate(const Field& f, const IndexBox& region, const Field* weight = nullptr);

struct CutoffField {
    Field omega;
    double grad_constant = 0.0;  // measured sup|D omega| * R
};

enum class CutoffProfile { Cubic, Quintic };

/// C^1 cutoff: 1 on the ball B_{R/2}(center), 0 outside B_R(center),
/// polynomial ramp in between. Throws if R spans fewer than 4 cells.
CutoffField cutoff(const Grid& g, const std::array<double, 3>& center, double radius,
                   CutoffProfile profile = CutoffProfile::Cubic);

struct DifferenceQuotient {
    Field values;
    Field valid;  // 1 where the shifted sample exists, 0 otherwise
};

/// delta_h f = (f(x + step e_axis) - f(x)) / step with step snapped to a
/// whole number of cells; cells whose shifted sample leaves the grid are
/// flagged invalid.
DifferenceQuotient difference_quotient(const Field& f, int axis, double step);

/// Cells (linear indices) whose centers lie within Euclidean distance
/// `radius` of `center`; ties at the boundary are included.
std::vector<long> ball_cells(const Grid& g, const std::array<double, 3>& center, double radius);

}  // namespace cdlab
