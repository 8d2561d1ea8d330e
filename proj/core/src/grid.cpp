#include "cdlab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "cdlab/numerics.hpp"

namespace cdlab {

Grid Grid::make(int dim, std::array<int, 3> cells, std::array<double, 3> extents,
                BoundaryKind boundary) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("Grid: dim must be 1, 2 or 3");
    Grid g;
    g.dim = dim;
    g.boundary = boundary;
    long total = 1;
    for (int a = 0; a < 3; ++a) {
        if (a < dim) {
            if (cells[a] < 1) throw std::invalid_argument("Grid: cells must be positive");
            if (!(extents[a] > 0.0)) throw std::invalid_argument("Grid: extents must be positive");
            g.cells[a] = cells[a];
            g.extents[a] = extents[a];
            total *= cells[a];
        } else {
            g.cells[a] = 1;
            g.extents[a] = 1.0;
        }
    }
    if (total > (1L << 28)) throw std::invalid_argument("Grid: cell count too large");
    return g;
}

Field::Field(const Grid& grid, int components, double fill)
    : grid_(grid),
      components_(components),
      ncells_(grid.cell_count()),
      data_(static_cast<size_t>(components) * grid.cell_count(), fill) {
    if (components < 1) throw std::invalid_argument("Field: components must be >= 1");
}

Field Field::sample(const Grid& grid, int components,
                    const std::function<void(const std::array<double, 3>&, std::span<double>)>& f) {
    Field out(grid, components);
    std::vector<double> tmp(components);
    for (long cell = 0; cell < out.ncells_; ++cell) {
        f(grid.center(cell), tmp);
        for (int c = 0; c < components; ++c) out.at(cell, c) = tmp[c];
    }
    return out;
}

Field Field::sample_scalar(const Grid& grid,
                           const std::function<double(const std::array<double, 3>&)>& f) {
    Field out(grid, 1);
    for (long cell = 0; cell < out.ncells_; ++cell) out.at(cell) = f(grid.center(cell));
    return out;
}

double Field::norm_at(long cell) const {
    double s = 0.0;
    for (int c = 0; c < components_; ++c) s += sqr(at(cell, c));
    return std::sqrt(s);
}

bool Field::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

IndexBox IndexBox::around(const Grid& g, const std::array<double, 3>& center, double r) {
    IndexBox b;
    for (int a = 0; a < g.dim; ++a) {
        double h = g.spacing(a);
        b.lo[a] = std::max(0, static_cast<int>(std::ceil((center[a] - r) / h - 0.5)));
        b.hi[a] = std::min(g.cells[a] - 1, static_cast<int>(std::floor((center[a] + r) / h - 0.5)));
    }
    return b;
}

std::vector<double> cube_average(const Field& f, const Cube& b) {
    const Grid& g = f.grid();
    if (!b.inside(g)) throw std::out_of_range("cube_average: cube not inside grid");
    const int m = f.components();
    std::vector<double> avg(m, 0.0);
    const long count = b.cell_count(g);
    std::array<int, 3> c{0, 0, 0};
    for (int comp = 0; comp < m; ++comp) {
        double sum = 0.0;
        for (int k = 0; k < (g.dim > 2 ? b.side : 1); ++k) {
            c[2] = b.anchor[2] + k;
            for (int j = 0; j < (g.dim > 1 ? b.side : 1); ++j) {
                c[1] = b.anchor[1] + j;
                for (int i = 0; i < b.side; ++i) {
                    c[0] = b.anchor[0] + i;
                    sum += f.at(g.index(c), comp);
                }
            }
        }
        avg[comp] = sum / static_cast<double>(count);
    }
    return avg;
}

namespace {

GradientRule resolve_rule(const Grid& g, GradientRule rule) {
    if (rule != GradientRule::FromBoundaryKind) return rule;
    return g.boundary == BoundaryKind::Dirichlet ? GradientRule::DirichletZero
                                                 : GradientRule::NeumannMirror;
}

// Derivative of one component along one axis into `out`.
void derive_axis(const Field& f, int comp, int axis, GradientRule rule, Field& out, int out_comp) {
    const Grid& g = f.grid();
    const int n = g.cells[axis];
    const double h = g.spacing(axis);
    std::array<int, 3> lim{1, 1, 1};
    for (int a = 0; a < g.dim; ++a) lim[a] = g.cells[a];

    std::array<int, 3> c{0, 0, 0};
    for (c[2] = 0; c[2] < lim[2]; ++c[2])
        for (c[1] = 0; c[1] < lim[1]; ++c[1])
            for (c[0] = 0; c[0] < lim[0]; ++c[0]) {
                const int i = c[axis];
                std::array<int, 3> cm = c, cp = c;
                double d;
                if (i > 0 && i < n - 1) {
                    cm[axis] = i - 1;
                    cp[axis] = i + 1;
                    d = (f.at(g.index(cp), comp) - f.at(g.index(cm), comp)) / (2.0 * h);
                } else {
                    const int dir = (i == 0) ? 1 : -1;  // into the domain
                    std::array<int, 3> c1 = c, c2 = c;
                    c1[axis] = i + dir;
                    c2[axis] = i + 2 * dir;
                    const double f0 = f.at(g.index(c), comp);
                    const double f1 = f.at(g.index(c1), comp);
                    switch (rule) {
                        case GradientRule::OneSided:
                            // difference form of (-3 f0 + 4 f1 - f2)/2h, exact on constants
                            d = dir *
                                (4.0 * (f1 - f0) - (f.at(g.index(c2), comp) - f0)) / (2.0 * h);
                            break;
                        case GradientRule::DirichletZero:
                            // odd reflection: ghost = -f0, face value 0
                            d = dir * (f1 + f0) / (2.0 * h);
                            break;
                        case GradientRule::NeumannMirror:
                        default:
                            // even reflection: ghost = f0
                            d = dir * (f1 - f0) / (2.0 * h);
                            break;
                    }
                }
                out.at(g.index(c), out_comp) = d;
            }
}

}  // namespace

Field gradient(const Field& f, GradientRule rule) {
    const Grid& g = f.grid();
    for (int a = 0; a < g.dim; ++a)
        if (g.cells[a] < 3) throw std::invalid_argument("gradient: needs >= 3 cells per axis");
    rule = resolve_rule(g, rule);
    Field out(g, f.components() * g.dim);
    for (int comp = 0; comp < f.components(); ++comp)
        for (int axis = 0; axis < g.dim; ++axis)
            derive_axis(f, comp, axis, rule, out, comp * g.dim + axis);
    return out;
}

Field divergence(const Field& v, GradientRule rule) {
    const Grid& g = v.grid();
    const int dim = g.dim;
    if (v.components() % dim != 0)
        throw std::invalid_argument("divergence: component count must be a multiple of N");
    for (int a = 0; a < dim; ++a)
        if (g.cells[a] < 3) throw std::invalid_argument("divergence: needs >= 3 cells per axis");
    rule = resolve_rule(g, rule);
    const int m = v.components() / dim;
    Field out(g, m);

    std::array<int, 3> lim{1, 1, 1};
    for (int a = 0; a < dim; ++a) lim[a] = g.cells[a];

    for (int comp = 0; comp < m; ++comp) {
        for (int axis = 0; axis < dim; ++axis) {
            const int vc = comp * dim + axis;
            const int n = g.cells[axis];
            const double h = g.spacing(axis);
            std::array<int, 3> c{0, 0, 0};
            for (c[2] = 0; c[2] < lim[2]; ++c[2])
                for (c[1] = 0; c[1] < lim[1]; ++c[1])
                    for (c[0] = 0; c[0] < lim[0]; ++c[0]) {
                        const int i = c[axis];
                        double d;
                        if (i > 0 && i < n - 1) {
                            std::array<int, 3> cm = c, cp = c;
                            cm[axis] = i - 1;
                            cp[axis] = i + 1;
                            d = (v.at(g.index(cp), vc) - v.at(g.index(cm), vc)) / (2.0 * h);
                        } else {
                            const int dir = (i == 0) ? 1 : -1;
                            std::array<int, 3> c1 = c, c2 = c;
                            c1[axis] = i + dir;
                            c2[axis] = i + 2 * dir;
                            const double v0 = v.at(g.index(c), vc);
                            const double v1 = v.at(g.index(c1), vc);
                            if (rule == GradientRule::NeumannMirror) {
                                // zero-flux boundary face: d = (face_in - 0)/h
                                d = dir * (v0 + v1) / (2.0 * h);
                            } else {
                                d = dir *
                                    (4.0 * (v1 - v0) - (v.at(g.index(c2), vc) - v0)) / (2.0 * h);
                            }
                        }
                        out.at(g.index(c), comp) += d;
                    }
        }
    }
    return out;
}

double integrate(const Field& f, const Field* weight) {
    return integrate(f, IndexBox::whole(f.grid()), weight);
}

double integrate(const Field& f, const IndexBox& region, const Field* weight) {
    const Grid& g = f.grid();
    if (f.components() != 1) throw std::invalid_argument("integrate: scalar field expected");
    if (weight) {
        if (weight->grid() != g) throw std::invalid_argument("integrate: weight on a different grid");
        if (weight->components() != 1)
            throw std::invalid_argument("integrate: scalar weight expected");
    }
    if (region.empty(g)) return 0.0;
    std::vector<double> terms;
    terms.reserve(static_cast<size_t>(region.cell_count(g)));
    std::array<int, 3> c{0, 0, 0};
    for (c[2] = region.lo[2]; c[2] <= (g.dim > 2 ? region.hi[2] : 0); ++c[2])
        for (c[1] = region.lo[1]; c[1] <= (g.dim > 1 ? region.hi[1] : 0); ++c[1])
            for (c[0] = region.lo[0]; c[0] <= region.hi[0]; ++c[0]) {
                const long idx = g.index(c);
                terms.push_back(weight ? f.at(idx) * weight->at(idx) : f.at(idx));
            }
    return pairwise_sum(terms) * g.cell_volume();
}

CutoffField cutoff(const Grid& g, const std::array<double, 3>& center, double radius,
                   CutoffProfile profile) {
    if (!(radius > 0.0)) throw std::invalid_argument("cutoff: radius must be positive");
    double hmax = 0.0, dist_to_box = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        hmax = std::max(hmax, g.spacing(a));
        double d = std::max({0.0, -center[a], center[a] - g.extents[a]});
        dist_to_box += d * d;
    }
    if (radius < 4.0 * hmax)
        throw std::invalid_argument("cutoff: radius spans fewer than 4 cells");
    if (std::sqrt(dist_to_box) > 2.0 * radius)
        throw std::invalid_argument("cutoff: ball B_2R does not meet the grid");

    CutoffField result;
    result.omega = Field::sample_scalar(g, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) r2 += sqr(x[a] - center[a]);
        const double r = std::sqrt(r2);
        if (r <= 0.5 * radius) return 1.0;
        if (r >= radius) return 0.0;
        const double s = (r - 0.5 * radius) / (0.5 * radius);
        if (profile == CutoffProfile::Quintic)
            return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
        return 1.0 - s * s * (3.0 - 2.0 * s);
    });

    Field grad = gradient(result.omega, GradientRule::OneSided);
    double sup = 0.0;
    for (long cell = 0; cell < grad.cell_count(); ++cell) sup = std::max(sup, grad.norm_at(cell));
    result.grad_constant = sup * radius;
    return result;
}

DifferenceQuotient difference_quotient(const Field& f, int axis, double step) {
    const Grid& g = f.grid();
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("difference_quotient: bad axis");
    const double h = g.spacing(axis);
    const long shift = std::lround(step / h);
    if (shift < 1) throw std::invalid_argument("difference_quotient: step below one cell");
    const double eff = shift * h;  // snapped step used as the denominator

    DifferenceQuotient dq{Field(g, f.components()), Field(g, 1)};
    const int n = g.cells[axis];
    for (long cell = 0; cell < f.cell_count(); ++cell) {
        auto c = g.coords(cell);
        if (c[axis] + shift >= n) continue;
        auto cs = c;
        cs[axis] += static_cast<int>(shift);
        const long scell = g.index(cs);
        for (int comp = 0; comp < f.components(); ++comp)
            dq.values.at(cell, comp) = (f.at(scell, comp) - f.at(cell, comp)) / eff;
        dq.valid.at(cell) = 1.0;
    }
    return dq;
}

std::vector<long> ball_cells(const Grid& g, const std::array<double, 3>& center, double radius) {
    std::vector<long> cells;
    IndexBox box = IndexBox::around(g, center, radius);
    if (box.empty(g)) return cells;
    const double r2 = radius * radius;
    std::array<int, 3> c{0, 0, 0};
    for (c[2] = box.lo[2]; c[2] <= (g.dim > 2 ? box.hi[2] : 0); ++c[2])
        for (c[1] = box.lo[1]; c[1] <= (g.dim > 1 ? box.hi[1] : 0); ++c[1])
            for (c[0] = box.lo[0]; c[0] <= box.hi[0]; ++c[0]) {
                double d2 = 0.0;
                auto x = g.center(c);
                for (int a = 0; a < g.dim; ++a) d2 += sqr(x[a] - center[a]);
                if (d2 <= r2) cells.push_back(g.index(c));
            }
    return cells;
}

}  // namespace cdlab
