#include "cdlab/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cdlab/numerics.hpp"

namespace cdlab {

namespace {

struct CubeSums {
    // direct row-major sums; the arithmetic the acceptance oracle replays
    static void mean(const Field& f, const Grid& g, const Cube& q, std::vector<double>& mu) {
        const long sy = g.cells[0];
        const long sz = static_cast<long>(g.cells[0]) * g.cells[1];
        const long base = g.index(q.anchor);
        const int kk = g.dim > 2 ? q.side : 1;
        const int jj = g.dim > 1 ? q.side : 1;
        const double count = static_cast<double>(q.cell_count(g));
        for (int c = 0; c < f.components(); ++c) {
            auto vals = f.comp(c);
            double sum = 0.0;
            for (int k = 0; k < kk; ++k)
                for (int j = 0; j < jj; ++j) {
                    const long row = base + k * sz + j * sy;
                    for (int i = 0; i < q.side; ++i) sum += vals[row + i];
                }
            mu[c] = sum / count;
        }
    }

    static double oscillation(const Field& f, const Grid& g, const Cube& q,
                              const std::vector<double>& mu) {
        const long sy = g.cells[0];
        const long sz = static_cast<long>(g.cells[0]) * g.cells[1];
        const long base = g.index(q.anchor);
        const int kk = g.dim > 2 ? q.side : 1;
        const int jj = g.dim > 1 ? q.side : 1;
        const int m = f.components();
        double sum = 0.0;
        for (int k = 0; k < kk; ++k)
            for (int j = 0; j < jj; ++j) {
                const long row = base + k * sz + j * sy;
                for (int i = 0; i < q.side; ++i) {
                    if (m == 1) {
                        sum += std::abs(f.at(row + i, 0) - mu[0]);
                    } else {
                        double s2 = 0.0;
                        for (int c = 0; c < m; ++c) s2 += sqr(f.at(row + i, c) - mu[c]);
                        sum += std::sqrt(s2);
                    }
                }
            }
        return sum / static_cast<double>(q.cell_count(g));
    }
};

template <typename Fn>
void for_each_cube(const Grid& g, const IndexBox& box, Fn&& fn) {
    int max_side = box.extent(0);
    for (int a = 1; a < g.dim; ++a) max_side = std::min(max_side, box.extent(a));
    Cube q;
    for (int side = 1; side <= max_side; ++side) {
        q.side = side;
        std::array<int, 3> last{0, 0, 0};
        for (int a = 0; a < g.dim; ++a) last[a] = box.hi[a] - side + 1;
        for (int k = box.lo[2]; k <= (g.dim > 2 ? last[2] : 0); ++k)
            for (int j = box.lo[1]; j <= (g.dim > 1 ? last[1] : 0); ++j)
                for (int i = box.lo[0]; i <= last[0]; ++i) {
                    q.anchor = {i, j, k};
                    fn(q);
                }
    }
}

double l1_over_region(const Field& f, const Grid& g, const IndexBox& box) {
    std::vector<double> terms;
    terms.reserve(static_cast<size_t>(box.cell_count(g)));
    std::array<int, 3> c{0, 0, 0};
    for (c[2] = box.lo[2]; c[2] <= (g.dim > 2 ? box.hi[2] : 0); ++c[2])
        for (c[1] = box.lo[1]; c[1] <= (g.dim > 1 ? box.hi[1] : 0); ++c[1])
            for (c[0] = box.lo[0]; c[0] <= box.hi[0]; ++c[0])
                terms.push_back(f.norm_at(g.index(c)));
    return pairwise_sum(terms) * g.cell_volume();
}

}  // namespace

BmoResult bmo_seminorm(const Field& f, const IndexBox* region) {
    const Grid& g = f.grid();
    const IndexBox box = region ? *region : IndexBox::whole(g);
    if (box.empty(g)) throw std::invalid_argument("bmo_seminorm: empty region");

    BmoResult result;
    std::vector<double> mu(f.components());
    for_each_cube(g, box, [&](const Cube& q) {
        CubeSums::mean(f, g, q, mu);
        const double osc = CubeSums::oscillation(f, g, q, mu);
        if (osc >= result.seminorm) {
            result.seminorm = osc;
            result.argmax_cube = q;
        }
        ++result.cube_count;
    });
    result.l1_norm = l1_over_region(f, g, box);
    result.bmo_norm = result.seminorm + result.l1_norm;
    return result;
}

BmoResult bmo_norm_local_detail(const Field& f, const std::array<double, 3>& center,
                                double radius) {
    const IndexBox box = IndexBox::around(f.grid(), center, 2.0 * radius);
    if (box.empty(f.grid()))
        throw std::invalid_argument("bmo_norm_local: region misses the grid");
    return bmo_seminorm(f, &box);
}

double bmo_norm_local(const Field& f, const std::array<double, 3>& center, double radius) {
    return bmo_norm_local_detail(f, center, radius).bmo_norm;
}

WeightClassResult a_gamma_constant(const Field& w, double gamma) {
    const Grid& g = w.grid();
    if (w.components() != 1) throw std::invalid_argument("a_gamma_constant: scalar weight expected");
    if (!(gamma > 1.0)) throw std::invalid_argument("a_gamma_constant: gamma must exceed 1");

    WeightClassResult result;
    result.gamma = gamma;

    Field dual(g, 1);
    const double expo = -1.0 / (gamma - 1.0);  // 1 - gamma'
    for (long cell = 0; cell < w.cell_count(); ++cell) {
        const double v = w.at(cell);
        if (v < 0.0) throw std::domain_error("a_gamma_constant: negative weight");
        if (v == 0.0) {
            result.infinite = true;
            result.constant = std::numeric_limits<double>::infinity();
            result.argmax_cube = Cube{g.coords(cell), 1};
            return result;
        }
        dual.at(cell) = std::pow(v, expo);
    }

    const IndexBox box = IndexBox::whole(g);
    result.constant = 0.0;
    std::vector<double> mw(1), md(1);
    for_each_cube(g, box, [&](const Cube& q) {
        CubeSums::mean(w, g, q, mw);
        CubeSums::mean(dual, g, q, md);
        const double value = mw[0] * std::pow(md[0], gamma - 1.0);
        if (value >= result.constant) {
            result.constant = value;
            result.argmax_cube = q;
        }
    });
    return result;
}

namespace {

struct BallOffsets {
    struct Group {
        double norm2;
        size_t begin, end;  // range into offsets
    };
    std::vector<std::array<int, 3>> offsets;
    std::vector<Group> groups;

    static BallOffsets build(const Grid& g) {
        double maxr = 0.0;
        for (long cell = 0; cell < g.cell_count(); ++cell)
            maxr = std::max(maxr, g.boundary_distance(g.coords(cell)));
        std::array<int, 3> reach{0, 0, 0};
        for (int a = 0; a < g.dim; ++a)
            reach[a] = static_cast<int>(std::floor(maxr / g.spacing(a)));

        std::vector<std::pair<double, std::array<int, 3>>> all;
        std::array<int, 3> d{0, 0, 0};
        for (d[2] = -reach[2]; d[2] <= reach[2]; ++d[2])
            for (d[1] = -reach[1]; d[1] <= reach[1]; ++d[1])
                for (d[0] = -reach[0]; d[0] <= reach[0]; ++d[0]) {
                    double n2 = 0.0;
                    for (int a = 0; a < g.dim; ++a) n2 += sqr(d[a] * g.spacing(a));
                    if (n2 <= maxr * maxr) all.emplace_back(n2, d);
                }
        std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first < y.first;
            return x.second < y.second;
        });

        BallOffsets b;
        b.offsets.reserve(all.size());
        for (auto& [n2, off] : all) b.offsets.push_back(off);
        size_t i = 0;
        while (i < all.size()) {
            size_t j = i;
            while (j < all.size() && all[j].first == all[i].first) ++j;
            b.groups.push_back({all[i].first, i, j});
            i = j;
        }
        return b;
    }
};

}  // namespace

Field maximal(const Field& f) {
    const Grid& g = f.grid();
    for (long cell = 0; cell < f.cell_count(); ++cell)
        for (int c = 0; c < f.components(); ++c)
            if (f.at(cell, c) < 0.0) throw std::domain_error("maximal: negative input");

    const BallOffsets balls = BallOffsets::build(g);
    Field out(g, f.components());

    for (long cell = 0; cell < f.cell_count(); ++cell) {
        const auto yc = g.coords(cell);
        const double rmax2 = sqr(g.boundary_distance(yc));
        for (int c = 0; c < f.components(); ++c) {
            double best = f.at(cell, c);  // single-cell ball
            double sum = 0.0;
            long count = 0;
            for (const auto& grp : balls.groups) {
                if (grp.norm2 > rmax2) break;
                for (size_t o = grp.begin; o < grp.end; ++o) {
                    std::array<int, 3> t = yc;
                    for (int a = 0; a < g.dim; ++a) t[a] += balls.offsets[o][a];
                    sum += f.at(g.index(t), c);
                    ++count;
                }
                best = std::max(best, sum / static_cast<double>(count));
            }
            out.at(cell, c) = best;
        }
    }
    return out;
}

WeightedMaximalReport check_weighted_maximal_bound(const Field& f, const Field& w, double q) {
    if (!(q > 1.0)) throw std::invalid_argument("check_weighted_maximal_bound: q must exceed 1");
    if (f.grid() != w.grid())
        throw std::invalid_argument("check_weighted_maximal_bound: grid mismatch");
    if (f.components() != 1 || w.components() != 1)
        throw std::invalid_argument("check_weighted_maximal_bound: scalar fields expected");

    const Field mf = maximal(f);
    const Grid& g = f.grid();
    Field num(g, 1), den(g, 1);
    for (long cell = 0; cell < f.cell_count(); ++cell) {
        num.at(cell) = std::pow(mf.at(cell), q);
        den.at(cell) = std::pow(f.at(cell), q);
    }
    WeightedMaximalReport report;
    report.numerator = integrate(num, &w);
    report.denominator = integrate(den, &w);
    report.ratio = report.denominator == 0.0
                       ? (report.numerator == 0.0 ? 1.0 : std::numeric_limits<double>::infinity())
                       : report.numerator / report.denominator;
    report.weight = a_gamma_constant(w, q);
    return report;
}

PsiFields psi_quantities(const Field& h, const Field& dh, double p) {
    const Grid& g = h.grid();
    if (g.dim < 2) throw std::invalid_argument("psi_quantities: needs N >= 2");
    if (dh.grid() != g) throw std::invalid_argument("psi_quantities: grid mismatch");
    if (!(p >= 1.0)) throw std::invalid_argument("psi_quantities: p must be >= 1");

    const double s_star = 2.0 * g.dim / (g.dim + 1.0);
    Field a(g, 1), b(g, 1);
    for (long cell = 0; cell < h.cell_count(); ++cell) {
        const double hn = h.norm_at(cell);
        a.at(cell) = std::pow(hn, (p - 1.0) * s_star) * std::pow(dh.norm_at(cell), s_star);
        b.at(cell) = std::pow(hn, (p + 1.0) * s_star);
    }
    PsiFields out{maximal(a), maximal(b), s_star};
    for (long cell = 0; cell < h.cell_count(); ++cell) {
        out.psi2.at(cell) = std::pow(out.psi2.at(cell), 1.0 / s_star);
        out.psi3.at(cell) = std::pow(out.psi3.at(cell), 1.0 / s_star);
    }
    return out;
}

}  // namespace cdlab
