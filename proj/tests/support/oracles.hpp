#pragma once

// Independent brute-force oracles. These stay deliberately naive and must
// not share code with the library paths they check.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cdlab/grid.hpp"

namespace cdlab::testing {

/// Naive BMO seminorm: every axis-aligned cube of integer side, direct
/// row-major double loop for the mean and the oscillation.
inline double bmo_oracle(const Field& f, int lo0 = 0, int lo1 = 0, int lo2 = 0, int hi0 = -1,
                         int hi1 = -1, int hi2 = -1) {
    const Grid& g = f.grid();
    std::array<int, 3> lo{lo0, lo1, lo2};
    std::array<int, 3> hi{hi0, hi1, hi2};
    for (int a = 0; a < 3; ++a)
        if (hi[a] < 0) hi[a] = (a < g.dim) ? g.cells[a] - 1 : 0;

    int max_side = hi[0] - lo[0] + 1;
    for (int a = 1; a < g.dim; ++a) max_side = std::min(max_side, hi[a] - lo[a] + 1);

    const int m = f.components();
    double sup = 0.0;
    std::vector<double> mu(m);
    for (int side = 1; side <= max_side; ++side) {
        const int k_hi = g.dim > 2 ? hi[2] - side + 1 : lo[2];
        const int j_hi = g.dim > 1 ? hi[1] - side + 1 : lo[1];
        for (int k0 = lo[2]; k0 <= k_hi; ++k0)
            for (int j0 = lo[1]; j0 <= j_hi; ++j0)
                for (int i0 = lo[0]; i0 <= hi[0] - side + 1; ++i0) {
                    const long count = [&] {
                        long n = side;
                        for (int a = 1; a < g.dim; ++a) n *= side;
                        return n;
                    }();
                    for (int c = 0; c < m; ++c) {
                        double sum = 0.0;
                        for (int k = 0; k < (g.dim > 2 ? side : 1); ++k)
                            for (int j = 0; j < (g.dim > 1 ? side : 1); ++j)
                                for (int i = 0; i < side; ++i)
                                    sum += f.at(g.index({i0 + i, j0 + j, k0 + k}), c);
                        mu[c] = sum / static_cast<double>(count);
                    }
                    double osc = 0.0;
                    for (int k = 0; k < (g.dim > 2 ? side : 1); ++k)
                        for (int j = 0; j < (g.dim > 1 ? side : 1); ++j)
                            for (int i = 0; i < side; ++i) {
                                const long cell = g.index({i0 + i, j0 + j, k0 + k});
                                if (m == 1) {
                                    osc += std::abs(f.at(cell, 0) - mu[0]);
                                } else {
                                    double s2 = 0.0;
                                    for (int c = 0; c < m; ++c) s2 += (f.at(cell, c) - mu[c]) * (f.at(cell, c) - mu[c]);
                                    osc += std::sqrt(s2);
                                }
                            }
                    sup = std::max(sup, osc / static_cast<double>(count));
                }
    }
    return sup;
}

/// Naive centered maximal value at one cell: walk every radius given by a
/// cell-center distance, average by a direct scan of the whole grid.
/// Cell-center distances use the documented index-offset form
/// sum((di*h)^2), matching the library's ball definition bit for bit.
inline double maximal_oracle_at(const Field& f, long cell, int comp = 0) {
    const Grid& g = f.grid();
    const auto yc = g.coords(cell);
    const double rmax2 = [&] {
        const double d = g.boundary_distance(yc);
        return d * d;
    }();

    auto dist2 = [&](long other) {
        const auto oc = g.coords(other);
        double d2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double d = (oc[a] - yc[a]) * g.spacing(a);
            d2 += d * d;
        }
        return d2;
    };

    std::vector<double> dists2;
    for (long other = 0; other < g.cell_count(); ++other) {
        const double d2 = dist2(other);
        if (d2 <= rmax2) dists2.push_back(d2);
    }
    std::sort(dists2.begin(), dists2.end());
    dists2.erase(std::unique(dists2.begin(), dists2.end()), dists2.end());

    double best = 0.0;
    for (double r2 : dists2) {
        double sum = 0.0;
        long count = 0;
        for (long other = 0; other < g.cell_count(); ++other) {
            if (dist2(other) <= r2) {
                sum += f.at(other, comp);
                ++count;
            }
        }
        best = std::max(best, sum / static_cast<double>(count));
    }
    return best;
}

}  // namespace cdlab::testing
