#include "cdlab/regularity.hpp"

#include <algorithm>
#include <cmath>

#include "cdlab/harmonic.hpp"
#include "cdlab/numerics.hpp"

namespace cdlab {

double lp_gradient_norm(const Field& w, double two_p, const IndexBox& region) {
    if (!(two_p >= 1.0)) throw std::invalid_argument("lp_gradient_norm: 2p must be >= 1");
    const Field dw = gradient(w);
    Field mag(w.grid(), 1);
    for (long cell = 0; cell < w.cell_count(); ++cell)
        mag.at(cell) = std::pow(dw.norm_at(cell), two_p);
    return std::pow(integrate(mag, region), 1.0 / two_p);
}

double lp_gradient_norm(const Field& w, double two_p) {
    return lp_gradient_norm(w, two_p, IndexBox::whole(w.grid()));
}

HolderFit holder_estimate(const Field& w, const std::vector<double>& radii) {
    const Grid& g = w.grid();
    if (radii.size() < 2) throw std::invalid_argument("holder_estimate: need >= 2 radii");

    HolderFit fit;
    for (double r : radii) {
        // offsets within radius r, shared across centers
        std::array<int, 3> reach{0, 0, 0};
        for (int a = 0; a < g.dim; ++a)
            reach[a] = static_cast<int>(std::floor(r / g.spacing(a)));
        std::vector<std::array<int, 3>> offsets;
        std::array<int, 3> d{0, 0, 0};
        for (d[2] = -reach[2]; d[2] <= reach[2]; ++d[2])
            for (d[1] = -reach[1]; d[1] <= reach[1]; ++d[1])
                for (d[0] = -reach[0]; d[0] <= reach[0]; ++d[0]) {
                    double n2 = 0.0;
                    for (int a = 0; a < g.dim; ++a) n2 += sqr(d[a] * g.spacing(a));
                    if (n2 <= r * r) offsets.push_back(d);
                }

        double best = 0.0;
        for (long cell = 0; cell < w.cell_count(); ++cell) {
            const auto c = g.coords(cell);
            for (int comp = 0; comp < w.components(); ++comp) {
                double lo = w.at(cell, comp), hi = lo;
                for (const auto& off : offsets) {
                    std::array<int, 3> t = c;
                    bool ok = true;
                    for (int a = 0; a < g.dim; ++a) {
                        t[a] += off[a];
                        ok = ok && t[a] >= 0 && t[a] < g.cells[a];
                    }
                    if (!ok) continue;
                    const double v = w.at(g.index(t), comp);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                best = std::max(best, hi - lo);
            }
        }
        fit.radii.push_back(r);
        fit.oscillations.push_back(best);
    }

    std::vector<double> lx, ly;
    for (size_t i = 0; i < fit.radii.size(); ++i) {
        if (fit.oscillations[i] > 0.0) {
            lx.push_back(std::log(fit.radii[i]));
            ly.push_back(std::log(fit.oscillations[i]));
        }
    }
    if (lx.size() < 2) {
        fit.constant_field = true;
        fit.alpha = 1.0;
        return fit;
    }
    const LineFit line = fit_line(lx, ly);
    fit.alpha = std::clamp(line.slope, 0.0, 1.0);
    fit.fit_residual = line.residual;
    return fit;
}

SmallnessCheck bmo_smallness_check(const Field& w, double c_n, double c_star, double radius,
                                   const std::array<double, 3>& center) {
    SmallnessCheck check;
    check.radius = radius;
    check.omega_tilde = bmo_norm_local(w, center, radius);
    check.product = c_n * sqr(c_star) * sqr(check.omega_tilde);
    check.pass = std::isfinite(check.product) && check.product < 1.0;
    return check;
}

SmallnessLadder bmo_smallness_ladder(const Field& w, double c_n, double c_star,
                                     const std::vector<double>& radii,
                                     const std::array<double, 3>& center) {
    SmallnessLadder ladder;
    for (double r : radii) {
        ladder.entries.push_back(bmo_smallness_check(w, c_n, c_star, r, center));
        if (ladder.entries.back().pass)
            ladder.largest_passing_radius = std::max(ladder.largest_passing_radius, r);
    }
    return ladder;
}

KPowerCheck kpower_condition_check(const Field& w, double k, double eps, double c_k,
                                   const std::array<double, 3>& center, double radius) {
    const Grid& g = w.grid();
    KPowerCheck check;
    check.bmo_value = bmo_norm_local(w, center, radius);

    const IndexBox box = IndexBox::around(g, center, 2.0 * radius);
    long violating = 0;
    double min_rhs_factor = std::numeric_limits<double>::infinity();
    std::array<int, 3> c{0, 0, 0};
    for (c[2] = box.lo[2]; c[2] <= (g.dim > 2 ? box.hi[2] : 0); ++c[2])
        for (c[1] = box.lo[1]; c[1] <= (g.dim > 1 ? box.hi[1] : 0); ++c[1])
            for (c[0] = box.lo[0]; c[0] <= box.hi[0]; ++c[0]) {
                const double wn = w.norm_at(g.index(c));
                double factor = wn;
                if (eps != 0.0) factor += eps * std::pow(wn, 1.0 - k);
                min_rhs_factor = std::min(min_rhs_factor, factor);
                const double rhs = c_k == 0.0 ? 0.0 : c_k * factor;  // avoid 0 * inf
                if (!(check.bmo_value <= rhs)) ++violating;
            }
    check.violating_measure = violating * g.cell_volume();
    check.pass = violating == 0;
    if (check.bmo_value == 0.0)
        check.best_c = 0.0;
    else if (min_rhs_factor == 0.0)
        check.best_c = std::numeric_limits<double>::infinity();
    else
        check.best_c = check.bmo_value / min_rhs_factor;
    return check;
}

GrowthCheck growth_condition_check(const DiffusionModel& model,
                                   const std::vector<Eigen::VectorXd>& samples) {
    GrowthCheck check;
    if (!model.source) return check;  // F == 0, C = 0

    std::vector<std::pair<double, double>> rows;  // (|W|, ratio)
    for (const auto& w : samples) {
        const double wn = w.norm();
        const double bound = std::min(std::pow(wn, model.k / 2.0 + 2.0) + 1.0,
                                      std::pow(wn, model.k + 1.0) + 1.0);
        const double ratio = model.source(w).norm() / bound;
        rows.emplace_back(wn, ratio);
        check.best_c = std::max(check.best_c, ratio);
    }
    std::sort(rows.begin(), rows.end());
    for (auto& [wn, ratio] : rows) {
        check.sample_norms.push_back(wn);
        check.ratios.push_back(ratio);
    }

    // slope of log ratio vs log |W| on the upper half of the ladder
    std::vector<double> lx, ly;
    for (size_t i = rows.size() / 2; i < rows.size(); ++i) {
        if (rows[i].first > 0.0 && rows[i].second > 0.0) {
            lx.push_back(std::log(rows[i].first));
            ly.push_back(std::log(rows[i].second));
        }
    }
    if (lx.size() >= 2) check.unbounded = fit_line(lx, ly).slope > 0.05;
    return check;
}

ThinDomainCheck thin_domain_check(const Field& w, double eps_target,
                                  const std::vector<double>& radii) {
    const Grid& g = w.grid();
    if (g.dim < 2) throw std::invalid_argument("thin_domain_check: needs N >= 2");
    const int zaxis = g.dim - 1;
    const double hz = g.spacing(zaxis);

    const Field dw = gradient(w);
    Field dz2(g, 1);  // |D_{x_N} W|^2
    for (long cell = 0; cell < w.cell_count(); ++cell) {
        double s = 0.0;
        for (int comp = 0; comp < w.components(); ++comp)
            s += sqr(dw.at(cell, comp * g.dim + zaxis));
        dz2.at(cell) = s;
    }

    ThinDomainCheck check;
    check.pass = true;
    for (double r : radii) {
        const int slab = std::max(1, static_cast<int>(std::lround(r / hz)));
        double worst = 0.0;

        // cross-section ball offsets (first N-1 axes)
        std::array<int, 3> reach{0, 0, 0};
        for (int a = 0; a < zaxis; ++a)
            reach[a] = static_cast<int>(std::floor(r / g.spacing(a)));
        std::vector<std::array<int, 3>> offsets;
        std::array<int, 3> d{0, 0, 0};
        for (d[1] = (zaxis > 1 ? -reach[1] : 0); d[1] <= (zaxis > 1 ? reach[1] : 0); ++d[1])
            for (d[0] = -reach[0]; d[0] <= reach[0]; ++d[0]) {
                double n2 = 0.0;
                for (int a = 0; a < zaxis; ++a) n2 += sqr(d[a] * g.spacing(a));
                if (n2 <= r * r) offsets.push_back(d);
            }

        for (long cell = 0; cell < g.cell_count(); ++cell) {
            const auto c = g.coords(cell);
            if (c[zaxis] != 0) continue;  // enumerate cross-section cells once
            // ball must be contained in the cross-section
            bool contained = true;
            auto x = g.center(c);
            for (int a = 0; a < zaxis; ++a)
                contained = contained && x[a] - r >= 0.0 && x[a] + r <= g.extents[a];
            if (!contained) continue;

            for (int z0 = 0; z0 + slab <= g.cells[zaxis]; ++z0) {
                double sum = 0.0;
                for (const auto& off : offsets) {
                    std::array<int, 3> t = c;
                    for (int a = 0; a < zaxis; ++a) t[a] += off[a];
                    for (int z = z0; z < z0 + slab; ++z) {
                        t[zaxis] = z;
                        sum += dz2.at(g.index(t));
                    }
                }
                const double lhs = sum * g.cell_volume();
                worst = std::max(worst, lhs / std::pow(r, g.dim - 2.0));
            }
        }
        ThinDomainEntry entry{r, worst, worst <= eps_target};
        check.pass = check.pass && entry.pass;
        check.entries.push_back(entry);
    }
    return check;
}

}  // namespace cdlab
