#pragma once

#include "cdlab/grid.hpp"

namespace cdlab {

struct BmoResult {
    double seminorm = 0.0;   // sup over cubes of the mean oscillation
    double l1_norm = 0.0;    // integral of |f| over the region
    double bmo_norm = 0.0;   // seminorm + l1_norm
    Cube argmax_cube{};
    long cube_count = 0;
};

/// Mean-oscillation supremum over all axis-aligned cubes of integer side
/// inside `region` (whole grid when null). Multi-component fields use the
/// Euclidean norm of the deviation from the componentwise cube average.
/// Every cube is evaluated by direct row-major summation, so the result is
/// bitwise comparable against a naive double-loop oracle. Ties in the
/// supremum resolve toward the cube enumerated last (larger side wins).
BmoResult bmo_seminorm(const Field& f, const IndexBox* region = nullptr);

/// ||f||_BMO restricted to the cube region of half-side 2R around `center`
/// (clipped to the grid): seminorm over cubes inside the region plus the
/// L^1 norm over it.
double bmo_norm_local(const Field& f, const std::array<double, 3>& center, double radius);
BmoResult bmo_norm_local_detail(const Field& f, const std::array<double, 3>& center,
                                double radius);

struct WeightClassResult {
    double gamma = 2.0;
    double constant = 1.0;  // +infinity when `infinite`
    bool infinite = false;
    Cube argmax_cube{};
};

/// Muckenhoupt-type constant sup_B (avg_B w)(avg_B w^{1-gamma'})^{gamma-1},
/// gamma' = gamma/(gamma-1). Any zero-weight cell makes the supremum
/// infinite (flagged, not thrown).
WeightClassResult a_gamma_constant(const Field& w, double gamma);

/// Centered maximal operator over Euclidean balls contained in the domain;
/// the admissible radii at y run from the single-cell ball up to the
/// distance from y to the boundary, so M(F) >= F pointwise. Componentwise
/// for m > 1. Ball membership uses cell-center distances in index-offset
/// form, sum_a (di_a h_a)^2, with ties included. Throws std::domain_error
/// on negative input.
Field maximal(const Field& f);

struct WeightedMaximalReport {
    double ratio = 1.0;  // (int M(F)^q w) / (int F^q w)
    double numerator = 0.0;
    double denominator = 0.0;
    WeightClassResult weight;
};

/// Ratio statistic for the weighted maximal bound; the constant is not
/// pinned, so this only reports, never flags.
WeightedMaximalReport check_weighted_maximal_bound(const Field& f, const Field& w, double q);

struct PsiFields {
    Field psi2;
    Field psi3;
    double s_star = 0.0;  // 2N/(N+1)
};

/// Proof-side maximal diagnostics Psi_2 = (M(|H|^{(p-1)s*}|DH|^{s*}))^{1/s*}
/// and Psi_3 = (M(|H|^{(p+1)s*}))^{1/s*} (strong setting, where the pairing
/// h.Du collapses to |H|^{p+1}). Requires N >= 2.
PsiFields psi_quantities(const Field& h, const Field& dh, double p);

}  // namespace cdlab
