#pragma once

#include <optional>
#include <vector>

#include "cdlab/grid.hpp"
#include "cdlab/model.hpp"

namespace cdlab {

/// (int_region |DW|^{2p})^{1/(2p)}; |DW| is the Euclidean norm over all
/// m x N gradient entries.
double lp_gradient_norm(const Field& w, double two_p, const IndexBox& region);
double lp_gradient_norm(const Field& w, double two_p);

struct HolderFit {
    double alpha = 1.0;
    double fit_residual = 0.0;
    bool constant_field = false;
    std::vector<double> radii;
    std::vector<double> oscillations;  // max over centers of (max-min over B_r)
};

/// Least-squares slope of log osc_{B_r}(W) vs log r over the radius ladder,
/// clamped into [0,1]. Oscillation is max-minus-min over the ball, maximized
/// over all ball centers (balls clipped at the boundary).
HolderFit holder_estimate(const Field& w, const std::vector<double>& radii);

struct SmallnessCheck {
    double omega_tilde = 0.0;  // ||W||_BMO(Omega_2R)
    double product = 0.0;      // C(N) C_*^2 omega_tilde^2
    bool pass = false;         // product < 1
    double radius = 0.0;
};

SmallnessCheck bmo_smallness_check(const Field& w, double c_n, double c_star, double radius,
                                   const std::array<double, 3>& center);

struct SmallnessLadder {
    std::vector<SmallnessCheck> entries;
    double largest_passing_radius = 0.0;  // 0 when none pass
};

SmallnessLadder bmo_smallness_ladder(const Field& w, double c_n, double c_star,
                                     const std::vector<double>& radii,
                                     const std::array<double, 3>& center);

struct KPowerCheck {
    double bmo_value = 0.0;        // left side, ||W||_BMO(Omega_2R)
    double violating_measure = 0.0;
    double best_c = 0.0;           // smallest admissible c(k)
    bool pass = false;             // with the supplied c(k)
};

/// Pointwise check of ||W||_BMO(Omega_2R) <= c(k) [|W| + eps |W|^{1-k}]
/// over the region; reports the violating-set measure and the best
/// admissible constant.
KPowerCheck kpower_condition_check(const Field& w, double k, double eps, double c_k,
                                   const std::array<double, 3>& center, double radius);

struct GrowthCheck {
    double best_c = 0.0;
    bool unbounded = false;  // ratio still growing at the top of the probe ladder
    std::vector<double> sample_norms;
    std::vector<double> ratios;
};

/// Smallest C with |F(W)| <= C min{|W|^{k/2+2}+1, |W|^{k+1}+1} on the
/// samples; flags unbounded growth when the log-ratio keeps climbing on the
/// upper half of the |W| ladder.
GrowthCheck growth_condition_check(const DiffusionModel& model,
                                   const std::vector<Eigen::VectorXd>& samples);

struct ThinDomainEntry {
    double radius = 0.0;
    double max_ratio = 0.0;  // max over slab positions of lhs / R^{N-2}
    bool pass = false;
};

struct ThinDomainCheck {
    std::vector<ThinDomainEntry> entries;
    bool pass = false;  // all ladder entries pass
};

/// Transverse-gradient smallness: for each R, slabs of thickness R along the
/// last axis crossed with contained balls B_R in the remaining axes;
/// computes int |D_{x_N} W|^2 / R^{N-2} and compares against eps_target.
ThinDomainCheck thin_domain_check(const Field& w, double eps_target,
                                  const std::vector<double>& radii);

}  // namespace cdlab
