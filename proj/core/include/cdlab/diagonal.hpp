#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cdlab/grid.hpp"
#include "cdlab/model.hpp"
#include "cdlab/numerics.hpp"
#include "cdlab/solver.hpp"

namespace cdlab {

/// Diagonalizable cross-diffusion model: B(W) a(W) B^{-1}(W) = alpha(W)
/// with alpha = diag[lambda_1..lambda_m], lambda_i >= lambda_0 > 0. The
/// underlying diffusion matrix is recovered as a = B^{-1} alpha B.
struct DiagonalizableModel {
    int m = 2;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> B;
    /// Per-component derivatives dB/dW_r; finite differences when absent.
    std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)> B_W;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> alpha_diag;
    /// Optional closed form for a = B^{-1} alpha B (presets where the
    /// general inversion is singular or wasteful).
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> a_fn;
    double lambda0 = 1.0;
    double l = 0.0;  // power-preset exponent |b_ij| ~ |W|^l
    std::string preset = "custom";
    MatrixNorm norm_mode = MatrixNorm::Operator2;
    double fd_step = 1e-6;

    Eigen::MatrixXd a(const Eigen::VectorXd& w) const;  // B^{-1} alpha B
    std::vector<Eigen::MatrixXd> dB(const Eigen::VectorXd& w) const;
    DiffusionModel to_diffusion() const;

    static DiagonalizableModel constant(const Eigen::MatrixXd& b0, const Eigen::VectorXd& alphas);
    /// B(W) = |W|^l Id with constant diagonal alpha (a == alpha).
    static DiagonalizableModel power(double l, const Eigen::VectorXd& alphas);
    /// Same model with B replaced by kappa*B (a and the trajectory are
    /// unchanged; P scales linearly).
    static DiagonalizableModel scaled(const DiagonalizableModel& base, double kappa);
};

/// P(W) = int_0^1 B(sW) W ds per cell; composite Gauss on the increment
/// form, exact for constant B and for integer powers s^l.
Field p_transform(const Field& w, const DiagonalizableModel& model);
Eigen::VectorXd p_transform_point(const Eigen::VectorXd& w, const DiagonalizableModel& model);

struct BmatProbeRow {
    Eigen::VectorXd w;
    double lhs = 0.0;          // max_i lambda_i |B| |(B^-1)_W| |B^-1|
    double lhs_variant = 0.0;  // max_i lambda_i |B_W B^-1| |B^-1|
    double min_lambda = 0.0;
    double max_lambda = 0.0;
    double p_norm = 0.0;  // |P(W)|
    double c = 0.0;        // lhs |P| / min_i lambda_i
    double c_variant = 0.0;
};

struct BmatReport {
    double c_measured = 0.0;
    double c_variant_measured = 0.0;
    MatrixNorm norm_mode = MatrixNorm::Operator2;
    std::vector<BmatProbeRow> rows;
};

/// Measured condition constants over the probe set; throws on a singular
/// B(W), naming the probe.
BmatReport bmat_condition(const DiagonalizableModel& model,
                          const std::vector<Eigen::VectorXd>& probes);

struct TransformedResidual {
    std::vector<double> times;      // midpoint times of consecutive snapshot pairs
    std::vector<double> residuals;  // L2 norms of P_t - Div(alpha DP) + quadratic term
    double max_residual = 0.0;
};

/// Residual of the transformed diagonal system evaluated on consecutive
/// trajectory snapshots (P_t by forward difference, right side at the newer
/// snapshot). For constant B the gradient-quadratic term vanishes
/// identically.
TransformedResidual transformed_residual(const Trajectory& traj, const DiagonalizableModel& model);

struct MoserReport {
    double p = 2.0;
    double c_measured = 0.0;
    double sup_norm = 0.0;  // sup_{t in (T, T+1]} ||P(.,t)||_inf
    double lp_norm = 0.0;   // ||P(.,T)||_p
    double ratio = 0.0;     // sup_norm / lp_norm
    bool p_gate_ok = false; // p > c_measured + 1
    bool blew_up = false;
};

/// Simulates W_t = Div(a(W) DW) with a = B^{-1} alpha B to T+1 and checks
/// the boundedness estimate sup ||P||_inf <= C ||P(.,T)||_p. Runs even when
/// p <= c+1, with the gate flagged.
MoserReport moser_experiment(const DiagonalizableModel& model, const Field& w0,
                             const SolverConfig& base_config, double p, double t_mark);

}  // namespace cdlab
