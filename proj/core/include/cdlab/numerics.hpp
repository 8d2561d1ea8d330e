#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cdlab {

/// Fixed-order pairwise summation. The reduction tree depends only on the
/// element order, never on thread count, so reported digits are stable
/// across runs and --threads settings.
double pairwise_sum(std::span<const double> values);

/// Composite Gauss-Legendre rule on [0,1]: `panels` subintervals with an
/// 8-node rule on each. Weights sum to 1 up to rounding.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_rule_unit(int panels);

/// Gauss-Legendre on [0,1] with panels graded geometrically toward 0
/// (boundaries 0, 2^{1-levels}, ..., 1/2, 1); resolves |s|^l integrands
/// with fractional l to ~1e-12 relative while staying exact for
/// polynomials on each panel.
QuadratureRule gauss_rule_graded(int levels);

/// Operator 2-norm. Uses a closed form for sizes <= 2 (exactly
/// scale-equivariant under power-of-two scalings, which the diagonal
/// module's kappa-scaling audit relies on) and Eigen's self-adjoint
/// eigensolver above that.
double operator_norm_2(const Eigen::MatrixXd& a);

/// Frobenius norm.
double frobenius_norm(const Eigen::MatrixXd& a);

enum class MatrixNorm { Operator2, Frobenius };

double matrix_norm(const Eigen::MatrixXd& a, MatrixNorm which);

/// Least-squares slope of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS of fit residuals
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

inline double sqr(double v) { return v * v; }

}  // namespace cdlab
