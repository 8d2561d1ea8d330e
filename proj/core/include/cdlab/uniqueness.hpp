#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cdlab/grid.hpp"
#include "cdlab/solver.hpp"

namespace cdlab {

/// Nonlinearity Phi: R^m -> R^m with first derivative (Jacobian) and the
/// second-derivative action [Phi_uu(u) v]_{ij} = sum_k d2Phi_i/du_j du_k v_k.
/// Analytic derivatives are optional; central finite differences are the
/// fallback (consistency checked in tests).
struct Nonlinearity {
    int m = 1;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> phi;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> phi_u;  // optional
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
        phi_uu_action;  // optional
    std::string name = "custom";
    double k = 1.0;
    double fd_step = 1e-5;

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& u) const;
    Eigen::MatrixXd hessian_action(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

    /// Phi(u) = |u|^k u, scalar.
    static Nonlinearity power(double k);
    /// Phi(u) = |u|^k u on R^m (radial power).
    static Nonlinearity power_radial(double k, int m);
    /// Phi(u) = u^2, the classic monotonicity failure.
    static Nonlinearity quadratic();
    /// Phi(u) = u; fails Phi_u(0) = 0.
    static Nonlinearity identity();
};

struct ProbeSet {
    std::vector<double> ts;             // open grid in (0,1)
    std::vector<Eigen::VectorXd> vs;    // radial x angular lattice
    /// 32 t-points; |v| ladder up to v_max with angular samples for m > 1.
    static ProbeSet standard(int m, double v_max = 4.0, int t_points = 32, int radial = 8,
                             int angular = 16);
};

struct MonotonicityReport {
    bool pass = false;
    bool origin_ok = false;       // Phi_u(0) = 0 within tolerance
    double origin_norm = 0.0;     // |Phi_u(0)|
    double worst = 0.0;           // most negative eigenvalue of sym(Phi_uu(tv) v) seen
    double worst_t = 0.0;
    Eigen::VectorXd worst_v;
    long probes = 0;
};

/// Checks Phi_u(0) = 0 and semidefiniteness of Phi_uu(tv) v over the probe
/// set. Tolerance: min eigenvalue >= -1e-8 * matrix scale.
MonotonicityReport monotonicity_check(const Nonlinearity& phi, const ProbeSet& probes);

/// Min over cells of <K(x) D(a-b), D(a-b)> with
/// K(x) = int_0^1 Phi_u(s a(x) + (1-s) b(x)) ds (positive-weight
/// quadrature), the integrand the uniqueness proof bounds. Nonnegative up
/// to rounding whenever Phi passes monotonicity_check.
double pairing_inequality(const Nonlinearity& phi, const Field& a, const Field& b);

/// y(t) <= exp(int_0^t q) [y0 + c], with the integral by trapezoid over the
/// uniform samples q[0..n] on [0, t].
double gronwall_bound(double y0, std::span<const double> q_samples, double t, double c);

struct TwoSolutionReport {
    std::vector<double> times;
    std::vector<double> deviation_sq;  // ||u - v||_L2^2
    std::vector<double> envelope;      // exp(int sup_x g) ||w(0)||^2
    double max_relative_violation = 0.0;
    bool within_envelope = false;
    bool blew_up = false;
    double blow_up_time = 0.0;
};

/// Runs u and v under u_t = Div(Phi_u(u) Du) + g(x,t) u from the two data
/// and compares ||u-v||^2 against the Gronwall envelope
/// exp(2 int_0^t sup_x g) ||w(0)||^2 (the factor 2 comes from
/// d/dt int w^2 = 2 int w w_t). `tolerance` absorbs the O(dt)
/// discretization slack.
TwoSolutionReport two_solution_experiment(
    const Nonlinearity& phi, const std::function<double(const std::array<double, 3>&, double)>& g,
    const Field& u0, const Field& v0, const SolverConfig& config, double tolerance = 1e-8);

}  // namespace cdlab
