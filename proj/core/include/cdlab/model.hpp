#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cdlab/grid.hpp"

namespace cdlab {

/// Cross-diffusion model W_t = Div(a(W) DW) + F(W) + G(W) W.
/// `lambda`/`Lambda` are the ellipticity envelopes
/// lambda(W)|z|^2 <= <a(W)z, z> <= Lambda(W)|z|^2 (checked on probes, not
/// enforced). `g_xt` is an optional scalar space-time multiplier applied as
/// g(x,t) W, used by the uniqueness experiments.
struct DiffusionModel {
    int m = 1;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> a;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> source;           // F(W), optional
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> reaction_matrix;  // G(W), optional
    std::function<double(const std::array<double, 3>&, double)> g_xt;        // optional
    std::function<double(const Eigen::VectorXd&)> lambda;
    std::function<double(const Eigen::VectorXd&)> Lambda;
    std::string preset = "custom";
    double k = 0.0;  // power-law exponent tag where applicable

    Eigen::VectorXd reaction(const Eigen::VectorXd& w, const std::array<double, 3>& x,
                             double t) const;

    /// a = Id (heat system), lambda = Lambda = 1.
    static DiffusionModel heat(int m = 1);
    /// a(W) = |W|^k Id (porous-media type), lambda = Lambda = |W|^k.
    static DiffusionModel porous_media(double k, int m = 1);
    /// Constant coefficient matrix; envelopes from the symmetric part.
    static DiffusionModel constant_matrix(const Eigen::MatrixXd& a0);
};

/// a <- a + eps*Id, with both envelopes shifted by eps.
DiffusionModel regularize(const DiffusionModel& model, double eps);

struct EllipticityProbe {
    Eigen::VectorXd w;
    double lambda = 0.0;  // min Rayleigh quotient of sym(a(W)) over the zeta set
    double Lambda = 0.0;  // max
    double nu = 1.0;      // lambda / Lambda
};

struct EllipticityProbeResult {
    double lambda_est = 0.0;  // inf of quotients over all probes
    double Lambda_est = 0.0;  // sup
    double nu_est = 1.0;      // inf over W of the per-W quotient ratio
    std::vector<EllipticityProbe> probes;
};

EllipticityProbeResult ellipticity_probe(const DiffusionModel& model,
                                         const std::vector<Eigen::VectorXd>& w_samples,
                                         const std::vector<Eigen::VectorXd>& zeta_samples);

struct SpectralGapResult {
    bool pass_dimension = false;  // nu > 1 - 2/N
    double margin_dimension = 0.0;
    std::optional<bool> pass_p;  // nu > 1 - 1/p when p supplied
    double margin_p = 0.0;
};

SpectralGapResult spectral_gap_check(double nu, int dim, std::optional<double> p = std::nullopt);

/// Componentwise Kirchhoff transform U_i = int_0^{W_i} lambda(s) ds by
/// composite Gauss quadrature.
Field kirchhoff_transform(const Field& w, const std::function<double(double)>& lambda_scalar);

}  // namespace cdlab
