#include "cdlab/model.hpp"

#include <cmath>

#include "cdlab/numerics.hpp"

namespace cdlab {

Eigen::VectorXd DiffusionModel::reaction(const Eigen::VectorXd& w, const std::array<double, 3>& x,
                                         double t) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(m);
    if (source) r += source(w);
    if (reaction_matrix) r += reaction_matrix(w) * w;
    if (g_xt) r += g_xt(x, t) * w;
    return r;
}

DiffusionModel DiffusionModel::heat(int m) {
    DiffusionModel model;
    model.m = m;
    model.preset = "heat";
    model.a = [m](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(m, m).eval(); };
    model.lambda = [](const Eigen::VectorXd&) { return 1.0; };
    model.Lambda = [](const Eigen::VectorXd&) { return 1.0; };
    return model;
}

DiffusionModel DiffusionModel::porous_media(double k, int m) {
    DiffusionModel model;
    model.m = m;
    model.k = k;
    model.preset = "porous-media";
    model.a = [m, k](const Eigen::VectorXd& w) {
        return (std::pow(w.norm(), k) * Eigen::MatrixXd::Identity(m, m)).eval();
    };
    model.lambda = [k](const Eigen::VectorXd& w) { return std::pow(w.norm(), k); };
    model.Lambda = [k](const Eigen::VectorXd& w) { return std::pow(w.norm(), k); };
    return model;
}

DiffusionModel DiffusionModel::constant_matrix(const Eigen::MatrixXd& a0) {
    DiffusionModel model;
    model.m = static_cast<int>(a0.rows());
    model.preset = "constant";
    Eigen::MatrixXd sym = 0.5 * (a0 + a0.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    model.a = [a0](const Eigen::VectorXd&) { return a0; };
    model.lambda = [lo](const Eigen::VectorXd&) { return lo; };
    model.Lambda = [hi](const Eigen::VectorXd&) { return hi; };
    return model;
}

DiffusionModel regularize(const DiffusionModel& model, double eps) {
    if (eps == 0.0) return model;
    DiffusionModel out = model;
    out.preset = model.preset + "+eps";
    auto base_a = model.a;
    const int m = model.m;
    out.a = [base_a, eps, m](const Eigen::VectorXd& w) {
        return (base_a(w) + eps * Eigen::MatrixXd::Identity(m, m)).eval();
    };
    auto base_lambda = model.lambda;
    auto base_Lambda = model.Lambda;
    out.lambda = [base_lambda, eps](const Eigen::VectorXd& w) { return base_lambda(w) + eps; };
    out.Lambda = [base_Lambda, eps](const Eigen::VectorXd& w) { return base_Lambda(w) + eps; };
    return out;
}

EllipticityProbeResult ellipticity_probe(const DiffusionModel& model,
                                         const std::vector<Eigen::VectorXd>& w_samples,
                                         const std::vector<Eigen::VectorXd>& zeta_samples) {
    if (w_samples.empty() || zeta_samples.empty())
        throw std::invalid_argument("ellipticity_probe: empty probe set");
    EllipticityProbeResult result;
    result.lambda_est = std::numeric_limits<double>::infinity();
    result.Lambda_est = -std::numeric_limits<double>::infinity();
    result.nu_est = std::numeric_limits<double>::infinity();
    for (const auto& w : w_samples) {
        Eigen::MatrixXd a = model.a(w);
        Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
        EllipticityProbe probe;
        probe.w = w;
        probe.lambda = std::numeric_limits<double>::infinity();
        probe.Lambda = -std::numeric_limits<double>::infinity();
        for (const auto& z : zeta_samples) {
            const double n2 = z.squaredNorm();
            if (n2 == 0.0) continue;
            const double q = z.dot(sym * z) / n2;
            probe.lambda = std::min(probe.lambda, q);
            probe.Lambda = std::max(probe.Lambda, q);
        }
        probe.nu = probe.Lambda != 0.0 ? probe.lambda / probe.Lambda : 1.0;
        result.lambda_est = std::min(result.lambda_est, probe.lambda);
        result.Lambda_est = std::max(result.Lambda_est, probe.Lambda);
        result.nu_est = std::min(result.nu_est, probe.nu);
        result.probes.push_back(std::move(probe));
    }
    return result;
}

SpectralGapResult spectral_gap_check(double nu, int dim, std::optional<double> p) {
    SpectralGapResult result;
    result.margin_dimension = nu - (1.0 - 2.0 / dim);
    result.pass_dimension = result.margin_dimension > 0.0;
    if (p) {
        result.margin_p = nu - (1.0 - 1.0 / *p);
        result.pass_p = result.margin_p > 0.0;
    }
    return result;
}

Field kirchhoff_transform(const Field& w, const std::function<double(double)>& lambda_scalar) {
    static const QuadratureRule rule = gauss_rule_unit(16);
    Field out(w.grid(), w.components());
    for (long cell = 0; cell < w.cell_count(); ++cell) {
        for (int c = 0; c < w.components(); ++c) {
            const double wi = w.at(cell, c);
            double sum = 0.0;
            for (size_t i = 0; i < rule.nodes.size(); ++i)
                sum += rule.weights[i] * lambda_scalar(rule.nodes[i] * wi);
            out.at(cell, c) = sum * wi;
        }
    }
    return out;
}

}  // namespace cdlab
