#include "cdlab/numerics.hpp"

#include <algorithm>
#include <stdexcept>

namespace cdlab {

namespace {

double pairwise_block(const double* v, size_t n) {
    if (n <= 64) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const size_t half = n / 2;
    return pairwise_block(v, half) + pairwise_block(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_block(values.data(), values.size());
}

QuadratureRule gauss_rule_unit(int panels) {
    // 8-node Gauss-Legendre on [-1,1]
    static const double xs[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double ws[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    QuadratureRule rule;
    for (int pnl = 0; pnl < panels; ++pnl) {
        const double a = static_cast<double>(pnl) / panels;
        const double b = static_cast<double>(pnl + 1) / panels;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 3; i >= 0; --i) {
            rule.nodes.push_back(mid - half * xs[i]);
            rule.weights.push_back(half * ws[i]);
        }
        for (int i = 0; i < 4; ++i) {
            rule.nodes.push_back(mid + half * xs[i]);
            rule.weights.push_back(half * ws[i]);
        }
    }
    return rule;
}

namespace {

void append_gauss8(QuadratureRule& rule, double a, double b) {
    static const double xs[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double ws[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 3; i >= 0; --i) {
        rule.nodes.push_back(mid - half * xs[i]);
        rule.weights.push_back(half * ws[i]);
    }
    for (int i = 0; i < 4; ++i) {
        rule.nodes.push_back(mid + half * xs[i]);
        rule.weights.push_back(half * ws[i]);
    }
}

}  // namespace

QuadratureRule gauss_rule_graded(int levels) {
    QuadratureRule rule;
    double lo = 0.0;
    for (int j = levels - 1; j >= 0; --j) {
        const double hi = std::ldexp(1.0, -j);
        append_gauss8(rule, lo, hi);
        lo = hi;
    }
    return rule;
}

double operator_norm_2(const Eigen::MatrixXd& a) {
    if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
    if (a.rows() == 2 && a.cols() == 2) {
        // largest eigenvalue of A^T A in closed form
        const double g00 = a(0, 0) * a(0, 0) + a(1, 0) * a(1, 0);
        const double g01 = a(0, 0) * a(0, 1) + a(1, 0) * a(1, 1);
        const double g11 = a(0, 1) * a(0, 1) + a(1, 1) * a(1, 1);
        const double tr = g00 + g11;
        const double disc = std::sqrt(sqr(g00 - g11) + 4.0 * g01 * g01);
        return std::sqrt(0.5 * (tr + disc));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double frobenius_norm(const Eigen::MatrixXd& a) { return a.norm(); }

double matrix_norm(const Eigen::MatrixXd& a, MatrixNorm which) {
    return which == MatrixNorm::Operator2 ? operator_norm_2(a) : frobenius_norm(a);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 matching samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit fit;
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double rss = 0.0;
    for (size_t i = 0; i < x.size(); ++i) rss += sqr(y[i] - fit.slope * x[i] - fit.intercept);
    fit.residual = std::sqrt(rss / n);
    return fit;
}

}  // namespace cdlab
