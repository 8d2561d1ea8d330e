#include "cdlab/gn.hpp"

#include <cmath>
#include <limits>

#include "cdlab/harmonic.hpp"
#include "cdlab/numerics.hpp"

namespace cdlab {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value))
        throw std::runtime_error(std::string("gnbmo: non-finite integral ") + name);
}

double ratio_or_limit(double num, double denom) {
    if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / denom;
}

}  // namespace

void GNInputs::validate(bool weak) const {
    const Grid& g = u.grid();
    auto check_grid = [&](const Field& f, const char* name) {
        if (f.grid() != g) throw std::invalid_argument(std::string("gnbmo: ") + name +
                                                       " lives on a different grid");
    };
    check_grid(gamma, "Gamma");
    check_grid(lambda, "lambda");
    check_grid(omega, "omega");
    if (h) check_grid(*h, "H");
    if (gamma.components() != 1 || lambda.components() != 1 || omega.components() != 1)
        throw std::invalid_argument("gnbmo: Gamma, lambda, omega must be scalar");
    if (!(p >= 1.0)) throw std::invalid_argument("gnbmo: p must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("gnbmo: R must be positive");
    if (weak && !(eps_star > 0.0 && eps_star <= radius))
        throw std::invalid_argument("gnbmo: requires 0 < eps_* <= R");

    const double r_slack = radius * (1.0 + 1e-12);
    for (long cell = 0; cell < u.cell_count(); ++cell) {
        const double gv = gamma.at(cell), lv = lambda.at(cell);
        if (gv < 0.0 || lv < 0.0)
            throw std::invalid_argument("gnbmo: Gamma and lambda must be nonnegative");
        if (omega.at(cell) != 0.0) {
            double d2 = 0.0;
            auto x = g.center(cell);
            for (int a = 0; a < g.dim; ++a) d2 += sqr(x[a] - center[a]);
            if (std::sqrt(d2) > r_slack)
                throw std::invalid_argument("gnbmo: omega not supported in B_R(center)");
        }
    }
}

StrongIntegrals compute_strong_integrals(const GNInputs& in) {
    const Grid& g = in.u.grid();
    const Field du = gradient(in.u, GradientRule::OneSided);
    const Field d2u = gradient(du, GradientRule::OneSided);

    Field f1(g, 1), f2(g, 1), fb(g, 1);
    for (long cell = 0; cell < in.u.cell_count(); ++cell) {
        const double w2 = sqr(in.omega.at(cell));
        const double dun = du.norm_at(cell);
        f1.at(cell) = in.gamma.at(cell) * std::pow(dun, 2.0 * in.p + 2.0) * w2;
        f2.at(cell) = in.lambda.at(cell) * std::pow(dun, 2.0 * in.p - 2.0) * sqr(d2u.norm_at(cell)) * w2;
        fb.at(cell) = in.lambda.at(cell) * std::pow(dun, 2.0 * in.p) * w2;
    }
    return {integrate(f1), integrate(f2), integrate(fb)};
}

WeakIntegrals compute_weak_integrals(const GNInputs& in) {
    const Grid& g = in.u.grid();
    const Field du = gradient(in.u, GradientRule::OneSided);
    const Field hf = in.h ? *in.h : du;
    const Field dh = gradient(hf, GradientRule::OneSided);

    Field f1(g, 1), f2(g, 1), fb(g, 1);
    for (long cell = 0; cell < in.u.cell_count(); ++cell) {
        const double w2 = sqr(in.omega.at(cell));
        const double hn = hf.norm_at(cell);
        f1.at(cell) = in.gamma.at(cell) * std::pow(hn, 2.0 * in.p) * sqr(du.norm_at(cell)) * w2;
        f2.at(cell) = in.lambda.at(cell) * std::pow(hn, 2.0 * in.p - 2.0) * sqr(dh.norm_at(cell)) * w2;
        fb.at(cell) = in.lambda.at(cell) * std::pow(hn, 2.0 * in.p) * w2;
    }
    return {integrate(f1), integrate(f2), integrate(fb)};
}

double compute_eps_tilde(const Field& du, double eps_star, const std::array<double, 3>& center) {
    if (!(eps_star > 0.0)) throw std::invalid_argument("compute_eps_tilde: eps_* must be positive");
    const Grid& g = du.grid();
    const auto cells = ball_cells(g, center, eps_star);
    std::vector<double> terms;
    terms.reserve(cells.size());
    for (long cell : cells) terms.push_back(sqr(du.norm_at(cell)));
    const double integral = pairwise_sum(terms) * g.cell_volume();
    return std::sqrt(std::pow(eps_star, -g.dim + 2.0) * integral);
}

GammaConditionReport check_gamma_conditions(const GNInputs& in, const Field* pairing) {
    const Field dgamma = gradient(in.gamma, GradientRule::OneSided);
    GammaConditionReport report;

    for (long cell = 0; cell < in.u.cell_count(); ++cell) {
        if (in.omega.at(cell) == 0.0) continue;  // conditions live on supp(omega)
        const double gv = in.gamma.at(cell);
        const double lv = in.lambda.at(cell);

        if (gv > 0.0 && lv == 0.0)
            report.c_star_infinite = true;
        else if (gv > 0.0)
            report.c_star = std::max(report.c_star, gv / lv);

        const double num = sqr(dgamma.norm_at(cell)) * sqr(in.u.norm_at(cell));
        const double den = gv * lv;
        if (num > 0.0 && den == 0.0)
            report.c_gradient_infinite = true;
        else if (num > 0.0)
            report.c_gradient = std::max(report.c_gradient, num / den);

        if (pairing) {
            const double pv = pairing->at(cell);
            if (pv > 0.0 && gv == 0.0)
                report.c_pairing_infinite = true;
            else if (pv > 0.0)
                report.c_pairing = std::max(report.c_pairing.value_or(0.0), pv / gv);
        }
    }
    if (report.c_star_infinite) report.c_star = std::numeric_limits<double>::infinity();
    if (report.c_gradient_infinite) report.c_gradient = std::numeric_limits<double>::infinity();
    if (pairing && !report.c_pairing) report.c_pairing = 0.0;
    return report;
}

namespace {

GNReport assemble_report(const GNInputs& in, bool weak, double i1, double i2, double ibreve,
                         std::optional<double> c_n, std::optional<double> c_np) {
    require_finite(i1, weak ? "mI1" : "I1");
    require_finite(i2, weak ? "mI2" : "I2");
    require_finite(ibreve, weak ? "mIbreve" : "Ibreve");

    GNReport report;
    report.weak = weak;
    report.i1 = i1;
    report.i2 = i2;
    report.ibreve = ibreve;
    report.omega_tilde = bmo_norm_local(in.u, in.center, in.radius);

    const GammaConditionReport cond = check_gamma_conditions(in);
    report.c_star = cond.c_star;
    report.c_star_infinite = cond.c_star_infinite;
    if (cond.c_star_infinite)
        report.hypothesis_flags.push_back("Gamma<=C*lambda: violated (C_* infinite)");
    else
        report.hypothesis_flags.push_back("Gamma<=C*lambda: C_*=" + std::to_string(cond.c_star));
    if (cond.c_gradient_infinite)
        report.hypothesis_flags.push_back("|DGamma|^2|u|^2<=C Gamma lambda: violated");
    else
        report.hypothesis_flags.push_back("|DGamma|^2|u|^2<=C Gamma lambda: C=" +
                                          std::to_string(cond.c_gradient));

    const double cw2 = sqr(report.c_star) * sqr(report.omega_tilde);
    report.lhs = i1;
    report.rhs_term_i2 = cw2 * i2;
    double lower_order = 1.0 + cw2 / sqr(in.radius);
    if (weak) {
        report.eps_tilde =
            compute_eps_tilde(gradient(in.u, GradientRule::OneSided), in.eps_star, in.center);
        lower_order += sqr(report.eps_tilde) / sqr(in.eps_star);
    }
    report.rhs_term_ibreve = lower_order * ibreve;
    report.ratio = ratio_or_limit(report.lhs, report.rhs_term_i2 + report.rhs_term_ibreve);

    report.c_n = c_n;
    report.c_np = c_np;
    if (c_n && c_np) {
        double rhs = *c_n * cw2 * i2;
        if (weak)
            rhs += *c_np * (cw2 / sqr(in.radius) + sqr(report.eps_tilde) / sqr(in.eps_star) + 1.0) *
                   ibreve;
        else
            rhs += (*c_np + cw2 / sqr(in.radius)) * ibreve;
        report.pass = report.lhs <= rhs;
    }
    return report;
}

}  // namespace

GNReport verify_strong_gnbmo(const GNInputs& in, std::optional<double> c_n,
                             std::optional<double> c_np) {
    in.validate(false);
    const StrongIntegrals ints = compute_strong_integrals(in);
    return assemble_report(in, false, ints.i1, ints.i2, ints.ibreve, c_n, c_np);
}

GNReport verify_weak_gnbmo(const GNInputs& in, std::optional<double> c_n,
                           std::optional<double> c_np) {
    in.validate(true);
    const WeakIntegrals ints = compute_weak_integrals(in);
    return assemble_report(in, true, ints.i1, ints.i2, ints.ibreve, c_n, c_np);
}

}  // namespace cdlab
