#include "cdlab/diagonal.hpp"

#include <cmath>
#include <sstream>

namespace cdlab {

namespace {

std::string probe_string(const Eigen::VectorXd& w) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < w.size(); ++i) os << (i ? ", " : "") << w[i];
    os << ")";
    return os.str();
}

const QuadratureRule& p_rule() {
    static const QuadratureRule rule = gauss_rule_graded(16);
    return rule;
}

}  // namespace

Eigen::MatrixXd DiagonalizableModel::a(const Eigen::VectorXd& w) const {
    if (a_fn) return a_fn(w);
    const Eigen::MatrixXd b = B(w);
    const Eigen::VectorXd al = alpha_diag(w);
    // a = B^{-1} alpha B
    return b.partialPivLu().solve(al.asDiagonal() * b);
}

std::vector<Eigen::MatrixXd> DiagonalizableModel::dB(const Eigen::VectorXd& w) const {
    if (B_W) return B_W(w);
    std::vector<Eigen::MatrixXd> out(m);
    for (int r = 0; r < m; ++r) {
        const double h = fd_step * std::max(1.0, std::abs(w[r]));
        Eigen::VectorXd up = w, dn = w;
        up[r] += h;
        dn[r] -= h;
        out[r] = (B(up) - B(dn)) / (2.0 * h);
    }
    return out;
}

DiffusionModel DiagonalizableModel::to_diffusion() const {
    DiffusionModel dm;
    dm.m = m;
    dm.preset = "diagonalizable:" + preset;
    const DiagonalizableModel self = *this;
    dm.a = [self](const Eigen::VectorXd& w) { return self.a(w); };
    auto ad = alpha_diag;
    dm.lambda = [ad](const Eigen::VectorXd& w) { return ad(w).minCoeff(); };
    dm.Lambda = [ad](const Eigen::VectorXd& w) { return ad(w).maxCoeff(); };
    return dm;
}

DiagonalizableModel DiagonalizableModel::constant(const Eigen::MatrixXd& b0,
                                                  const Eigen::VectorXd& alphas) {
    DiagonalizableModel model;
    model.m = static_cast<int>(b0.rows());
    model.preset = "constant-B";
    model.lambda0 = alphas.minCoeff();
    model.B = [b0](const Eigen::VectorXd&) { return b0; };
    const int m = model.m;
    model.B_W = [m](const Eigen::VectorXd&) {
        return std::vector<Eigen::MatrixXd>(m, Eigen::MatrixXd::Zero(m, m));
    };
    model.alpha_diag = [alphas](const Eigen::VectorXd&) { return alphas; };
    // constant B: a = B^{-1} alpha B is constant too, precompute
    const Eigen::MatrixXd a0 = b0.partialPivLu().solve(alphas.asDiagonal() * b0);
    model.a_fn = [a0](const Eigen::VectorXd&) { return a0; };
    return model;
}

DiagonalizableModel DiagonalizableModel::power(double l, const Eigen::VectorXd& alphas) {
    DiagonalizableModel model;
    const int m = static_cast<int>(alphas.size());
    model.m = m;
    model.l = l;
    model.preset = "power-B";
    model.lambda0 = alphas.minCoeff();
    model.B = [l, m](const Eigen::VectorXd& w) {
        return (std::pow(w.norm(), l) * Eigen::MatrixXd::Identity(m, m)).eval();
    };
    model.B_W = [l, m](const Eigen::VectorXd& w) {
        std::vector<Eigen::MatrixXd> out(m);
        const double wn = w.norm();
        for (int r = 0; r < m; ++r) {
            const double factor = wn == 0.0 ? 0.0 : l * std::pow(wn, l - 2.0) * w[r];
            out[r] = factor * Eigen::MatrixXd::Identity(m, m);
        }
        return out;
    };
    model.alpha_diag = [alphas](const Eigen::VectorXd&) { return alphas; };
    // B is a scalar multiple of Id, so a = alpha exactly (avoids the
    // singular inversion at W = 0)
    model.a_fn = [alphas, m](const Eigen::VectorXd&) {
        return Eigen::MatrixXd(alphas.asDiagonal());
    };
    return model;
}

DiagonalizableModel DiagonalizableModel::scaled(const DiagonalizableModel& base, double kappa) {
    DiagonalizableModel model = base;
    model.preset = base.preset + "-scaled";
    auto b = base.B;
    model.B = [b, kappa](const Eigen::VectorXd& w) { return (kappa * b(w)).eval(); };
    if (base.B_W) {
        auto bw = base.B_W;
        model.B_W = [bw, kappa](const Eigen::VectorXd& w) {
            auto out = bw(w);
            for (auto& d : out) d *= kappa;
            return out;
        };
    }
    return model;
}

Eigen::VectorXd p_transform_point(const Eigen::VectorXd& w, const DiagonalizableModel& model) {
    const QuadratureRule& rule = p_rule();
    const Eigen::MatrixXd b0 = model.B(Eigen::VectorXd::Zero(model.m));
    Eigen::VectorXd p = b0 * w;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const Eigen::MatrixXd incr = model.B(rule.nodes[i] * w) - b0;
        p += rule.weights[i] * (incr * w);
    }
    return p;
}

Field p_transform(const Field& w, const DiagonalizableModel& model) {
    if (w.components() != model.m) throw std::invalid_argument("p_transform: component mismatch");
    Field out(w.grid(), model.m);
    Eigen::VectorXd wv(model.m);
    for (long cell = 0; cell < w.cell_count(); ++cell) {
        for (int c = 0; c < model.m; ++c) wv[c] = w.at(cell, c);
        const Eigen::VectorXd p = p_transform_point(wv, model);
        for (int c = 0; c < model.m; ++c) out.at(cell, c) = p[c];
    }
    return out;
}

BmatReport bmat_condition(const DiagonalizableModel& model,
                          const std::vector<Eigen::VectorXd>& probes) {
    if (probes.empty()) throw std::invalid_argument("bmat_condition: empty probe set");
    BmatReport report;
    report.norm_mode = model.norm_mode;

    for (const auto& w : probes) {
        const Eigen::MatrixXd b = model.B(w);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
        if (!lu.isInvertible())
            throw std::runtime_error("bmat_condition: singular B at probe W=" + probe_string(w));
        const Eigen::MatrixXd binv = lu.inverse();
        const auto dbs = model.dB(w);

        double sum_dbinv = 0.0, sum_bwbinv = 0.0;
        for (int r = 0; r < model.m; ++r) {
            const Eigen::MatrixXd dbinv_r = -binv * dbs[r] * binv;  // (B^{-1})_W
            sum_dbinv += sqr(matrix_norm(dbinv_r, model.norm_mode));
            sum_bwbinv += sqr(matrix_norm(dbs[r] * binv, model.norm_mode));
        }

        BmatProbeRow row;
        row.w = w;
        const Eigen::VectorXd al = model.alpha_diag(w);
        row.min_lambda = al.minCoeff();
        row.max_lambda = al.maxCoeff();
        row.p_norm = p_transform_point(w, model).norm();
        const double norm_b = matrix_norm(b, model.norm_mode);
        const double norm_binv = matrix_norm(binv, model.norm_mode);
        row.lhs = row.max_lambda * norm_b * std::sqrt(sum_dbinv) * norm_binv;
        row.lhs_variant = row.max_lambda * std::sqrt(sum_bwbinv) * norm_binv;
        row.c = row.lhs * row.p_norm / row.min_lambda;
        row.c_variant = row.lhs_variant * row.p_norm / row.min_lambda;

        report.c_measured = std::max(report.c_measured, row.c);
        report.c_variant_measured = std::max(report.c_variant_measured, row.c_variant);
        report.rows.push_back(std::move(row));
    }
    return report;
}

TransformedResidual transformed_residual(const Trajectory& traj,
                                         const DiagonalizableModel& model) {
    TransformedResidual result;
    if (traj.snapshots.size() < 2)
        throw std::invalid_argument("transformed_residual: need >= 2 snapshots");
    const Grid& g = traj.snapshots.front().grid();
    const int m = model.m;

    Field p_prev = p_transform(traj.snapshots[0], model);
    for (size_t i = 1; i < traj.snapshots.size(); ++i) {
        const Field& w = traj.snapshots[i];
        const double dt = traj.times[i] - traj.times[i - 1];
        Field p_next = p_transform(w, model);

        const Field dp = gradient(p_next);
        const Field dwf = gradient(w);

        // flux alpha(W) DP, diagonal alpha applied componentwise
        Field flux(g, m * g.dim);
        Eigen::VectorXd wv(m);
        std::vector<Eigen::VectorXd> alphas(w.cell_count());
        for (long cell = 0; cell < w.cell_count(); ++cell) {
            for (int c = 0; c < m; ++c) wv[c] = w.at(cell, c);
            alphas[cell] = model.alpha_diag(wv);
            for (int c = 0; c < m; ++c)
                for (int axis = 0; axis < g.dim; ++axis)
                    flux.at(cell, c * g.dim + axis) = alphas[cell][c] * dp.at(cell, c * g.dim + axis);
        }
        const Field div = divergence(flux);

        std::vector<double> sq(w.cell_count());
        for (long cell = 0; cell < w.cell_count(); ++cell) {
            for (int c = 0; c < m; ++c) wv[c] = w.at(cell, c);
            const Eigen::MatrixXd b = model.B(wv);
            const Eigen::MatrixXd binv = b.partialPivLu().solve(Eigen::MatrixXd::Identity(m, m));
            const auto dbs = model.dB(wv);

            Eigen::VectorXd quad = Eigen::VectorXd::Zero(m);
            for (int axis = 0; axis < g.dim; ++axis) {
                Eigen::MatrixXd db_axis = Eigen::MatrixXd::Zero(m, m);
                for (int r = 0; r < m; ++r) db_axis += dbs[r] * dwf.at(cell, r * g.dim + axis);
                Eigen::VectorXd adp(m);
                for (int c = 0; c < m; ++c) adp[c] = alphas[cell][c] * dp.at(cell, c * g.dim + axis);
                quad += db_axis * (binv * adp);
            }

            double s = 0.0;
            for (int c = 0; c < m; ++c) {
                const double pt = (p_next.at(cell, c) - p_prev.at(cell, c)) / dt;
                const double rhs = div.at(cell, c) - quad[c];
                s += sqr(pt - rhs);
            }
            sq[cell] = s;
        }
        const double res = std::sqrt(pairwise_sum(sq) * g.cell_volume());
        result.times.push_back(0.5 * (traj.times[i] + traj.times[i - 1]));
        result.residuals.push_back(res);
        result.max_residual = std::max(result.max_residual, res);
        p_prev = std::move(p_next);
    }
    return result;
}

MoserReport moser_experiment(const DiagonalizableModel& model, const Field& w0,
                             const SolverConfig& base_config, double p, double t_mark) {
    MoserReport report;
    report.p = p;

    SolverConfig config = base_config;
    config.t_end = t_mark + 1.0;
    const Trajectory traj = simulate(model.to_diffusion(), config, w0);
    if (traj.blew_up) {
        report.blew_up = true;
        return report;
    }
    const Grid& g = w0.grid();

    // condition constant over trajectory-range probes (singular-B cells skipped)
    std::vector<Eigen::VectorXd> probes;
    const long cell_stride = std::max<long>(1, w0.cell_count() / 32);
    for (size_t s : {size_t{0}, traj.snapshots.size() / 2, traj.snapshots.size() - 1}) {
        const Field& w = traj.snapshots[s];
        for (long cell = 0; cell < w.cell_count(); cell += cell_stride) {
            Eigen::VectorXd wv(model.m);
            for (int c = 0; c < model.m; ++c) wv[c] = w.at(cell, c);
            if (Eigen::FullPivLU<Eigen::MatrixXd>(model.B(wv)).isInvertible())
                probes.push_back(std::move(wv));
        }
    }
    if (!probes.empty()) report.c_measured = bmat_condition(model, probes).c_measured;
    report.p_gate_ok = p > report.c_measured + 1.0;

    // ||P(.,T)||_p at the snapshot closest to t_mark
    size_t i_mark = 0;
    for (size_t i = 0; i < traj.times.size(); ++i)
        if (std::abs(traj.times[i] - t_mark) < std::abs(traj.times[i_mark] - t_mark)) i_mark = i;
    const Field p_mark = p_transform(traj.snapshots[i_mark], model);
    std::vector<double> powed(p_mark.cell_count());
    for (long cell = 0; cell < p_mark.cell_count(); ++cell)
        powed[cell] = std::pow(p_mark.norm_at(cell), p);
    report.lp_norm = std::pow(pairwise_sum(powed) * g.cell_volume(), 1.0 / p);

    for (size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] <= traj.times[i_mark]) continue;
        const Field pf = p_transform(traj.snapshots[i], model);
        for (long cell = 0; cell < pf.cell_count(); ++cell)
            report.sup_norm = std::max(report.sup_norm, pf.norm_at(cell));
    }

    report.ratio = report.lp_norm == 0.0
                       ? (report.sup_norm == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                       : report.sup_norm / report.lp_norm;
    return report;
}

}  // namespace cdlab
