#include "cdlab/uniqueness.hpp"

#include <cmath>

#include "cdlab/numerics.hpp"

namespace cdlab {

Eigen::MatrixXd Nonlinearity::jacobian(const Eigen::VectorXd& u) const {
    if (phi_u) return phi_u(u);
    Eigen::MatrixXd j(m, m);
    for (int col = 0; col < m; ++col) {
        const double h = fd_step * std::max(1.0, std::abs(u[col]));
        Eigen::VectorXd up = u, dn = u;
        up[col] += h;
        dn[col] -= h;
        j.col(col) = (phi(up) - phi(dn)) / (2.0 * h);
    }
    return j;
}

Eigen::MatrixXd Nonlinearity::hessian_action(const Eigen::VectorXd& u,
                                             const Eigen::VectorXd& v) const {
    if (phi_uu_action) return phi_uu_action(u, v);
    const double vn = v.norm();
    if (vn == 0.0) return Eigen::MatrixXd::Zero(m, m);
    const double s = fd_step * std::max(1.0, u.norm()) / vn;
    return (jacobian(u + s * v) - jacobian(u - s * v)) / (2.0 * s);
}

Nonlinearity Nonlinearity::power(double k) {
    Nonlinearity f;
    f.m = 1;
    f.k = k;
    f.name = "power";
    f.phi = [k](const Eigen::VectorXd& u) {
        Eigen::VectorXd r(1);
        r[0] = std::pow(std::abs(u[0]), k) * u[0];
        return r;
    };
    f.phi_u = [k](const Eigen::VectorXd& u) {
        Eigen::MatrixXd j(1, 1);
        j(0, 0) = (k + 1.0) * std::pow(std::abs(u[0]), k);
        return j;
    };
    f.phi_uu_action = [k](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        Eigen::MatrixXd h(1, 1);
        const double au = std::abs(u[0]);
        h(0, 0) = au == 0.0 ? 0.0 : (k + 1.0) * k * std::pow(au, k - 1.0) * (u[0] > 0 ? 1.0 : -1.0) * v[0];
        return h;
    };
    return f;
}

Nonlinearity Nonlinearity::power_radial(double k, int m) {
    Nonlinearity f;
    f.m = m;
    f.k = k;
    f.name = "power-radial";
    f.phi = [k](const Eigen::VectorXd& u) { return (std::pow(u.norm(), k) * u).eval(); };
    f.phi_u = [k, m](const Eigen::VectorXd& u) {
        const double un = u.norm();
        if (un == 0.0) return Eigen::MatrixXd::Zero(m, m).eval();
        return (std::pow(un, k) * Eigen::MatrixXd::Identity(m, m) +
                k * std::pow(un, k - 2.0) * u * u.transpose())
            .eval();
    };
    return f;
}

Nonlinearity Nonlinearity::quadratic() {
    Nonlinearity f;
    f.m = 1;
    f.k = 2.0;
    f.name = "quadratic";
    f.phi = [](const Eigen::VectorXd& u) {
        Eigen::VectorXd r(1);
        r[0] = u[0] * u[0];
        return r;
    };
    f.phi_u = [](const Eigen::VectorXd& u) {
        Eigen::MatrixXd j(1, 1);
        j(0, 0) = 2.0 * u[0];
        return j;
    };
    f.phi_uu_action = [](const Eigen::VectorXd&, const Eigen::VectorXd& v) {
        Eigen::MatrixXd h(1, 1);
        h(0, 0) = 2.0 * v[0];
        return h;
    };
    return f;
}

Nonlinearity Nonlinearity::identity() {
    Nonlinearity f;
    f.m = 1;
    f.k = 0.0;
    f.name = "identity";
    f.phi = [](const Eigen::VectorXd& u) { return u; };
    f.phi_u = [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(1, 1).eval(); };
    f.phi_uu_action = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Zero(1, 1).eval();
    };
    return f;
}

ProbeSet ProbeSet::standard(int m, double v_max, int t_points, int radial, int angular) {
    ProbeSet set;
    for (int i = 0; i < t_points; ++i) set.ts.push_back((i + 0.5) / t_points);
    for (int j = 0; j < radial; ++j) {
        const double r = v_max * (j + 1) / radial;
        if (m == 1) {
            Eigen::VectorXd v(1);
            v[0] = r;
            set.vs.push_back(v);
            v[0] = -r;
            set.vs.push_back(v);
        } else if (m == 2) {
            for (int a = 0; a < angular; ++a) {
                const double th = 2.0 * M_PI * a / angular;
                Eigen::VectorXd v(2);
                v << r * std::cos(th), r * std::sin(th);
                set.vs.push_back(v);
            }
        } else {
            // Fibonacci sphere directions
            const double golden = M_PI * (3.0 - std::sqrt(5.0));
            for (int a = 0; a < angular; ++a) {
                const double z = 1.0 - 2.0 * (a + 0.5) / angular;
                const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double th = golden * a;
                Eigen::VectorXd v(m);
                v.setZero();
                v[0] = r * rho * std::cos(th);
                v[1] = r * rho * std::sin(th);
                v[2] = r * z;
                set.vs.push_back(v);
            }
        }
    }
    return set;
}

MonotonicityReport monotonicity_check(const Nonlinearity& phi, const ProbeSet& probes) {
    MonotonicityReport report;
    const Eigen::MatrixXd j0 = phi.jacobian(Eigen::VectorXd::Zero(phi.m));
    report.origin_norm = j0.norm();
    report.origin_ok = report.origin_norm <= 1e-8;

    bool semidef = true;
    report.worst = std::numeric_limits<double>::infinity();
    for (const auto& v : probes.vs) {
        for (double t : probes.ts) {
            const Eigen::MatrixXd h = phi.hessian_action(t * v, v);
            const Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
            double eigmin;
            if (phi.m == 1) {
                eigmin = sym(0, 0);
            } else {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
                eigmin = es.eigenvalues().minCoeff();
            }
            const double scale = std::max(1.0, sym.norm());
            if (eigmin < report.worst) {
                report.worst = eigmin;
                report.worst_t = t;
                report.worst_v = v;
            }
            if (eigmin < -1e-8 * scale) semidef = false;
            ++report.probes;
        }
    }
    report.pass = report.origin_ok && semidef;
    return report;
}

double pairing_inequality(const Nonlinearity& phi, const Field& a, const Field& b) {
    if (a.grid() != b.grid()) throw std::invalid_argument("pairing_inequality: grid mismatch");
    if (a.components() != phi.m || b.components() != phi.m)
        throw std::invalid_argument("pairing_inequality: component mismatch");
    const Grid& g = a.grid();
    const int m = phi.m;

    Field diff(g, m);
    for (long cell = 0; cell < a.cell_count(); ++cell)
        for (int c = 0; c < m; ++c) diff.at(cell, c) = a.at(cell, c) - b.at(cell, c);
    const Field dw = gradient(diff);

    static const QuadratureRule rule = gauss_rule_unit(8);
    double worst = std::numeric_limits<double>::infinity();
    Eigen::VectorXd ua(m), ub(m), dwa(m);
    for (long cell = 0; cell < a.cell_count(); ++cell) {
        for (int c = 0; c < m; ++c) {
            ua[c] = a.at(cell, c);
            ub[c] = b.at(cell, c);
        }
        Eigen::MatrixXd kmat = Eigen::MatrixXd::Zero(m, m);
        for (size_t q = 0; q < rule.nodes.size(); ++q) {
            const double s = rule.nodes[q];
            kmat += rule.weights[q] * phi.jacobian(s * ua + (1.0 - s) * ub);
        }
        double pairing = 0.0;
        for (int axis = 0; axis < g.dim; ++axis) {
            for (int c = 0; c < m; ++c) dwa[c] = dw.at(cell, c * g.dim + axis);
            pairing += dwa.dot(kmat * dwa);
        }
        worst = std::min(worst, pairing);
    }
    return worst;
}

double gronwall_bound(double y0, std::span<const double> q_samples, double t, double c) {
    if (q_samples.empty()) throw std::invalid_argument("gronwall_bound: empty samples");
    double integral;
    if (q_samples.size() == 1 || t == 0.0) {
        integral = q_samples[0] * t;
    } else {
        const size_t n = q_samples.size() - 1;
        double sum = 0.5 * (q_samples[0] + q_samples[n]);
        for (size_t i = 1; i < n; ++i) sum += q_samples[i];
        integral = sum * (t / static_cast<double>(n));
    }
    return std::exp(integral) * (y0 + c);
}

TwoSolutionReport two_solution_experiment(
    const Nonlinearity& phi, const std::function<double(const std::array<double, 3>&, double)>& g,
    const Field& u0, const Field& v0, const SolverConfig& config, double tolerance) {
    if (u0.grid() != v0.grid())
        throw std::invalid_argument("two_solution_experiment: grid mismatch");
    const Grid& grid = u0.grid();

    DiffusionModel model;
    model.m = phi.m;
    model.preset = "phi-gradient-flow";
    model.a = [&phi](const Eigen::VectorXd& w) { return phi.jacobian(w); };
    model.g_xt = g;
    model.lambda = [&phi](const Eigen::VectorXd& w) {
        const Eigen::MatrixXd j = phi.jacobian(w);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (j + j.transpose()));
        return es.eigenvalues().minCoeff();
    };
    model.Lambda = [&phi](const Eigen::VectorXd& w) {
        const Eigen::MatrixXd j = phi.jacobian(w);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (j + j.transpose()));
        return es.eigenvalues().maxCoeff();
    };

    const Trajectory tu = simulate(model, config, u0);
    const Trajectory tv = simulate(model, config, v0);

    TwoSolutionReport report;
    if (tu.blew_up || tv.blew_up) {
        report.blew_up = true;
        report.blow_up_time = tu.blew_up ? tu.blow_up_time : tv.blow_up_time;
        return report;
    }

    const size_t nsnap = std::min(tu.snapshots.size(), tv.snapshots.size());
    std::vector<double> sup_g;
    for (size_t i = 0; i < nsnap; ++i) {
        const Field& u = tu.snapshots[i];
        const Field& v = tv.snapshots[i];
        std::vector<double> sq(u.cell_count());
        for (long cell = 0; cell < u.cell_count(); ++cell) {
            double s = 0.0;
            for (int c = 0; c < phi.m; ++c) s += sqr(u.at(cell, c) - v.at(cell, c));
            sq[cell] = s;
        }
        report.times.push_back(tu.times[i]);
        report.deviation_sq.push_back(pairwise_sum(sq) * grid.cell_volume());

        double sg = -std::numeric_limits<double>::infinity();
        if (g) {
            for (long cell = 0; cell < u.cell_count(); ++cell)
                sg = std::max(sg, g(grid.center(cell), tu.times[i]));
        } else {
            sg = 0.0;
        }
        sup_g.push_back(sg);
    }

    // Gronwall envelope for y = ||w||^2: d/dt int w^2 = 2 int w w_t gives
    // y' <= 2 (sup_x g) y, so q = 2 sup_x g in the bound
    double cumulative = 0.0;
    report.envelope.push_back(report.deviation_sq[0]);
    for (size_t i = 1; i < report.times.size(); ++i) {
        const double h = report.times[i] - report.times[i - 1];
        cumulative += 0.5 * (sup_g[i - 1] + sup_g[i]) * h;
        report.envelope.push_back(std::exp(2.0 * cumulative) * report.deviation_sq[0]);
    }

    for (size_t i = 0; i < report.times.size(); ++i) {
        const double env = report.envelope[i];
        const double excess = report.deviation_sq[i] - env;
        if (excess > 0.0)
            report.max_relative_violation =
                std::max(report.max_relative_violation, excess / std::max(env, 1e-300));
    }
    report.within_envelope = report.max_relative_violation <= tolerance;
    return report;
}

}  // namespace cdlab
