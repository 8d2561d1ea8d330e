#include "cdlab/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <Eigen/IterativeLinearSolvers>

#include <cmath>

#include "cdlab/numerics.hpp"
#include "cdlab/regularity.hpp"

namespace cdlab {

namespace {

Eigen::VectorXd state_vector(const Field& w) {
    const int m = w.components();
    Eigen::VectorXd v(w.cell_count() * m);
    for (long cell = 0; cell < w.cell_count(); ++cell)
        for (int c = 0; c < m; ++c) v[cell * m + c] = w.at(cell, c);
    return v;
}

Field state_field(const Eigen::VectorXd& v, const Grid& g, int m) {
    Field w(g, m);
    for (long cell = 0; cell < w.cell_count(); ++cell)
        for (int c = 0; c < m; ++c) w.at(cell, c) = v[cell * m + c];
    return w;
}

std::vector<Eigen::MatrixXd> cell_coefficients(const Field& w, const DiffusionModel& model,
                                               double eps) {
    const int m = model.m;
    std::vector<Eigen::MatrixXd> coeff(w.cell_count());
    Eigen::VectorXd wv(m);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
    for (long cell = 0; cell < w.cell_count(); ++cell) {
        for (int c = 0; c < m; ++c) wv[c] = w.at(cell, c);
        coeff[cell] = model.a(wv);
        if (eps != 0.0) coeff[cell] += eps * id;
    }
    return coeff;
}

/// Flux-form Div([a(W)+eps Id] D.) linearized at `w`, as a sparse operator
/// on the stacked state (cell-major, m components per cell). Face
/// coefficients are arithmetic means of the cell values; Neumann faces
/// carry zero flux, Dirichlet faces the homogeneous value.
Eigen::SparseMatrix<double> assemble_diffusion(const Field& w, const DiffusionModel& model,
                                               double eps) {
    const Grid& g = w.grid();
    const int m = model.m;
    const long n = g.cell_count();
    const auto coeff = cell_coefficients(w, model, eps);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(n) * m * m * (2 * g.dim + 1));

    for (int axis = 0; axis < g.dim; ++axis) {
        const double ih2 = 1.0 / sqr(g.spacing(axis));
        for (long cell = 0; cell < n; ++cell) {
            auto c = g.coords(cell);
            if (c[axis] + 1 < g.cells[axis]) {
                auto c2 = c;
                c2[axis] += 1;
                const long cell2 = g.index(c2);
                const Eigen::MatrixXd K = 0.5 * (coeff[cell] + coeff[cell2]) * ih2;
                for (int r = 0; r < m; ++r)
                    for (int s = 0; s < m; ++s) {
                        const double v = K(r, s);
                        trip.emplace_back(cell * m + r, cell2 * m + s, v);
                        trip.emplace_back(cell * m + r, cell * m + s, -v);
                        trip.emplace_back(cell2 * m + r, cell * m + s, v);
                        trip.emplace_back(cell2 * m + r, cell2 * m + s, -v);
                    }
            }
            if (g.boundary == BoundaryKind::Dirichlet &&
                (c[axis] == 0 || c[axis] == g.cells[axis] - 1)) {
                // ghost = -W: flux through the boundary face is -2 a(W) W / h
                const Eigen::MatrixXd K = 2.0 * coeff[cell] * ih2;
                for (int r = 0; r < m; ++r)
                    for (int s = 0; s < m; ++s)
                        trip.emplace_back(cell * m + r, cell * m + s, -K(r, s));
            }
        }
    }

    Eigen::SparseMatrix<double> L(n * m, n * m);
    L.setFromTriplets(trip.begin(), trip.end());
    return L;
}

Eigen::VectorXd reaction_vector(const Field& w, const DiffusionModel& model, double t) {
    const Grid& g = w.grid();
    const int m = model.m;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(w.cell_count() * m);
    if (!model.source && !model.reaction_matrix && !model.g_xt) return r;
    Eigen::VectorXd wv(m);
    for (long cell = 0; cell < w.cell_count(); ++cell) {
        for (int c = 0; c < m; ++c) wv[c] = w.at(cell, c);
        const Eigen::VectorXd rc = model.reaction(wv, g.center(cell), t);
        for (int c = 0; c < m; ++c) r[cell * m + c] = rc[c];
    }
    return r;
}

}  // namespace

Field diffusion_operator(const Field& w, const DiffusionModel& model, double eps) {
    const Eigen::SparseMatrix<double> L = assemble_diffusion(w, model, eps);
    return state_field(L * state_vector(w), w.grid(), model.m);
}

double stability_limit(const Field& w, const DiffusionModel& model, const SolverConfig& config) {
    const Grid& g = w.grid();
    double hmin = g.spacing(0);
    for (int a = 1; a < g.dim; ++a) hmin = std::min(hmin, g.spacing(a));
    double max_Lambda = 0.0;
    Eigen::VectorXd wv(model.m);
    for (long cell = 0; cell < w.cell_count(); ++cell) {
        for (int c = 0; c < model.m; ++c) wv[c] = w.at(cell, c);
        max_Lambda = std::max(max_Lambda, model.Lambda(wv));
    }
    return sqr(hmin) / (2.0 * g.dim * (max_Lambda + config.epsilon));
}

Field step(const Field& w, double t, const DiffusionModel& model, const SolverConfig& config) {
    if (w.components() != model.m) throw std::invalid_argument("step: component mismatch");
    if (!w.all_finite()) throw BlowUpError(t);

    const Grid& g = w.grid();
    const int m = model.m;
    const double dt = config.dt;
    const Eigen::SparseMatrix<double> L = assemble_diffusion(w, model, config.epsilon);
    const Eigen::VectorXd wvec = state_vector(w);
    const Eigen::VectorXd r = reaction_vector(w, model, t);

    Eigen::VectorXd next;
    if (config.scheme == Scheme::Explicit) {
        next = wvec + dt * (L * wvec + r);
    } else {
        Eigen::SparseMatrix<double> id(L.rows(), L.cols());
        id.setIdentity();
        const Eigen::SparseMatrix<double> M = id - dt * L;
        const Eigen::VectorXd b = wvec + dt * r;
        if (config.linear_solver == LinearSolverKind::SparseLU) {
            Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
            lu.compute(M);
            if (lu.info() != Eigen::Success)
                throw SolveError(t, std::numeric_limits<double>::quiet_NaN());
            next = lu.solve(b);
        } else {
            Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> cg;
            cg.setTolerance(config.linear_tol);
            cg.compute(M);
            next = cg.solveWithGuess(b, wvec);
            if (cg.info() != Eigen::Success) throw SolveError(t, cg.error());
        }
        const double bnorm = b.norm();
        const double res = (M * next - b).norm() / (bnorm > 0.0 ? bnorm : 1.0);
        if (!std::isfinite(res) || res > std::max(1e-8, 10.0 * config.linear_tol))
            throw SolveError(t, res);
    }

    Field out = state_field(next, g, m);
    if (!out.all_finite()) throw BlowUpError(t + dt);
    return out;
}

DiagnosticsRow compute_diagnostics(const Field& w, double t,
                                   const std::vector<double>& grad_norm_powers) {
    const Grid& g = w.grid();
    const int m = w.components();
    DiagnosticsRow row;
    row.time = t;
    row.mass.resize(m);
    row.min_value.resize(m);
    row.max_value.resize(m);
    for (int c = 0; c < m; ++c) {
        auto vals = w.comp(c);
        row.mass[c] = pairwise_sum(vals) * g.cell_volume();
        row.min_value[c] = *std::min_element(vals.begin(), vals.end());
        row.max_value[c] = *std::max_element(vals.begin(), vals.end());
    }
    std::vector<double> sq(w.cell_count());
    for (long cell = 0; cell < w.cell_count(); ++cell) sq[cell] = sqr(w.norm_at(cell));
    row.l2 = std::sqrt(pairwise_sum(sq) * g.cell_volume());

    bool can_grad = true;
    for (int a = 0; a < g.dim; ++a) can_grad = can_grad && g.cells[a] >= 3;
    if (can_grad && !grad_norm_powers.empty()) {
        for (double power : grad_norm_powers)
            row.grad_norms.push_back(lp_gradient_norm(w, power, IndexBox::whole(g)));
    }
    return row;
}

Trajectory simulate(const DiffusionModel& model, const SolverConfig& config, const Field& w0) {
    if (!(config.dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
    Trajectory traj;
    const long nsteps = std::llround(config.t_end / config.dt);

    Field w = w0;
    traj.times.push_back(0.0);
    traj.snapshots.push_back(w);
    traj.diagnostics.push_back(compute_diagnostics(w, 0.0, config.grad_norm_powers));

    for (long i = 0; i < nsteps; ++i) {
        const double t = i * config.dt;
        try {
            w = step(w, t, model, config);
        } catch (const BlowUpError& e) {
            traj.blew_up = true;
            traj.blow_up_time = e.time;
            traj.error = e.what();
            traj.final_time = t;
            return traj;
        } catch (const SolveError& e) {
            traj.blew_up = true;
            traj.blow_up_time = e.time;
            traj.error = e.what();
            traj.final_time = t;
            return traj;
        }
        const double tn = (i + 1) * config.dt;
        if ((i + 1) % config.stride == 0 || i + 1 == nsteps) {
            traj.times.push_back(tn);
            traj.snapshots.push_back(w);
            traj.diagnostics.push_back(compute_diagnostics(w, tn, config.grad_norm_powers));
        }
    }
    traj.final_time = nsteps * config.dt;
    return traj;
}

}  // namespace cdlab
