#include <doctest.h>

#include <random>

#include "cdlab/model.hpp"
#include "cdlab/numerics.hpp"
#include "cdlab/solver.hpp"
#include "test_fields.hpp"

using namespace cdlab;
using namespace cdlab::testing;

namespace {

double heat_error_1d(int cells, double dt, double t_end) {
    const Grid g = grid1d(cells, 1.0, BoundaryKind::Dirichlet);
    const Field u0 = Field::sample_scalar(
        g, [](const std::array<double, 3>& x) { return std::sin(M_PI * x[0]); });
    SolverConfig config;
    config.dt = dt;
    config.t_end = t_end;
    config.stride = 1 << 20;  // final state only
    const Trajectory traj = simulate(DiffusionModel::heat(), config, u0);
    REQUIRE(!traj.blew_up);
    const Field& w = traj.last();
    const double decay = std::exp(-M_PI * M_PI * traj.final_time);
    double err2 = 0.0;
    for (long cell = 0; cell < g.cell_count(); ++cell) {
        const double x = (cell + 0.5) * g.spacing(0);
        err2 += sqr(w.at(cell) - decay * std::sin(M_PI * x));
    }
    return std::sqrt(err2 * g.cell_volume());
}

}  // namespace

TEST_CASE("constant states are fixed points without reaction") {
    const Grid g = grid2d(16, 16);  // Neumann
    const Field w0(g, 2, 1.25);
    SolverConfig config;
    config.dt = 1e-2;
    config.t_end = 5e-2;
    const Trajectory traj = simulate(DiffusionModel::porous_media(2.0, 2), config, w0);
    REQUIRE(!traj.blew_up);
    for (long cell = 0; cell < g.cell_count(); ++cell)
        for (int c = 0; c < 2; ++c)
            CHECK(traj.last().at(cell, c) == doctest::Approx(1.25).epsilon(1e-13));
}

TEST_CASE("heat equation converges to the Fourier solution") {
    // dt order at fine h
    const double e1 = heat_error_1d(512, 4e-3, 0.1);
    const double e2 = heat_error_1d(512, 2e-3, 0.1);
    const double e3 = heat_error_1d(512, 1e-3, 0.1);
    const double dt_order = std::log2(e1 / e2);
    const double dt_order2 = std::log2(e2 / e3);
    CHECK(dt_order >= 0.9);
    CHECK(dt_order2 >= 0.9);

    // h order with dt tied to h^2
    const double f1 = heat_error_1d(32, 0.02 * sqr(1.0 / 32), 0.02);
    const double f2 = heat_error_1d(64, 0.02 * sqr(1.0 / 64), 0.02);
    const double f3 = heat_error_1d(128, 0.02 * sqr(1.0 / 128), 0.02);
    CHECK(std::log2(f1 / f2) >= 1.9);
    CHECK(std::log2(f2 / f3) >= 1.9);
}

TEST_CASE("Neumann mass conservation per step") {
    std::mt19937_64 rng(47);
    const Grid g = grid2d(24, 24);
    Field w0 = random_smooth(g, rng, 2);
    for (auto& v : w0.data()) v += 1.5;  // keep |W| away from the degenerate point

    SolverConfig config;
    config.dt = 2e-3;
    config.t_end = 4e-2;
    config.stride = 1;
    const Trajectory traj = simulate(DiffusionModel::porous_media(2.0, 2), config, w0);
    REQUIRE(!traj.blew_up);

    for (size_t i = 1; i < traj.diagnostics.size(); ++i)
        for (int c = 0; c < 2; ++c) {
            const double drift = std::abs(traj.diagnostics[i].mass[c] -
                                          traj.diagnostics[i - 1].mass[c]);
            CHECK(drift < 1e-12 * std::max(1.0, std::abs(traj.diagnostics[0].mass[c])));
        }
}

TEST_CASE("explicit and semi-implicit schemes agree to O(dt)") {
    std::mt19937_64 rng(53);
    const Grid g = grid1d(64);
    Field w0 = random_smooth(g, rng);
    for (auto& v : w0.data()) v += 1.2;

    const DiffusionModel model = DiffusionModel::porous_media(1.0);
    SolverConfig imp, expl;
    imp.dt = expl.dt = 2e-5;
    imp.t_end = expl.t_end = 2e-3;
    expl.scheme = Scheme::Explicit;
    CHECK(expl.dt < stability_limit(w0, model, expl));

    const Trajectory ti = simulate(model, imp, w0);
    const Trajectory te = simulate(model, expl, w0);
    REQUIRE(!ti.blew_up);
    REQUIRE(!te.blew_up);
    double worst = 0.0;
    for (long cell = 0; cell < g.cell_count(); ++cell)
        worst = std::max(worst, std::abs(ti.last().at(cell) - te.last().at(cell)));
    CHECK(worst < 50.0 * imp.dt);
}

TEST_CASE("explicit blow-up is reported with a time stamp") {
    const Grid g = grid1d(32);
    const Field w0 = Field::sample_scalar(
        g, [](const std::array<double, 3>& x) { return 4.0 + std::sin(8.0 * x[0]); });
    const DiffusionModel model = DiffusionModel::porous_media(2.0);
    SolverConfig config;
    config.scheme = Scheme::Explicit;
    config.dt = 100.0 * stability_limit(w0, model, config);
    config.t_end = config.dt * 200;
    const Trajectory traj = simulate(model, config, w0);
    CHECK(traj.blew_up);
    CHECK(traj.blow_up_time > 0.0);
    CHECK(traj.blow_up_time <= config.t_end);
    CHECK(!traj.snapshots.empty());  // partial trajectory retained
}

TEST_CASE("regularize shifts the model by eps Id") {
    const DiffusionModel pm = DiffusionModel::porous_media(2.0, 2);
    const DiffusionModel same = regularize(pm, 0.0);
    Eigen::VectorXd w(2);
    w << 0.5, -0.25;
    CHECK(same.a(w) == pm.a(w));

    DiffusionModel zero;
    zero.m = 2;
    zero.a = [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(2, 2).eval(); };
    zero.lambda = [](const Eigen::VectorXd&) { return 0.0; };
    zero.Lambda = [](const Eigen::VectorXd&) { return 0.0; };
    const DiffusionModel heat = regularize(zero, 1.0);
    CHECK(heat.a(w) == Eigen::MatrixXd::Identity(2, 2));
    CHECK(heat.lambda(w) == 1.0);

    // regularized porous medium at W = 0: both envelopes equal eps
    const DiffusionModel reg = regularize(pm, 0.1);
    Eigen::VectorXd zerov = Eigen::VectorXd::Zero(2);
    CHECK(reg.lambda(zerov) == doctest::Approx(0.1));
    CHECK(reg.Lambda(zerov) == doctest::Approx(0.1));
    CHECK(reg.lambda(zerov) / reg.Lambda(zerov) == doctest::Approx(1.0));
}

TEST_CASE("ellipticity probes and the spectral gap") {
    std::mt19937_64 rng(59);
    std::vector<Eigen::VectorXd> ws, zetas;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < 16; ++i) {
        Eigen::VectorXd w(2), z(2);
        for (int c = 0; c < 2; ++c) {
            w[c] = 2.0 * unit(rng);
            z[c] = unit(rng);
        }
        if (z.norm() == 0.0) z[0] = 1.0;
        ws.push_back(w);
        zetas.push_back(z);
    }

    const EllipticityProbeResult id = ellipticity_probe(DiffusionModel::heat(2), ws, zetas);
    CHECK(id.lambda_est == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.Lambda_est == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.nu_est == doctest::Approx(1.0).epsilon(1e-12));

    // a(W) = |W|^k Id has nu_* = 1
    const EllipticityProbeResult pm =
        ellipticity_probe(DiffusionModel::porous_media(2.0, 2), ws, zetas);
    CHECK(pm.nu_est == doctest::Approx(1.0).epsilon(1e-12));

    Eigen::MatrixXd diag(2, 2);
    diag << 1.0, 0.0, 0.0, 2.0;
    // axis-aligned probes recover the eigenvalue ratio exactly
    std::vector<Eigen::VectorXd> axes(2, Eigen::VectorXd::Zero(2));
    axes[0][0] = 1.0;
    axes[1][1] = 1.0;
    const EllipticityProbeResult dg =
        ellipticity_probe(DiffusionModel::constant_matrix(diag), ws, axes);
    CHECK(dg.nu_est == doctest::Approx(0.5).epsilon(1e-12));

    const SpectralGapResult gap3 = spectral_gap_check(1.0, 3);
    CHECK(gap3.pass_dimension);
    CHECK(gap3.margin_dimension == doctest::Approx(1.0 - 1.0 / 3.0));
    CHECK(!spectral_gap_check(0.2, 3).pass_dimension);
    const SpectralGapResult gp = spectral_gap_check(0.6, 3, 2.0);
    REQUIRE(gp.pass_p.has_value());
    CHECK(*gp.pass_p);  // 0.6 > 1 - 1/2
}

TEST_CASE("kirchhoff transform: identity, power law, zero") {
    const Grid g = grid1d(32);
    std::mt19937_64 rng(61);
    const Field w = random_smooth(g, rng);

    const Field id = kirchhoff_transform(w, [](double) { return 1.0; });
    for (long cell = 0; cell < g.cell_count(); ++cell)
        CHECK(id.at(cell) == doctest::Approx(w.at(cell)).epsilon(1e-14));

    Field pos = w;
    for (auto& v : pos.data()) v = std::abs(v) + 0.1;
    const double k = 2.0;
    const Field pw = kirchhoff_transform(pos, [k](double s) { return std::pow(std::abs(s), k); });
    for (long cell = 0; cell < g.cell_count(); ++cell)
        CHECK(pw.at(cell) ==
              doctest::Approx(std::pow(pos.at(cell), k + 1.0) / (k + 1.0)).epsilon(1e-12));

    const Field zero = kirchhoff_transform(Field(g, 1, 0.0), [](double s) { return s * s; });
    for (long cell = 0; cell < g.cell_count(); ++cell) CHECK(zero.at(cell) == 0.0);
}

TEST_CASE("flux lower bound |a(W)DW| >= lambda(W)|DW| on snapshots") {
    std::mt19937_64 rng(67);
    const Grid g = grid2d(24, 24);
    Field w0 = random_smooth(g, rng, 2);
    for (auto& v : w0.data()) v += 1.5;

    const DiffusionModel model = DiffusionModel::porous_media(2.0, 2);
    SolverConfig config;
    config.dt = 1e-3;
    config.t_end = 1e-2;
    const Trajectory traj = simulate(model, config, w0);
    REQUIRE(!traj.blew_up);

    for (const Field& w : traj.snapshots) {
        const Field dw = gradient(w);
        Eigen::VectorXd wv(2);
        for (long cell = 0; cell < g.cell_count(); ++cell) {
            for (int c = 0; c < 2; ++c) wv[c] = w.at(cell, c);
            const Eigen::MatrixXd a = model.a(wv);
            double flux2 = 0.0, dw2 = 0.0;
            for (int axis = 0; axis < g.dim; ++axis) {
                Eigen::VectorXd col(2);
                for (int c = 0; c < 2; ++c) col[c] = dw.at(cell, c * g.dim + axis);
                flux2 += (a * col).squaredNorm();
                dw2 += col.squaredNorm();
            }
            CHECK(std::sqrt(flux2) >= model.lambda(wv) * std::sqrt(dw2) - 1e-12);
        }
    }
}

TEST_CASE("simulate with T = 0 returns only the initial state") {
    const Grid g = grid1d(16);
    SolverConfig config;
    config.dt = 1e-3;
    config.t_end = 0.0;
    const Trajectory traj = simulate(DiffusionModel::heat(), config, Field(g, 1, 1.0));
    CHECK(traj.snapshots.size() == 1);
    CHECK(traj.final_time == 0.0);
}

TEST_CASE("epsilon ladder: implicit systems stay solvable and converge") {
    std::mt19937_64 rng(71);
    const Grid g = grid2d(24, 24);
    Field w0 = random_smooth(g, rng);
    for (auto& v : w0.data()) v = 0.2 * v + 0.5;

    const DiffusionModel model = DiffusionModel::porous_media(2.0);
    SolverConfig config;
    config.dt = 1e-3;
    config.t_end = 2e-2;

    std::vector<Field> finals;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        config.epsilon = eps;
        const Trajectory traj = simulate(model, config, w0);
        REQUIRE(!traj.blew_up);
        finals.push_back(traj.last());
    }
    auto l2diff = [&](const Field& a, const Field& b) {
        double s = 0.0;
        for (long cell = 0; cell < g.cell_count(); ++cell) s += sqr(a.at(cell) - b.at(cell));
        return std::sqrt(s * g.cell_volume());
    };
    CHECK(l2diff(finals[0], finals[1]) > l2diff(finals[1], finals[2]));
}
