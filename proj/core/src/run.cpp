#include "cdlab/run.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <random>

#include "cdlab/diagonal.hpp"
#include "cdlab/field_io.hpp"
#include "cdlab/gn.hpp"
#include "cdlab/harmonic.hpp"
#include "cdlab/model.hpp"
#include "cdlab/numerics.hpp"
#include "cdlab/regularity.hpp"
#include "cdlab/solver.hpp"
#include "cdlab/uniqueness.hpp"

namespace cdlab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

Grid grid_from_config(const json& config) {
    const json& domain = config.at("domain");
    const int dim = domain.at("N").get<int>();
    std::array<int, 3> cells{1, 1, 1};
    std::array<double, 3> extents{1.0, 1.0, 1.0};
    for (int a = 0; a < dim; ++a) {
        cells[a] = domain.at("cells").at(a).get<int>();
        extents[a] = domain.at("extents").at(a).get<double>();
    }
    BoundaryKind bc = BoundaryKind::Neumann;
    if (config.contains("bc") && config.at("bc").get<std::string>() == "dirichlet")
        bc = BoundaryKind::Dirichlet;
    return Grid::make(dim, cells, extents, bc);
}

Field initial_field(const Grid& g, const json& initial, int m) {
    const std::string kind = initial.at("kind").get<std::string>();
    const double amplitude = initial.at("amplitude").get<double>();
    const double baseline = initial.at("baseline").get<double>();
    const double sigma = initial.at("sigma").get<double>();
    const int mode = initial.at("mode").get<int>();

    std::array<double, 3> mid{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) mid[a] = 0.5 * g.extents[a];

    return Field::sample(g, m, [&](const std::array<double, 3>& x, std::span<double> out) {
        for (int c = 0; c < m; ++c) {
            // components get slightly shifted centers so cross terms see
            // genuinely different profiles
            double v = baseline;
            if (kind == "gaussian") {
                double r2 = 0.0;
                for (int a = 0; a < g.dim; ++a) r2 += sqr(x[a] - mid[a] - 0.05 * c * g.extents[a]);
                v += amplitude * std::exp(-r2 / (2.0 * sigma * sigma));
            } else if (kind == "sine") {
                double s = amplitude;
                for (int a = 0; a < g.dim; ++a)
                    s *= std::sin((mode + c) * M_PI * x[a] / g.extents[a]);
                v += s;
            } else {  // constant
                v += amplitude;
            }
            out[c] = v;
        }
    });
}

DiffusionModel model_from_config(const json& model_cfg) {
    const std::string preset = model_cfg.at("preset").get<std::string>();
    const int m = model_cfg.at("m").get<int>();
    DiffusionModel model;
    if (preset == "heat")
        model = DiffusionModel::heat(m);
    else if (preset == "porous-media")
        model = DiffusionModel::porous_media(model_cfg.at("k").get<double>(), m);
    else {
        const json& rows = model_cfg.at("matrix");
        Eigen::MatrixXd a0(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) a0(i, j) = rows.at(i).at(j).get<double>();
        model = DiffusionModel::constant_matrix(a0);
    }
    const json& reaction = model_cfg.at("reaction");
    if (reaction.at("kind").get<std::string>() == "linear") {
        const double rate = reaction.at("rate").get<double>();
        model.reaction_matrix = [rate, m](const Eigen::VectorXd&) {
            return (rate * Eigen::MatrixXd::Identity(m, m)).eval();
        };
    }
    return model;
}

SolverConfig solver_config_from(const json& config) {
    SolverConfig sc;
    sc.dt = config.at("time").at("dt").get<double>();
    sc.t_end = config.at("time").at("T").get<double>();
    sc.stride = config.at("time").at("stride").get<int>();
    if (config.contains("scheme") && config.at("scheme").get<std::string>() == "explicit")
        sc.scheme = Scheme::Explicit;
    if (config.contains("model")) sc.epsilon = config.at("model").at("epsilon").get<double>();
    if (config.contains("grad_norm_powers"))
        for (const auto& v : config.at("grad_norm_powers")) sc.grad_norm_powers.push_back(v.get<double>());
    return sc;
}

std::ofstream open_csv(const fs::path& path, const std::string& hash, const std::string& header) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << "# config_hash=" << hash << "\n" << header << "\n";
    os << std::setprecision(17);
    return os;
}

void echo_config(const ExperimentConfig& config, const fs::path& out_dir) {
    json echo = config.json();
    echo["config_hash"] = config.hash_string();
    std::ofstream os(out_dir / "config.json");
    os << echo.dump(2) << "\n";
}

std::array<double, 3> domain_center(const Grid& g) {
    std::array<double, 3> mid{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) mid[a] = 0.5 * g.extents[a];
    return mid;
}

}  // namespace

int run_simulate(ExperimentConfig config, const RunOptions& options) {
    if (options.seed) config.override_seed(*options.seed);
    const json& cfg = config.json();
    const Grid grid = grid_from_config(cfg);
    const DiffusionModel model = model_from_config(cfg.at("model"));
    const SolverConfig sc = solver_config_from(cfg);
    const Field w0 = initial_field(grid, cfg.at("initial"), model.m);

    fs::create_directories(options.out_dir);
    echo_config(config, options.out_dir);

    const Trajectory traj = simulate(model, sc, w0);

    if (cfg.at("outputs").at("snapshots").get<bool>()) {
        const fs::path snap_dir = options.out_dir / "snapshots";
        fs::create_directories(snap_dir);
        auto times = open_csv(snap_dir / "times.csv", config.hash_string(), "index,time");
        for (size_t i = 0; i < traj.snapshots.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "snap_%06zu.dat", i);
            save_snapshot(snap_dir / name, traj.snapshots[i]);
            times << i << ',' << traj.times[i] << "\n";
        }
    }

    {
        std::string header = "time";
        const int m = model.m;
        for (int c = 0; c < m; ++c) header += ",mass_" + std::to_string(c);
        header += ",l2";
        for (int c = 0; c < m; ++c) header += ",min_" + std::to_string(c);
        for (int c = 0; c < m; ++c) header += ",max_" + std::to_string(c);
        for (double p : sc.grad_norm_powers) header += ",grad_l" + std::to_string(p);
        auto os = open_csv(options.out_dir / "diagnostics.csv", config.hash_string(), header);
        for (const auto& row : traj.diagnostics) {
            os << row.time;
            for (double v : row.mass) os << ',' << v;
            os << ',' << row.l2;
            for (double v : row.min_value) os << ',' << v;
            for (double v : row.max_value) os << ',' << v;
            for (double v : row.grad_norms) os << ',' << v;
            os << "\n";
        }
    }

    json report{{"config_hash", config.hash_string()},
                {"final_time", traj.final_time},
                {"snapshots", traj.snapshots.size()},
                {"blew_up", traj.blew_up}};
    if (traj.blew_up) {
        report["blow_up_time"] = traj.blow_up_time;
        report["error"] = traj.error;
    }
    std::ofstream rep(options.out_dir / "report.json");
    rep << report.dump(2) << "\n";
    return traj.blew_up ? 2 : 0;
}

namespace {

struct GnCase {
    double k, p, sigma, amplitude, baseline;
    std::string id;
};

struct GnRow {
    GnCase c;
    GNReport strong, weak;
};

GnRow evaluate_gn_case(const GnCase& c, const Grid& grid, double radius, double eps_star,
                       bool weak) {
    const auto center = domain_center(grid);
    const CutoffField cut = cutoff(grid, center, radius);

    Field u = Field::sample_scalar(grid, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int a = 0; a < grid.dim; ++a) r2 += sqr(x[a] - center[a]);
        return c.baseline + c.amplitude * std::exp(-r2 / (2.0 * c.sigma * c.sigma));
    });
    Field lambda(grid, 1), gamma(grid, 1);
    for (long cell = 0; cell < u.cell_count(); ++cell) {
        const double au = std::abs(u.at(cell));
        lambda.at(cell) = std::pow(au, c.k);
        gamma.at(cell) = c.k * c.k * std::pow(au, c.k - 2.0);
    }

    GNInputs in;
    in.u = std::move(u);
    in.gamma = std::move(gamma);
    in.lambda = std::move(lambda);
    in.omega = cut.omega;
    in.p = c.p;
    in.radius = radius;
    in.eps_star = eps_star;
    in.center = center;

    GnRow row;
    row.c = c;
    row.strong = verify_strong_gnbmo(in);
    if (weak) row.weak = verify_weak_gnbmo(in);
    return row;
}

}  // namespace

int run_verify_gnbmo(ExperimentConfig config, const RunOptions& options) {
    if (options.seed) config.override_seed(*options.seed);
    const json& cfg = config.json();
    const Grid grid = grid_from_config(cfg);
    const double radius = cfg.at("R").get<double>();
    const double eps_star = cfg.at("eps_star").get<double>();
    const bool weak = cfg.at("weak").get<bool>();
    const json& corpus = cfg.at("corpus");
    const double baseline = corpus.at("baseline").get<double>();

    std::vector<GnCase> cases;
    for (const auto& k : corpus.at("k"))
        for (const auto& p : corpus.at("p"))
            for (const auto& sigma : corpus.at("sigmas"))
                for (const auto& amp : corpus.at("amplitudes")) {
                    GnCase c{k.get<double>(), p.get<double>(), sigma.get<double>(),
                             amp.get<double>(), baseline, ""};
                    if (c.k < 2.0 && baseline <= 0.0)
                        throw ConfigError("verify-gnbmo: k<2 needs a positive baseline "
                                          "(Gamma = k^2 |u|^{k-2} is singular at u=0)");
                    c.id = "k" + std::to_string(c.k) + "_p" + std::to_string(c.p) + "_s" +
                           std::to_string(c.sigma) + "_a" + std::to_string(c.amplitude);
                    cases.push_back(std::move(c));
                }

    std::vector<GnRow> rows(cases.size());
    if (options.threads > 1) {
        std::vector<std::future<GnRow>> futures;
        for (const auto& c : cases)
            futures.push_back(std::async(std::launch::async, evaluate_gn_case, c, grid, radius,
                                         eps_star, weak));
        for (size_t i = 0; i < futures.size(); ++i) rows[i] = futures[i].get();
    } else {
        for (size_t i = 0; i < cases.size(); ++i)
            rows[i] = evaluate_gn_case(cases[i], grid, radius, eps_star, weak);
    }

    fs::create_directories(options.out_dir);
    echo_config(config, options.out_dir);
    auto os = open_csv(options.out_dir / "gnbmo.csv", config.hash_string(),
                       "case,k,p,sigma,amplitude,I1,I2,Ibreve,mI1,mI2,mIbreve,omega_tilde,"
                       "c_star,eps_tilde,ratio_strong,ratio_weak");
    for (const auto& row : rows) {
        os << row.c.id << ',' << row.c.k << ',' << row.c.p << ',' << row.c.sigma << ','
           << row.c.amplitude << ',' << row.strong.i1 << ',' << row.strong.i2 << ','
           << row.strong.ibreve << ',' << row.weak.i1 << ',' << row.weak.i2 << ','
           << row.weak.ibreve << ',' << row.strong.omega_tilde << ',' << row.strong.c_star << ','
           << row.weak.eps_tilde << ',' << row.strong.ratio << ',' << row.weak.ratio << "\n";
    }
    return 0;
}

int run_uniqueness(ExperimentConfig config, const RunOptions& options) {
    if (options.seed) config.override_seed(*options.seed);
    const json& cfg = config.json();
    const Grid grid = grid_from_config(cfg);
    const json& phi_cfg = cfg.at("phi");
    const std::string preset = phi_cfg.at("preset").get<std::string>();

    Nonlinearity phi;
    if (preset == "power")
        phi = Nonlinearity::power(phi_cfg.at("k").get<double>());
    else if (preset == "power-radial")
        phi = Nonlinearity::power_radial(phi_cfg.at("k").get<double>(), phi_cfg.at("m").get<int>());
    else if (preset == "quadratic")
        phi = Nonlinearity::quadratic();
    else
        phi = Nonlinearity::identity();

    const json& gsec = cfg.at("g");
    const std::string gkind = gsec.at("kind").get<std::string>();
    const double gvalue = gsec.at("value").get<double>();
    std::function<double(const std::array<double, 3>&, double)> g;
    if (gkind == "constant")
        g = [gvalue](const std::array<double, 3>&, double) { return gvalue; };
    else if (gkind == "sine") {
        const double l0 = grid.extents[0];
        g = [gvalue, l0](const std::array<double, 3>& x, double) {
            return gvalue * std::sin(M_PI * x[0] / l0);
        };
    }

    const Field u0 = initial_field(grid, cfg.at("initial"), phi.m);
    const json& pert = cfg.at("perturbation");
    const double delta = pert.at("delta").get<double>();
    const double psigma = pert.at("sigma").get<double>();
    const auto center = domain_center(grid);
    Field v0 = u0;
    for (long cell = 0; cell < v0.cell_count(); ++cell) {
        double r2 = 0.0;
        auto x = grid.center(cell);
        for (int a = 0; a < grid.dim; ++a) r2 += sqr(x[a] - center[a]);
        for (int c = 0; c < phi.m; ++c)
            v0.at(cell, c) += delta * std::exp(-r2 / (2.0 * psigma * psigma));
    }

    const SolverConfig sc = solver_config_from(cfg);
    const MonotonicityReport mono = monotonicity_check(phi, ProbeSet::standard(phi.m));
    const TwoSolutionReport report = two_solution_experiment(
        phi, g, u0, v0, sc, cfg.at("envelope_slack").get<double>());

    fs::create_directories(options.out_dir);
    echo_config(config, options.out_dir);
    auto os = open_csv(options.out_dir / "deviation.csv", config.hash_string(),
                       "time,deviation_sq,envelope");
    for (size_t i = 0; i < report.times.size(); ++i)
        os << report.times[i] << ',' << report.deviation_sq[i] << ',' << report.envelope[i]
           << "\n";

    json summary{{"config_hash", config.hash_string()},
                 {"phi", phi.name},
                 {"monotonicity_pass", mono.pass},
                 {"monotonicity_origin_norm", mono.origin_norm},
                 {"monotonicity_worst", mono.worst},
                 {"max_relative_violation", report.max_relative_violation},
                 {"within_envelope", report.within_envelope},
                 {"blew_up", report.blew_up}};
    if (report.blew_up) summary["blow_up_time"] = report.blow_up_time;
    std::ofstream rep(options.out_dir / "summary.json");
    rep << summary.dump(2) << "\n";
    return report.blew_up ? 2 : 0;
}

int run_diagonalize(ExperimentConfig config, const RunOptions& options) {
    if (options.seed) config.override_seed(*options.seed);
    const json& cfg = config.json();
    const json& model_cfg = cfg.at("model");
    const json& alphas_json = model_cfg.at("alphas");
    Eigen::VectorXd alphas(alphas_json.size());
    for (size_t i = 0; i < alphas_json.size(); ++i) alphas[i] = alphas_json.at(i).get<double>();
    const int m = static_cast<int>(alphas.size());

    DiagonalizableModel model;
    if (model_cfg.at("preset").get<std::string>() == "power") {
        model = DiagonalizableModel::power(model_cfg.at("l").get<double>(), alphas);
    } else {
        Eigen::MatrixXd b0(m, m);
        if (model_cfg.contains("matrix")) {
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) b0(i, j) = model_cfg.at("matrix").at(i).at(j).get<double>();
        } else {
            b0 = Eigen::MatrixXd::Identity(m, m);
            if (m > 1) b0(0, 1) = 0.5;
        }
        model = DiagonalizableModel::constant(b0, alphas);
    }
    if (cfg.at("norm").get<std::string>() == "frobenius") model.norm_mode = MatrixNorm::Frobenius;

    const json& probes_cfg = cfg.at("probes");
    std::mt19937_64 rng(config.seed());
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> rad(probes_cfg.at("vmin").get<double>(),
                                               probes_cfg.at("vmax").get<double>());
    std::vector<Eigen::VectorXd> probes;
    for (int i = 0; i < probes_cfg.at("count").get<int>(); ++i) {
        Eigen::VectorXd w(m);
        do
            for (int c = 0; c < m; ++c) w[c] = unit(rng);
        while (w.norm() == 0.0);
        w *= rad(rng) / w.norm();
        probes.push_back(std::move(w));
    }

    const BmatReport bmat = bmat_condition(model, probes);

    const Grid grid = grid_from_config(cfg);
    const Field w0 = initial_field(grid, cfg.at("initial"), m);
    SolverConfig sc;
    sc.dt = cfg.at("time").at("dt").get<double>();
    sc.stride = cfg.at("time").at("stride").get<int>();
    const MoserReport moser =
        moser_experiment(model, w0, sc, cfg.at("p").get<double>(), cfg.at("T").get<double>());

    fs::create_directories(options.out_dir);
    echo_config(config, options.out_dir);
    {
        std::string header;
        for (int c = 0; c < m; ++c) header += "w" + std::to_string(c) + ",";
        header += "lhs,lhs_variant,min_lambda,max_lambda,p_norm,c,c_variant";
        auto os = open_csv(options.out_dir / "probes.csv", config.hash_string(), header);
        for (const auto& row : bmat.rows) {
            for (int c = 0; c < m; ++c) os << row.w[c] << ',';
            os << row.lhs << ',' << row.lhs_variant << ',' << row.min_lambda << ','
               << row.max_lambda << ',' << row.p_norm << ',' << row.c << ',' << row.c_variant
               << "\n";
        }
    }
    json out{{"config_hash", config.hash_string()},
             {"preset", model.preset},
             {"c_measured", bmat.c_measured},
             {"c_variant_measured", bmat.c_variant_measured},
             {"p", moser.p},
             {"moser_c_measured", moser.c_measured},
             {"sup_norm", moser.sup_norm},
             {"lp_norm", moser.lp_norm},
             {"ratio", moser.ratio},
             {"p_gate_ok", moser.p_gate_ok},
             {"blew_up", moser.blew_up}};
    std::ofstream rep(options.out_dir / "moser.json");
    rep << out.dump(2) << "\n";
    return moser.blew_up ? 2 : 0;
}

int run_diagnose(ExperimentConfig config, const std::filesystem::path& trajectory_dir,
                 const RunOptions& options) {
    if (options.seed) config.override_seed(*options.seed);
    const json& cfg = config.json();

    std::vector<fs::path> snaps;
    for (const auto& entry : fs::directory_iterator(trajectory_dir))
        if (entry.path().filename().string().starts_with("snap_") &&
            entry.path().extension() == ".dat")
            snaps.push_back(entry.path());
    std::sort(snaps.begin(), snaps.end());
    if (snaps.empty()) throw ConfigError("diagnose: no snap_*.dat files in " +
                                         trajectory_dir.string());

    std::vector<double> times(snaps.size());
    for (size_t i = 0; i < snaps.size(); ++i) times[i] = static_cast<double>(i);
    if (fs::exists(trajectory_dir / "times.csv")) {
        std::ifstream ts(trajectory_dir / "times.csv");
        std::string line;
        while (std::getline(ts, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 'i') continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos) continue;
            const size_t idx = std::stoul(line.substr(0, comma));
            if (idx < times.size()) times[idx] = std::stod(line.substr(comma + 1));
        }
    }

    std::vector<double> powers;
    for (const auto& v : cfg.at("powers")) powers.push_back(v.get<double>());
    const json& sm = cfg.at("smallness");

    fs::create_directories(options.out_dir);
    echo_config(config, options.out_dir);
    std::string header = "index,time";
    for (double p : powers) header += ",grad_l" + std::to_string(p);
    header += ",alpha,alpha_residual,omega_tilde,smallness_product,smallness_pass";
    auto os = open_csv(options.out_dir / "diagnose.csv", config.hash_string(), header);

    for (size_t i = 0; i < snaps.size(); ++i) {
        const Field w = load_snapshot(snaps[i]);
        const Grid& g = w.grid();
        os << i << ',' << times[i];
        for (double p : powers) os << ',' << lp_gradient_norm(w, p);

        std::vector<double> radii;
        if (cfg.at("holder_radii").empty()) {
            double h = 0.0;
            for (int a = 0; a < g.dim; ++a) h = std::max(h, g.spacing(a));
            for (double r = 4.0 * h; r <= 0.25 * g.extents[0]; r *= 2.0) radii.push_back(r);
        } else {
            for (const auto& v : cfg.at("holder_radii")) radii.push_back(v.get<double>());
        }
        if (radii.size() < 2) radii = {2.0 * g.spacing(0), 4.0 * g.spacing(0)};
        const HolderFit fit = holder_estimate(w, radii);
        os << ',' << fit.alpha << ',' << fit.fit_residual;

        const SmallnessCheck check =
            bmo_smallness_check(w, sm.at("c_n").get<double>(), sm.at("c_star").get<double>(),
                                sm.at("radius").get<double>(), domain_center(g));
        os << ',' << check.omega_tilde << ',' << check.product << ',' << (check.pass ? 1 : 0)
           << "\n";
    }
    return 0;
}

int run_bmo(const std::filesystem::path& input, std::optional<Cube> region,
            const RunOptions& options) {
    const Field f = load_snapshot(input);

    json resolved{{"input", input.string()}};
    std::optional<IndexBox> box;
    if (region) {
        box = IndexBox::of_cube(*region, f.grid());
        resolved["region_anchor"] = {region->anchor[0], region->anchor[1], region->anchor[2]};
        resolved["region_side"] = region->side;
    }
    const BmoResult result = bmo_seminorm(f, box ? &*box : nullptr);

    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a64("bmo:" + resolved.dump())));
    json report{{"config_hash", hash},
                {"seminorm", result.seminorm},
                {"l1", result.l1_norm},
                {"bmo_norm", result.bmo_norm},
                {"argmax_cube",
                 {{"anchor", {result.argmax_cube.anchor[0], result.argmax_cube.anchor[1],
                              result.argmax_cube.anchor[2]}},
                  {"side", result.argmax_cube.side}}},
                {"cube_count", result.cube_count}};

    fs::create_directories(options.out_dir);
    std::ofstream os(options.out_dir / "bmo.json");
    os << report.dump(2) << "\n";
    std::cout << report.dump(2) << std::endl;
    return 0;
}

}  // namespace cdlab
