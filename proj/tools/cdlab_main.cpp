// Experiment driver: simulate, verify-gnbmo, bmo, diagnose, uniqueness,
// diagonalize. Exit codes: 0 success, 1 usage/config error, 2 numerical
// failure.

#include <CLI11.hpp>

#include <iostream>

#include "cdlab/run.hpp"
#include "cdlab/solver.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("--config", flags.config_path, "experiment config (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--seed", flags.seed, "seed override for randomized probes")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--threads", flags.threads, "worker threads for corpus sweeps")
        ->check(CLI::PositiveNumber);
}

cdlab::RunOptions to_options(const CommonFlags& flags) {
    cdlab::RunOptions options;
    options.out_dir = flags.out_dir;
    if (flags.seed_set) options.seed = flags.seed;
    options.threads = flags.threads;
    return options;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for degenerate cross-diffusion systems"};
    app.require_subcommand(1);

    CommonFlags simulate_flags, gnbmo_flags, uniqueness_flags, diagonalize_flags, diagnose_flags,
        bmo_flags;
    std::string bmo_input, diagnose_dir;
    std::vector<int> region_anchor;
    int region_side = 0;

    auto* simulate = app.add_subcommand("simulate", "time-step a cross-diffusion model");
    add_common(simulate, simulate_flags, true);

    auto* gnbmo = app.add_subcommand("verify-gnbmo", "evaluate the GNBMO inequalities on a corpus");
    add_common(gnbmo, gnbmo_flags, true);

    auto* bmo = app.add_subcommand("bmo", "BMO seminorm of a field snapshot");
    add_common(bmo, bmo_flags, false);
    bmo->add_option("--input", bmo_input, "field snapshot file")->required();
    bmo->add_option("--region-anchor", region_anchor, "cube region anchor (cell indices)");
    bmo->add_option("--region-side", region_side, "cube region side (cells)");

    auto* diagnose = app.add_subcommand("diagnose", "regularity diagnostics over a trajectory");
    add_common(diagnose, diagnose_flags, false);
    diagnose->add_option("--trajectory", diagnose_dir, "snapshot directory")->required();

    auto* uniqueness = app.add_subcommand("uniqueness", "two-solution Gronwall experiment");
    add_common(uniqueness, uniqueness_flags, true);

    auto* diagonalize = app.add_subcommand("diagonalize", "P-transform condition and Moser bound");
    add_common(diagonalize, diagonalize_flags, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cdlab::run_simulate(
                cdlab::ExperimentConfig::parse(simulate_flags.config_path, "simulate"),
                to_options(simulate_flags));
        if (gnbmo->parsed())
            return cdlab::run_verify_gnbmo(
                cdlab::ExperimentConfig::parse(gnbmo_flags.config_path, "verify-gnbmo"),
                to_options(gnbmo_flags));
        if (bmo->parsed()) {
            std::optional<cdlab::Cube> region;
            if (region_side > 0) {
                cdlab::Cube cube;
                cube.side = region_side;
                for (size_t a = 0; a < region_anchor.size() && a < 3; ++a)
                    cube.anchor[a] = region_anchor[a];
                region = cube;
            }
            return cdlab::run_bmo(bmo_input, region, to_options(bmo_flags));
        }
        if (diagnose->parsed()) {
            auto config = diagnose_flags.config_path.empty()
                              ? cdlab::ExperimentConfig::from_json(nlohmann::json::object(),
                                                                   "diagnose")
                              : cdlab::ExperimentConfig::parse(diagnose_flags.config_path,
                                                               "diagnose");
            return cdlab::run_diagnose(config, diagnose_dir, to_options(diagnose_flags));
        }
        if (uniqueness->parsed())
            return cdlab::run_uniqueness(
                cdlab::ExperimentConfig::parse(uniqueness_flags.config_path, "uniqueness"),
                to_options(uniqueness_flags));
        if (diagonalize->parsed())
            return cdlab::run_diagonalize(
                cdlab::ExperimentConfig::parse(diagonalize_flags.config_path, "diagonalize"),
                to_options(diagonalize_flags));
    } catch (const cdlab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
