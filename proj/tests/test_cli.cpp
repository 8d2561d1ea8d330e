#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cdlab/config.hpp"
#include "cdlab/field_io.hpp"
#include "cdlab/run.hpp"
#include "test_fields.hpp"

using namespace cdlab;
using namespace cdlab::testing;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "cdlab_cli_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

json minimal_simulate() {
    return json{{"domain", {{"N", 1}, {"cells", {24}}}},
                {"time", {{"dt", 1e-3}, {"T", 5e-3}}}};
}

}  // namespace

TEST_CASE("minimal simulate config picks up the documented defaults") {
    const ExperimentConfig config = ExperimentConfig::from_json(minimal_simulate(), "simulate");
    CHECK(config.json().at("model").at("epsilon").get<double>() == 0.0);
    CHECK(config.json().at("bc").get<std::string>() == "neumann");
    CHECK(config.json().at("scheme").get<std::string>() == "semi-implicit");
    CHECK(config.json().at("domain").at("extents").at(0).get<double>() == 1.0);
}

TEST_CASE("unknown and duplicate keys are rejected by name") {
    json bad = minimal_simulate();
    bad["tyme"] = json::object();
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(bad, "simulate"),
                         doctest::Contains("tyme"), ConfigError);

    CHECK_THROWS_WITH_AS(parse_json_strict(R"({"a": 1, "a": 2})"), doctest::Contains("'a'"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_json_strict(R"({"x": {"b": 1, "b": 2}})"), doctest::Contains("'b'"),
                         ConfigError);
    // same key in sibling objects is fine
    CHECK_NOTHROW(parse_json_strict(R"({"x": {"a": 1}, "y": {"a": 2}})"));
}

TEST_CASE("config round-trip: parse -> serialize -> parse is the identity") {
    const json templates[] = {
        minimal_simulate(),
        json{{"domain", {{"N", 2}, {"cells", {16, 16}}, {"extents", {1.0, 2.0}}}},
             {"time", {{"dt", 1e-3}, {"T", 2e-3}, {"stride", 2}}},
             {"model", {{"preset", "porous-media"}, {"k", 2.0}, {"epsilon", 0.01}}},
             {"bc", "dirichlet"},
             {"seed", 42}},
    };
    for (const json& t : templates) {
        const ExperimentConfig a = ExperimentConfig::from_json(t, "simulate");
        const ExperimentConfig b =
            ExperimentConfig::from_json(parse_json_strict(a.json().dump()), "simulate");
        CHECK(a.json() == b.json());
        CHECK(a.hash() == b.hash());
    }
}

TEST_CASE("missing required section names the section") {
    CHECK_THROWS_WITH_AS(
        ExperimentConfig::from_json(json{{"time", {{"dt", 1e-3}, {"T", 1e-3}}}}, "simulate"),
        doctest::Contains("domain"), ConfigError);
}

TEST_CASE("simulate runs are deterministic byte for byte") {
    const auto dir1 = scratch_dir("det1");
    const auto dir2 = scratch_dir("det2");
    json cfg = minimal_simulate();
    cfg["model"] = {{"preset", "porous-media"}, {"k", 1.0}, {"epsilon", 0.01}};
    cfg["initial"] = {{"kind", "gaussian"}, {"amplitude", 0.5}, {"baseline", 1.0}};
    cfg["grad_norm_powers"] = {2.0};

    RunOptions opts1{dir1, std::nullopt, 1};
    RunOptions opts2{dir2, std::nullopt, 1};
    CHECK(run_simulate(ExperimentConfig::from_json(cfg, "simulate"), opts1) == 0);
    CHECK(run_simulate(ExperimentConfig::from_json(cfg, "simulate"), opts2) == 0);

    CHECK(slurp(dir1 / "diagnostics.csv") == slurp(dir2 / "diagnostics.csv"));
    CHECK(slurp(dir1 / "config.json") == slurp(dir2 / "config.json"));
    CHECK(slurp(dir1 / "snapshots" / "snap_000000.dat") ==
          slurp(dir2 / "snapshots" / "snap_000000.dat"));

    // config hash stamped on the tabular outputs
    const std::string csv = slurp(dir1 / "diagnostics.csv");
    CHECK(csv.rfind("# config_hash=", 0) == 0);
}

TEST_CASE("forced blow-up: exit code 2 and partial artifacts") {
    const auto dir = scratch_dir("blowup");
    json cfg{{"domain", {{"N", 1}, {"cells", {32}}}},
             {"time", {{"dt", 0.05}, {"T", 1.0}}},  // far beyond the explicit limit
             {"scheme", "explicit"},
             {"model", {{"preset", "porous-media"}, {"k", 2.0}}},
             {"initial", {{"kind", "gaussian"}, {"amplitude", 4.0}, {"baseline", 1.0}}}};
    const int code = run_simulate(ExperimentConfig::from_json(cfg, "simulate"), {dir, {}, 1});
    CHECK(code == 2);
    const json report = json::parse(slurp(dir / "report.json"));
    CHECK(report.at("blew_up").get<bool>());
    CHECK(report.contains("blow_up_time"));
    CHECK(std::filesystem::exists(dir / "diagnostics.csv"));
}

TEST_CASE("bmo subcommand writes the JSON report") {
    const auto dir = scratch_dir("bmo");
    const Grid g = grid1d(64);
    const Field f = Field::sample_scalar(
        g, [](const std::array<double, 3>& x) { return x[0] < 0.5 ? 1.0 : 0.0; });
    save_snapshot(dir / "field.dat", f);

    CHECK(run_bmo(dir / "field.dat", std::nullopt, {dir, {}, 1}) == 0);
    const json report = json::parse(slurp(dir / "bmo.json"));
    CHECK(report.at("seminorm").get<double>() == 0.5);
    CHECK(report.at("argmax_cube").at("side").get<int>() == 64);
    CHECK(report.contains("config_hash"));
}

TEST_CASE("verify-gnbmo and diagnose pipelines produce stamped tables") {
    const auto dir = scratch_dir("gnbmo");
    json cfg{{"domain", {{"N", 2}, {"cells", {48, 48}}}},
             {"corpus",
              {{"k", {2.0}}, {"p", {1.0}}, {"sigmas", {0.25}}, {"amplitudes", {1.0}},
               {"baseline", 0.4}}},
             {"R", 0.3}};
    CHECK(run_verify_gnbmo(ExperimentConfig::from_json(cfg, "verify-gnbmo"), {dir, {}, 2}) == 0);
    const std::string csv = slurp(dir / "gnbmo.csv");
    CHECK(csv.rfind("# config_hash=", 0) == 0);
    CHECK(csv.find("ratio_strong") != std::string::npos);

    // diagnose over a small simulated trajectory
    const auto sim_dir = scratch_dir("diag_sim");
    json sim = minimal_simulate();
    sim["domain"] = {{"N", 1}, {"cells", {48}}};
    sim["initial"] = {{"kind", "gaussian"}, {"amplitude", 0.5}, {"baseline", 1.0}};
    CHECK(run_simulate(ExperimentConfig::from_json(sim, "simulate"), {sim_dir, {}, 1}) == 0);

    const auto diag_dir = scratch_dir("diagnose");
    const ExperimentConfig dcfg = ExperimentConfig::from_json(json::object(), "diagnose");
    CHECK(run_diagnose(dcfg, sim_dir / "snapshots", {diag_dir, {}, 1}) == 0);
    const std::string diag = slurp(diag_dir / "diagnose.csv");
    CHECK(diag.find("alpha") != std::string::npos);
    CHECK(diag.rfind("# config_hash=", 0) == 0);
}

TEST_CASE("uniqueness and diagonalize pipelines run end to end") {
    const auto udir = scratch_dir("uniq");
    json ucfg{{"domain", {{"N", 1}, {"cells", {32}}}},
              {"time", {{"dt", 1e-3}, {"T", 5e-3}}},
              {"phi", {{"preset", "power"}, {"k", 1.0}}},
              {"initial", {{"kind", "gaussian"}, {"amplitude", 0.4}, {"baseline", 1.0}}},
              {"envelope_slack", 0.05}};
    CHECK(run_uniqueness(ExperimentConfig::from_json(ucfg, "uniqueness"), {udir, {}, 1}) == 0);
    const json summary = json::parse(slurp(udir / "summary.json"));
    CHECK(summary.at("monotonicity_pass").get<bool>());
    CHECK(std::filesystem::exists(udir / "deviation.csv"));

    const auto ddir = scratch_dir("diagz");
    json dcfg{{"domain", {{"N", 1}, {"cells", {24}}}},
              {"time", {{"dt", 2e-3}, {"stride", 5}}},
              {"model", {{"preset", "constant"}, {"alphas", {1.0, 2.0}}}},
              {"T", 0.02},
              {"initial", {{"kind", "constant"}, {"amplitude", 1.0}}}};
    CHECK(run_diagonalize(ExperimentConfig::from_json(dcfg, "diagonalize"), {ddir, {}, 1}) == 0);
    const json moser = json::parse(slurp(ddir / "moser.json"));
    CHECK(moser.at("c_measured").get<double>() == 0.0);
    CHECK(std::filesystem::exists(ddir / "probes.csv"));
}
