#include "cdlab/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace cdlab {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Schema: allowed keys per subcommand, with defaults applied in place.
// ---------------------------------------------------------------------------

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    if (!obj.is_object()) throw ConfigError("config: expected an object at " + where);
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
}

void require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key))
        throw ConfigError("config: missing required key '" + key + "' in " + where);
}

template <typename T>
void default_to(json& obj, const std::string& key, const T& value) {
    if (!obj.contains(key)) obj[key] = value;
}

void check_string_choice(const json& obj, const std::string& key,
                         const std::set<std::string>& choices, const std::string& where) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_string() || !choices.count(obj.at(key).get<std::string>())) {
        std::string opts;
        for (const auto& c : choices) opts += (opts.empty() ? "" : "|") + c;
        throw ConfigError("config: key '" + key + "' in " + where + " must be one of " + opts);
    }
}

void validate_domain(json& domain) {
    reject_unknown(domain, {"N", "cells", "extents"}, "domain");
    require(domain, "N", "domain");
    require(domain, "cells", "domain");
    default_to(domain, "extents", json::array());
    const int dim = domain.at("N").get<int>();
    if (dim < 1 || dim > 3) throw ConfigError("config: domain.N must be 1, 2 or 3");
    json& cells = domain.at("cells");
    if (!cells.is_array() || cells.empty())
        throw ConfigError("config: domain.cells must be a nonempty array");
    while (static_cast<int>(cells.size()) < dim) cells.push_back(cells.back());
    if (static_cast<int>(cells.size()) > dim) throw ConfigError("config: domain.cells longer than N");
    json& extents = domain.at("extents");
    if (extents.empty()) for (int a = 0; a < dim; ++a) extents.push_back(1.0);
    while (static_cast<int>(extents.size()) < dim) extents.push_back(extents.back());
    if (static_cast<int>(extents.size()) > dim)
        throw ConfigError("config: domain.extents longer than N");
}

void validate_time(json& time) {
    reject_unknown(time, {"dt", "T", "stride"}, "time");
    require(time, "dt", "time");
    require(time, "T", "time");
    default_to(time, "stride", 1);
    if (!(time.at("dt").get<double>() > 0.0)) throw ConfigError("config: time.dt must be positive");
}

void validate_initial(json& initial) {
    reject_unknown(initial, {"kind", "amplitude", "baseline", "sigma", "mode", "values"},
                   "initial");
    default_to(initial, "kind", "gaussian");
    check_string_choice(initial, "kind", {"gaussian", "sine", "constant"}, "initial");
    default_to(initial, "amplitude", 1.0);
    default_to(initial, "baseline", 0.0);
    default_to(initial, "sigma", 0.25);
    default_to(initial, "mode", 1);
}

void validate_model(json& model) {
    reject_unknown(model, {"preset", "k", "m", "epsilon", "matrix", "reaction"}, "model");
    default_to(model, "preset", "porous-media");
    check_string_choice(model, "preset", {"porous-media", "heat", "constant"}, "model");
    default_to(model, "k", 0.0);
    default_to(model, "m", 1);
    default_to(model, "epsilon", 0.0);
    if (model.contains("reaction")) {
        json& reaction = model.at("reaction");
        reject_unknown(reaction, {"kind", "rate"}, "model.reaction");
        default_to(reaction, "kind", "none");
        check_string_choice(reaction, "kind", {"none", "linear"}, "model.reaction");
        default_to(reaction, "rate", 0.0);
    } else {
        model["reaction"] = json{{"kind", "none"}, {"rate", 0.0}};
    }
}

void validate_simulate(json& config) {
    reject_unknown(config,
                   {"seed", "version", "domain", "bc", "model", "time", "scheme", "initial",
                    "grad_norm_powers", "outputs"},
                   "simulate config");
    require(config, "domain", "simulate config");
    require(config, "time", "simulate config");
    validate_domain(config.at("domain"));
    validate_time(config.at("time"));
    if (!config.contains("model")) config["model"] = json::object();
    validate_model(config.at("model"));
    if (!config.contains("initial")) config["initial"] = json::object();
    validate_initial(config.at("initial"));
    default_to(config, "bc", "neumann");
    check_string_choice(config, "bc", {"neumann", "dirichlet"}, "simulate config");
    default_to(config, "scheme", "semi-implicit");
    check_string_choice(config, "scheme", {"semi-implicit", "explicit"}, "simulate config");
    default_to(config, "grad_norm_powers", json::array());
    if (config.contains("outputs")) {
        reject_unknown(config.at("outputs"), {"snapshots"}, "outputs");
        default_to(config.at("outputs"), "snapshots", true);
    } else {
        config["outputs"] = json{{"snapshots", true}};
    }
}

void validate_verify_gnbmo(json& config) {
    reject_unknown(config,
                   {"seed", "version", "domain", "corpus", "R", "eps_star", "weak", "center"},
                   "verify-gnbmo config");
    require(config, "domain", "verify-gnbmo config");
    validate_domain(config.at("domain"));
    if (!config.contains("corpus")) config["corpus"] = json::object();
    json& corpus = config.at("corpus");
    reject_unknown(corpus, {"k", "p", "sigmas", "amplitudes", "baseline"}, "corpus");
    default_to(corpus, "k", json::array({1.0, 2.0, 3.0}));
    default_to(corpus, "p", json::array({1.0, 2.0}));
    default_to(corpus, "sigmas", json::array({0.2, 0.25}));
    default_to(corpus, "amplitudes", json::array({1.0}));
    default_to(corpus, "baseline", 0.3);
    default_to(config, "R", 0.3);
    default_to(config, "eps_star", config.at("R").get<double>() / 2.0);
    default_to(config, "weak", true);
}

void validate_uniqueness(json& config) {
    reject_unknown(config,
                   {"seed", "version", "domain", "phi", "g", "perturbation", "initial", "time",
                    "envelope_slack"},
                   "uniqueness config");
    require(config, "domain", "uniqueness config");
    require(config, "time", "uniqueness config");
    validate_domain(config.at("domain"));
    validate_time(config.at("time"));
    if (!config.contains("initial")) config["initial"] = json::object();
    validate_initial(config.at("initial"));
    if (!config.contains("phi")) config["phi"] = json::object();
    json& phi = config.at("phi");
    reject_unknown(phi, {"preset", "k", "m"}, "phi");
    default_to(phi, "preset", "power");
    check_string_choice(phi, "preset", {"power", "power-radial", "quadratic", "identity"}, "phi");
    default_to(phi, "k", 1.0);
    default_to(phi, "m", 1);
    if (!config.contains("g")) config["g"] = json::object();
    json& gsec = config.at("g");
    reject_unknown(gsec, {"kind", "value"}, "g");
    default_to(gsec, "kind", "zero");
    check_string_choice(gsec, "kind", {"zero", "constant", "sine"}, "g");
    default_to(gsec, "value", 0.0);
    if (!config.contains("perturbation")) config["perturbation"] = json::object();
    json& pert = config.at("perturbation");
    reject_unknown(pert, {"delta", "sigma"}, "perturbation");
    default_to(pert, "delta", 1e-2);
    default_to(pert, "sigma", 0.1);
    default_to(config, "envelope_slack", 1e-6);
}

void validate_diagonalize(json& config) {
    reject_unknown(config,
                   {"seed", "version", "domain", "model", "probes", "p", "T", "time", "initial",
                    "norm"},
                   "diagonalize config");
    require(config, "domain", "diagonalize config");
    validate_domain(config.at("domain"));
    if (!config.contains("time")) config["time"] = json::object();
    {
        // the run's horizon is T+1 by construction, only dt and stride apply
        json& time = config.at("time");
        reject_unknown(time, {"dt", "stride"}, "diagonalize time");
        default_to(time, "dt", 1e-3);
        default_to(time, "stride", 1);
        if (!(time.at("dt").get<double>() > 0.0))
            throw ConfigError("config: time.dt must be positive");
    }
    if (!config.contains("initial")) config["initial"] = json::object();
    validate_initial(config.at("initial"));
    if (!config.contains("model")) config["model"] = json::object();
    json& model = config.at("model");
    reject_unknown(model, {"preset", "l", "alphas", "matrix"}, "diagonalize model");
    default_to(model, "preset", "constant");
    check_string_choice(model, "preset", {"constant", "power"}, "diagonalize model");
    default_to(model, "l", 1.0);
    default_to(model, "alphas", json::array({1.0, 2.0}));
    if (!config.contains("probes")) config["probes"] = json::object();
    json& probes = config.at("probes");
    reject_unknown(probes, {"count", "vmin", "vmax"}, "probes");
    default_to(probes, "count", 64);
    default_to(probes, "vmin", 0.25);
    default_to(probes, "vmax", 2.0);
    default_to(config, "p", 2.0);
    default_to(config, "T", 0.05);
    default_to(config, "norm", "op2");
    check_string_choice(config, "norm", {"op2", "frobenius"}, "diagonalize config");
}

void validate_diagnose(json& config) {
    reject_unknown(config,
                   {"seed", "version", "powers", "holder_radii", "smallness", "center"},
                   "diagnose config");
    default_to(config, "powers", json::array({2.0, 4.0}));
    default_to(config, "holder_radii", json::array());
    if (!config.contains("smallness")) config["smallness"] = json::object();
    json& sm = config.at("smallness");
    reject_unknown(sm, {"c_n", "c_star", "radius"}, "smallness");
    default_to(sm, "c_n", 1.0);
    default_to(sm, "c_star", 1.0);
    default_to(sm, "radius", 0.25);
}

void validate_bmo(json& config) {
    reject_unknown(config, {"seed", "version"}, "bmo config");
}

}  // namespace

nlohmann::json parse_json_strict(const std::string& text) {
    std::vector<std::set<std::string>> object_stack;
    auto callback = [&object_stack](int /*depth*/, json::parse_event_t event, json& parsed) {
        if (event == json::parse_event_t::object_start) {
            object_stack.emplace_back();
        } else if (event == json::parse_event_t::object_end) {
            object_stack.pop_back();
        } else if (event == json::parse_event_t::key) {
            const std::string key = parsed.get<std::string>();
            if (!object_stack.back().insert(key).second)
                throw ConfigError("config: duplicate key '" + key + "'");
        }
        return true;
    };
    try {
        return json::parse(text, callback);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ExperimentConfig ExperimentConfig::parse(const std::filesystem::path& path,
                                         const std::string& subcommand) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path.string());
    std::stringstream buffer;
    buffer << is.rdbuf();
    return from_json(parse_json_strict(buffer.str()), subcommand);
}

ExperimentConfig ExperimentConfig::from_json(nlohmann::json data, const std::string& subcommand) {
    if (!data.is_object()) throw ConfigError("config: top level must be an object");
    default_to(data, "seed", 0);
    default_to(data, "version", "1");

    if (subcommand == "simulate")
        validate_simulate(data);
    else if (subcommand == "verify-gnbmo")
        validate_verify_gnbmo(data);
    else if (subcommand == "uniqueness")
        validate_uniqueness(data);
    else if (subcommand == "diagonalize")
        validate_diagonalize(data);
    else if (subcommand == "diagnose")
        validate_diagnose(data);
    else if (subcommand == "bmo")
        validate_bmo(data);
    else
        throw ConfigError("config: unknown subcommand '" + subcommand + "'");

    ExperimentConfig config;
    config.data_ = std::move(data);
    config.subcommand_ = subcommand;
    config.seed_ = config.data_.at("seed").get<std::uint64_t>();
    return config;
}

void ExperimentConfig::override_seed(std::uint64_t seed) {
    seed_ = seed;
    data_["seed"] = seed;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(subcommand_ + ":" + data_.dump()); }

std::string ExperimentConfig::hash_string() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

}  // namespace cdlab
