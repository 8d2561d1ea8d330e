#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace cdlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Validated experiment configuration: unknown keys are rejected, duplicate
/// keys are a parse error, defaults are filled in so the echoed config is
/// the resolved one.
class ExperimentConfig {
public:
    static ExperimentConfig parse(const std::filesystem::path& path, const std::string& subcommand);
    static ExperimentConfig from_json(nlohmann::json data, const std::string& subcommand);

    const nlohmann::json& json() const { return data_; }
    const std::string& subcommand() const { return subcommand_; }
    std::uint64_t seed() const { return seed_; }
    void override_seed(std::uint64_t seed);

    /// FNV-1a over subcommand + canonical dump; stamped into every output.
    std::uint64_t hash() const;
    std::string hash_string() const;

private:
    nlohmann::json data_;
    std::string subcommand_;
    std::uint64_t seed_ = 0;
};

/// Parse with duplicate-key detection (the stock parser silently keeps the
/// last duplicate).
nlohmann::json parse_json_strict(const std::string& text);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace cdlab
