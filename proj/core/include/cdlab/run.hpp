#pragma once

#include <filesystem>
#include <optional>

#include "cdlab/config.hpp"
#include "cdlab/grid.hpp"

namespace cdlab {

struct RunOptions {
    std::filesystem::path out_dir = "out";
    std::optional<std::uint64_t> seed;  // overrides the config seed
    int threads = 1;
};

// Exit codes: 0 success, 1 usage/config error (thrown as ConfigError),
// 2 numerical failure. Condition-check failures are data, not errors.
int run_simulate(ExperimentConfig config, const RunOptions& options);
int run_verify_gnbmo(ExperimentConfig config, const RunOptions& options);
int run_uniqueness(ExperimentConfig config, const RunOptions& options);
int run_diagonalize(ExperimentConfig config, const RunOptions& options);
int run_diagnose(ExperimentConfig config, const std::filesystem::path& trajectory_dir,
                 const RunOptions& options);
int run_bmo(const std::filesystem::path& input, std::optional<Cube> region,
            const RunOptions& options);

}  // namespace cdlab
