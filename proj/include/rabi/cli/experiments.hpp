// experiments.hpp: The experiment runner behind `simulate`.
//
// Each experiment reads its parameters from a Config, runs (optionally at
// dim and 2·dim), and writes one CSV into the output directory.
#pragma once

#include "rabi/cli/config.hpp"
#include "rabi/error.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rabi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAcceptance = 3;
inline constexpr int kExitNumeric = 4;

// Exit code for an error: configuration and precondition failures map to 2,
// integrator, truncation and grid failures to 4.
int exit_code_for(ErrorKind kind);

struct RunOptions {
    std::optional<int> dim;  // overrides `dim` from the config
    int workers = 0;         // 0: one per hardware thread
    std::filesystem::path out_dir = ".";
};

struct RunSummary {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> notes;  // short human-readable results
};

inline const std::vector<std::string> kExperiments{"fig1_sweep", "wigner_map",    "noisy_run",
                                                   "cubic_run",  "cat_run",       "schedule_check"};

RunSummary run_experiment(const Config& config, const RunOptions& options);

// `--accept`: runs the acceptance suite; returns kExitOk or kExitAcceptance.
int run_accept(const Config& config, const RunOptions& options, std::ostream& log);

}  // namespace rabi::cli
