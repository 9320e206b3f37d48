// Experiment harness: reproduces the simulation-study figures as data files
// (discord freezing, tripartite decay, tomography comparison, UDD scaling,
// GRAPE synthesis).  Deterministic per seed; every run writes CSV data, a JSON
// summary, and a manifest.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace qsp {

inline constexpr const char* kVersion = "1.0.0";

// Raised for unknown keys, malformed values, or missing required settings;
// the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an optimizer fails to reach its target; CLI exit code 3.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value config file (TOML-compatible subset: comments with #,
// optional quotes around values, blank lines ignored).
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Sub-seed for an independent trial stream, derived from (seed, trial index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Runs one experiment; writes data files into out_dir.  Known names:
// discord_freeze, tripartite_decay, tomo_compare, udd_scaling, grape.
// Throws ConfigError / ConvergenceError for the CLI to translate.
void run_experiment(const std::string& name,
                    const std::map<std::string, std::string>& config,
                    std::uint64_t seed, const std::string& out_dir);

// Per-experiment documented keys (for --help).
std::string experiment_help(const std::string& name);

}  // namespace qsp
