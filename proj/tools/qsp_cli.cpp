// Command-line driver: `qsp <experiment> --config FILE [--seed N] [--out DIR]`.
// Exit codes: 0 success, 2 configuration error, 3 convergence failure.
#include "qsp/experiments.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

const std::vector<std::string> kExperiments = {
    "discord_freeze", "tripartite_decay", "tomo_compare", "udd_scaling", "grape"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsp: quantum-state correlation, protection and control experiments"};
  app.require_subcommand(1);

  struct SubArgs {
    std::string config;
    std::string out = ".";
    std::int64_t seed = -1;
    bool seed_given = false;
  };
  std::vector<SubArgs> args(kExperiments.size());

  for (size_t i = 0; i < kExperiments.size(); ++i) {
    CLI::App* sub = app.add_subcommand(kExperiments[i],
                                       qsp::experiment_help(kExperiments[i]));
    sub->add_option("--config", args[i].config, "key = value config file")
        ->required();
    sub->add_option("--seed", args[i].seed, "RNG seed (overrides config)");
    sub->add_option("--out", args[i].out, "output directory (default: cwd)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (size_t i = 0; i < kExperiments.size(); ++i) {
    CLI::App* sub = app.get_subcommand(kExperiments[i]);
    if (!sub->parsed()) continue;
    try {
      auto config = qsp::parse_config_file(args[i].config);
      std::uint64_t seed;
      if (sub->count("--seed") > 0) {
        if (args[i].seed < 0) throw qsp::ConfigError("--seed must be non-negative");
        seed = static_cast<std::uint64_t>(args[i].seed);
      } else if (auto it = config.find("seed"); it != config.end()) {
        seed = std::stoull(it->second);
      } else {
        throw qsp::ConfigError("no seed: set `seed` in the config or pass --seed");
      }
      qsp::run_experiment(kExperiments[i], config, seed, args[i].out);
      return 0;
    } catch (const qsp::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const qsp::ConvergenceError& e) {
      std::cerr << "convergence failure: " << e.what() << "\n";
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}
