#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "sgflab/cli/config.hpp"
#include "sgflab/cli/describe.hpp"
#include "sgflab/cli/runner.hpp"
#include "sgflab/errors.hpp"
#include "sgflab/version.hpp"

namespace cli = sgflab::cli;

int main(int argc, char** argv) {
  CLI::App app{"Stochastic gradient-flow laboratory"};
  app.set_version_flag("--version", std::string(sgflab::kVersion));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a study and write CSV/JSON artifacts");
  std::string config_path, study, out, seed;
  unsigned workers = 0;
  std::vector<std::string> sets;
  // Shortcut flags and the keys they set.
  std::vector<std::pair<std::string, std::string>> shortcuts = {
      {"problem", "problem.name"}, {"sigma0", "vol.sigma0"}, {"alpha", "vol.alpha"},  {"T", "sim.T"},
      {"paths", "sim.paths"},      {"level", "sim.level"},   {"x0", "sim.x0"},        {"stride", "sim.stride"},
      {"quantity", "estimate.quantity"}};
  std::vector<std::string> shortcut_values(shortcuts.size());
  run->add_option("--config", config_path, "config file (key = value lines)");
  run->add_option("--study", study, "study name");
  run->add_option("--seed", seed, "master seed; overrides SGFLAB_SEED and the config");
  run->add_option("--workers", workers, "worker threads (default: logical cores)");
  run->add_option("--out", out, "output directory");
  run->add_option("--set", sets, "override any key: --set key=value")->take_all();
  for (std::size_t i = 0; i < shortcuts.size(); ++i)
    run->add_option("--" + shortcuts[i].first, shortcut_values[i], "sets " + shortcuts[i].second);

  auto* desc = app.add_subcommand("describe", "describe a study, problem or term");
  std::string name;
  desc->add_option("name", name, "study, problem or term name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitValidation;
  }

  if (*desc) {
    try {
      std::cout << cli::describe(name);
      return cli::kExitOk;
    } catch (const sgflab::Error& e) {
      std::cerr << e.what() << "\n";
      return cli::kExitValidation;
    }
  }

  cli::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = cli::ExperimentConfig::load(config_path);
    if (const char* env = std::getenv("SGFLAB_SEED"); env && *env) {
      cli::parse_seed(env, "SGFLAB_SEED");
      cfg.set("seed", env);
    }
    if (!study.empty()) cfg.set("study", study);
    if (!out.empty()) cfg.set("out", out);
    for (std::size_t i = 0; i < shortcuts.size(); ++i)
      if (!shortcut_values[i].empty()) cfg.set(shortcuts[i].second, shortcut_values[i]);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw sgflab::ConfigError("--set", "expected key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!seed.empty()) {
      cli::parse_seed(seed, "--seed");
      cfg.set("seed", seed);
    }
    if (cfg.get("study").empty()) throw sgflab::ConfigError("study", "no study given (use --study or the config)");
  } catch (const sgflab::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kExitValidation;
  }
  return cli::run_and_write(cfg, workers, std::cout, std::cerr);
}
