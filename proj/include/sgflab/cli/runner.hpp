#pragma once

#include <exception>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sgflab/cli/artifacts.hpp"
#include "sgflab/cli/config.hpp"
#include "sgflab/estimate.hpp"

namespace sgflab::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitValidation = 2, kExitNumeric = 3 };

/// Maps an exception to the documented exit code.
int exit_code_for(const std::exception& e) noexcept;

const std::vector<std::string_view>& study_names();

CompositeProblem build_problem(const ExperimentConfig& cfg);
VolatilitySchedule build_volatility(const ExperimentConfig& cfg, const CompositeProblem& problem);
Dynamics build_dynamics(const ExperimentConfig& cfg, const CompositeProblem& problem);
Vector build_x0(const ExperimentConfig& cfg, std::size_t dim);

/// Everything a study produced, still in memory.
struct StudyResult {
  std::string study;
  std::vector<Artifact> artifacts;  // CSV files, summary.json excluded
  nlohmann::json summary;
  std::string report;  // human-readable lines for stdout
};

/// Runs the configured study. Throws ConfigError (and the library's
/// validation errors) before any path is simulated when the config is bad.
StudyResult run_study(const ExperimentConfig& cfg, unsigned workers = 1);

/// `t,mean,ci,bound` with shortest round-trip numbers; `bound` may be empty.
std::string series_csv(const GapSeries& s, const std::vector<double>& bound);

/// run_study, then summary.json and manifest.json into `out`. Returns the
/// exit code and prints the report (or the error) to the given streams.
int run_and_write(const ExperimentConfig& cfg, unsigned workers, std::ostream& out, std::ostream& err);

}  // namespace sgflab::cli
