#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "mftg/config.hpp"
#include "mftg/serialize.hpp"

namespace mftg {

struct CliOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::optional<int> threads;
  bool timestamp = true;
};

// Exit-code contract shared by all commands: 0 success (warnings allowed),
// 2 usage/config error, 3 numeric failure. The cmd_* functions throw
// ConfigError / NumericError; main() maps them to exit codes.

// Solves the fixed point and writes <out>/solution.json.
int cmd_solve_mfte(const ExperimentConfig& cfg, const CliOptions& opts, std::ostream& log);

// Simulates the finite population under a previously solved equilibrium and
// writes <out>/costs.csv and <out>/utilization.csv.
int cmd_simulate(const ExperimentConfig& cfg, const std::string& solution_path,
                 const CliOptions& opts, std::ostream& log);

// Solve + simulate per sweep point; writes <out>/sweep.csv.
int cmd_sweep(const ExperimentConfig& cfg, const CliOptions& opts, std::ostream& log);

// Unilateral-deviation experiment; writes <out>/nash_gap.csv.
int cmd_nash_gap(const ExperimentConfig& cfg, const std::string& solution_path,
                 const CliOptions& opts, std::ostream& log);

// Per-run average-over-teams cost; the distribution the reports summarize.
std::vector<double> per_run_average_cost(const SimResult& sim);

// OLS slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mftg
