#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mftg/finite_game.hpp"

namespace mftg {

struct SweepSpec {
  enum class Variable { kLambdaAlpha, kN, kDegree };
  Variable variable = Variable::kLambdaAlpha;
  std::vector<std::pair<double, double>> lambda_alpha;  // kLambdaAlpha points
  std::vector<int> values;                              // kN or kDegree points
};

struct SimSpec {
  int N = 50;
  int runs = 100;
  std::uint64_t seed = 1;
  PopulationMode population = PopulationMode::kProportional;
  InitDist init_dist = InitDist::kGaussian;
};

struct ExperimentConfig {
  std::vector<TeamType> types;
  int horizon = 0;
  double lambda = 0.0;
  double alpha = 0.0;
  SolverConfig solver;
  SimSpec sim;
  std::optional<SweepSpec> sweep;
  std::optional<DeviationSpec> deviation;
  bool deviation_thresholds_default = false;  // fill from K_W at use time

  // Hash of the canonical serialized config, and of the solver-relevant
  // subset (types, horizon, lambda, alpha, solver). Solutions carry the
  // latter so downstream commands can reject mismatched inputs.
  std::string config_hash;
  std::string solver_hash;
};

// Parses and validates a config document; ConfigError messages name the
// offending field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

}  // namespace mftg
