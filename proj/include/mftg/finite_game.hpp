#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mftg/meanfield.hpp"

namespace mftg {

// A concrete N-team population drawn from the type distribution.
struct Population {
  int N = 0;
  std::vector<int> assignment;        // type index per team
  std::vector<double> empirical_pmf;  // per type
  double eps_PN = 0.0;                // sum_w |P_N(w) - P(w)|
};

enum class PopulationMode { kIid, kProportional };

Population sample_population(int N, const std::vector<TeamType>& types, PopulationMode mode,
                             std::uint64_t seed);

enum class InitDist { kGaussian, kUniformSymmetric };

// A sensor policy a deviating team may switch to.
struct DeviationArm {
  enum class Kind { kEquilibrium, kThreshold, kAltBoltzmann, kAlwaysTransmit, kNeverTransmit };
  Kind kind = Kind::kEquilibrium;
  double param = 0.0;  // threshold on |e|, or the alternate sharpness
  std::string id = "equilibrium";
};

// Restricted deviation class searched by nash_gap; the true infimum over all
// centralized policies is uncomputable, so the reported gap is a lower bound.
struct DeviationSpec {
  int team = 0;
  bool include_equilibrium = true;
  std::vector<double> thresholds;
  std::vector<double> alt_alphas;
  bool always_transmit = false;
  bool never_transmit = false;

  // 20 log-spaced thresholds spanning [0.05, 20] * sqrt(tr K_W).
  static std::vector<double> default_threshold_grid(double noise_var);

  std::vector<DeviationArm> arms() const;
};

struct SimOptions {
  int threads = 1;
  InitDist init_dist = InitDist::kGaussian;
  // Applies one sensor policy to every team (closed-loop baselines in tests).
  std::optional<DeviationArm> policy_override;
  // Test hook: stream key used for team i (identity when absent).
  const std::vector<int>* stream_labels = nullptr;
};

struct TeamCost {
  double total = 0.0;    // control + lambda * comm, time-averaged
  double control = 0.0;  // (1/T) sum ||X||_Q^2 + ||U||_R^2
  double comm = 0.0;     // (1/T) sum gamma_k * channel average at k
};

struct SimResult {
  int N = 0;
  int T = 0;
  int runs = 0;
  std::vector<int> assignment;
  std::vector<TeamCost> costs;       // [run * N + team]
  std::vector<double> utilization;   // [run * T + k]
  bool has_traces = false;
  std::vector<std::uint8_t> actions;  // [run][team][k] when N*T*runs <= 1e7
  std::uint64_t seed = 0;
  std::string config_hash;

  const TeamCost& cost(int run, int team) const { return costs[run * N + team]; }
  double util(int run, int k) const { return utilization[run * T + k]; }
  int action(int run, int team, int k) const {
    return actions[(static_cast<std::size_t>(run) * N + team) * T + k];
  }
};

// Simulates `runs` independent instances of the N-team closed loop, every
// sensor playing the Boltzmann equilibrium policy against the solved
// trajectory. Per-draw RNG streams are keyed by (seed, run, team, k).
SimResult simulate(const Population& pop, const MFTESolution& solution,
                   const std::vector<TeamType>& types, int runs, int horizon, std::uint64_t seed,
                   const SimOptions& opts = {});

// (1/T) sum_k mean over runs of |channel average at k - g*_k|.
double deviation_mismatch(const Population& pop, const MFTESolution& solution,
                          const std::vector<TeamType>& types, int runs, std::uint64_t seed,
                          const SimOptions& opts = {});

struct ArmResult {
  std::string id;
  double mean_cost = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct GapReport {
  std::vector<ArmResult> arms;
  double baseline_mean = 0.0;
  std::string best_arm;
  double best_mean = 0.0;
  double gap = 0.0;     // baseline - best; positive = profitable deviation found
  double gap_se = 0.0;  // paired standard error of the winning comparison
};

// Unilateral-deviation experiment for one team: every arm reuses the same
// noise realizations (common random numbers), and the non-deviating teams are
// simulated once per run and shared across arms.
GapReport nash_gap(const Population& pop, const MFTESolution& solution,
                   const std::vector<TeamType>& types, const DeviationSpec& dev, int runs,
                   std::uint64_t seed, const SimOptions& opts = {});

}  // namespace mftg
