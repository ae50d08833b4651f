#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mftg/sensing.hpp"
#include "mftg/value_model.hpp"

namespace mftg {

struct SolverConfig {
  int max_iter = 200;
  double damping = 0.5;       // in (0, 1]; 1 is the undamped map
  double tol = 1e-3;          // sup-norm fixed-point residual
  int rollouts = 20000;       // Monte Carlo rollouts per type per operator call
  FitConfig fit;
  std::uint64_t seed = 0;
  int threads = 1;
  bool shifted_alignment = false;  // charge step k's action to the step-(k+1) entry
  std::optional<MeanFieldTrajectory> initial_guess;  // defaults to 0.5 everywhere
};

struct OperatorDiagnostics {
  double max_mc_std = 0.0;  // largest per-entry standard error of the estimate
};

// One application of the mean-field map: the expected per-step transmission
// probability of the Boltzmann policy when the population trajectory is g.
// Rollouts are keyed by (seed, iteration, type, rollout), so the estimate is
// bit-identical for any thread count.
MeanFieldTrajectory apply_mf_operator(const MeanFieldTrajectory& g,
                                      const std::vector<TeamType>& types, double lambda,
                                      double alpha,
                                      const std::vector<ValueWeights>& weights_per_type,
                                      const std::vector<RiccatiSchedule>& scheds,
                                      const SolverConfig& cfg, std::uint64_t iteration_tag = 0,
                                      OperatorDiagnostics* diag = nullptr);

struct MFTESolution {
  MeanFieldTrajectory g_star;
  std::vector<ValueWeights> weights;      // per type
  std::vector<RiccatiSchedule> scheds;    // per type
  double residual = 0.0;                  // sup-norm of T(g*) - g*
  int iterations = 0;
  bool converged = false;
  bool contraction_certified = false;
  double lipschitz_estimate = 0.0;        // ratio of successive iterate changes (noisy)
  double mc_std = 0.0;                    // operator standard error at the last iterate
  double lambda = 0.0;
  double alpha = 0.0;
  int horizon = 0;
};

// Damped Picard iteration on the mean-field map, refitting the value model
// for the current trajectory at every outer step. Non-convergence within
// max_iter is reported through the flags, not an error.
MFTESolution solve_mfte(const std::vector<TeamType>& types, double lambda, double alpha,
                        int horizon, const SolverConfig& cfg);

// Sufficient contraction condition 2 * alpha * lambda * T < 1 (strict).
bool contraction_check(double alpha, double lambda, int horizon);

struct LipschitzProbe {
  double ratio = 0.0;
  double mc_std = 0.0;  // standard error of the ratio estimate
};

// Empirical operator Lipschitz ratio ||T(g1)-T(g2)||_inf / ||g1-g2||_inf with
// common random numbers across the two evaluations.
LipschitzProbe lipschitz_probe(const MeanFieldTrajectory& g1, const MeanFieldTrajectory& g2,
                               const std::vector<TeamType>& types, double lambda, double alpha,
                               const SolverConfig& cfg);

}  // namespace mftg
