#pragma once

#include <cstdint>
#include <vector>

#include "mftg/quadrature.hpp"
#include "mftg/riccati.hpp"
#include "mftg/types.hpp"

namespace mftg {

// Mean utilization of the shared channel over the horizon; entries in [0, 1].
using MeanFieldTrajectory = std::vector<double>;

void check_trajectory(const MeanFieldTrajectory& g);

// Per-step polynomial model of the sensor's cost-to-go,
//   V_k(e, g) = w0 + w1 e + w2 e^2 + w3 g_k^2 (+ w4 e^3 + w5 e^4),
// one coefficient set per k = 0..T; the terminal set is identically zero.
struct ValueWeights {
  int degree = 2;                   // 2, 3 or 4
  std::vector<std::vector<double>> w;  // (T+1) x feature_count

  int horizon() const { return static_cast<int>(w.size()) - 1; }
  static int feature_count(int degree);

  static ValueWeights zeros(int horizon, int degree);

  // V_k(e, g_k); the terminal step evaluates to 0.
  double evaluate(int k, double e, double gk) const;
};

// Basis (1, e, e^2, g^2[, e^3][, e^4]).
std::vector<double> features(double e, double gk, int degree);

// E[V_{k}(x + W, g_k)] for W ~ N(0, var): closed form for degree 2 (odd
// Gaussian moments vanish), Gauss-Hermite for the cubic/quartic tails.
double expected_weight_value(const ValueWeights& vw, int k, double x, double var, double gk);

struct FitConfig {
  int samples = 512;          // regression samples per step (>= 10x feature count)
  double ridge = 1e-6;
  int degree = 2;
  double explore_fraction = 0.5;
  int quad_nodes = 16;
  bool soft_bellman = false;  // Boltzmann-averaged backup instead of the hard min
  std::uint64_t seed = 0;
  std::uint64_t iteration_tag = 0;  // outer-iteration salt for the RNG streams
  int threads = 1;
};

// Backward fitted value iteration for a scalar plant. Regression samples mix
// rollouts of the error process under the Boltzmann policy implied by
// `warm_start` (zero weights when absent) with wide Gaussian exploration.
ValueWeights fit_value_iteration(const TeamType& type, const RiccatiSchedule& sched,
                                 const MeanFieldTrajectory& g, double lambda, double alpha,
                                 const FitConfig& cfg, const ValueWeights* warm_start = nullptr);

struct GridConfig {
  double half_width_stds = 5.0;  // grid reach in never-transmit standard deviations
  int points = 1501;
  int quad_nodes = 32;
  double margin_factor = 1.0;    // extrapolation allowance, as a fraction of the half width
};

// Exact cost-to-go of the sensor problem on an error grid (scalar plants),
// used as the oracle for the fitted model. Backups use Gauss-Hermite
// quadrature with linear interpolation inside the grid and quadratic
// extrapolation outside.
struct GridValue {
  std::vector<double> grid;             // strictly increasing
  std::vector<std::vector<double>> V;   // (T+1) x |grid|
  MeanFieldTrajectory g;
  std::vector<double> gamma;            // Gamma[k], scalar
  double a = 0.0;
  double noise_var = 0.0;
  double lambda = 0.0;
  GaussHermite quad;

  explicit GridValue(int quad_nodes) : quad(quad_nodes) {}

  int horizon() const { return static_cast<int>(V.size()) - 1; }

  // V_k at arbitrary e (interpolated / extrapolated).
  double value(int k, double e) const;

  // Q_k(e, a) = Gamma_k e^2 + lambda g_k a + E V_{k+1}((1-a) A e + W).
  double q_value(int k, double e, int action) const;

  // E[V_k(mean + W)].
  double expect_value(int k, double mean) const;
};

GridValue grid_dp(const TeamType& type, const RiccatiSchedule& sched, const MeanFieldTrajectory& g,
                  double lambda, const GridConfig& cfg);

}  // namespace mftg
