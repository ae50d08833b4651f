#pragma once

#include "mftg/rng.hpp"
#include "mftg/value_model.hpp"

namespace mftg {

// Value of transmitting now instead of staying silent, split into the parts
// the decision trades off:
//   total = quadratic_term - price_term + future_term.
// quadratic_term is the immediate estimation-error saving e'A'Gamma_{k+1}A e
// (zero at the last step), price_term = lambda g_k, and future_term is the
// difference of expected next-step values between the silent and transmitting
// branches net of the quadratic part.
struct VoIBreakdown {
  double quadratic_term = 0.0;
  double price_term = 0.0;
  double future_term = 0.0;
  double total = 0.0;
};

// VoI under the fitted polynomial value model. For degree-2 weights the
// future term reduces to w1 A e + w2 A^2 e^2.
VoIBreakdown voi(double e, int k, const MeanFieldTrajectory& g, double lambda,
                 const ValueWeights& weights, const TeamType& type, const RiccatiSchedule& sched);

// VoI from the grid oracle; total equals Q_k(e,0) - Q_k(e,1) exactly and the
// future term absorbs whatever the quadratic term does not explain.
VoIBreakdown voi_grid(double e, int k, const GridValue& gv, const RiccatiSchedule& sched);

// Transmit when the value of information is nonnegative.
int optimal_action(const VoIBreakdown& v);

// Transmission probability 1 / (1 + exp(-alpha * total)), overflow-safe.
double boltzmann_prob(const VoIBreakdown& v, double alpha);

// Bernoulli draw; deterministic given the stream state.
int sample_action(double p, Philox& rng);

struct SensorPolicy {
  enum class Kind { kOptimalThreshold, kBoltzmann };
  Kind kind = Kind::kBoltzmann;
  double alpha = 1.0;  // Boltzmann sharpness; unused for the threshold policy

  double transmit_prob(const VoIBreakdown& v) const;
};

}  // namespace mftg
