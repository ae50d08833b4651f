#include "mftg/sensing.hpp"

#include <algorithm>
#include <cmath>

namespace mftg {

VoIBreakdown voi(double e, int k, const MeanFieldTrajectory& g, double lambda,
                 const ValueWeights& weights, const TeamType& type, const RiccatiSchedule& sched) {
  const int T = static_cast<int>(g.size());
  if (k < 0 || k >= T) throw ConfigError("voi: step " + std::to_string(k) + " outside horizon");
  if (weights.horizon() != T) throw ConfigError("voi: weights horizon mismatch");
  if (!type.scalar()) throw ConfigError("voi: fitted policies require a scalar plant");

  const double a = type.a();
  VoIBreakdown v;
  v.price_term = lambda * g[k];
  if (k < T - 1) {
    v.quadratic_term = sched.gamma(k + 1) * a * a * e * e;
    const double gk1 = g[k + 1];
    if (weights.degree == 2) {
      const auto& c = weights.w[k + 1];
      v.future_term = c[1] * a * e + c[2] * a * a * e * e;
    } else {
      const double kw = type.kw();
      v.future_term = expected_weight_value(weights, k + 1, a * e, kw, gk1) -
                      expected_weight_value(weights, k + 1, 0.0, kw, gk1);
    }
  }
  v.total = v.quadratic_term - v.price_term + v.future_term;
  return v;
}

VoIBreakdown voi_grid(double e, int k, const GridValue& gv, const RiccatiSchedule& sched) {
  const int T = gv.horizon();
  if (k < 0 || k >= T) throw ConfigError("voi_grid: step outside horizon");
  VoIBreakdown v;
  v.price_term = gv.lambda * gv.g[k];
  if (k < T - 1) v.quadratic_term = sched.gamma(k + 1) * gv.a * gv.a * e * e;
  const double diff = gv.expect_value(k + 1, gv.a * e) - gv.expect_value(k + 1, 0.0);
  v.future_term = diff - v.quadratic_term;
  v.total = v.quadratic_term - v.price_term + v.future_term;
  return v;
}

int optimal_action(const VoIBreakdown& v) {
  if (std::isnan(v.total)) throw NumericError("optimal_action: NaN value of information");
  return v.total >= 0.0 ? 1 : 0;
}

double boltzmann_prob(const VoIBreakdown& v, double alpha) {
  const double z = std::clamp(alpha * v.total, -700.0, 700.0);
  return 1.0 / (1.0 + std::exp(-z));
}

int sample_action(double p, Philox& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw NumericError("sample_action: probability outside [0, 1]");
  return rng.uniform01() < p ? 1 : 0;
}

double SensorPolicy::transmit_prob(const VoIBreakdown& v) const {
  if (kind == Kind::kOptimalThreshold) return optimal_action(v) ? 1.0 : 0.0;
  return boltzmann_prob(v, alpha);
}

}  // namespace mftg
