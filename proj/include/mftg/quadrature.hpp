#pragma once

#include <vector>

namespace mftg {

// Gauss-Hermite rule for the weight exp(-x^2) on (-inf, inf), computed by
// Golub-Welsch from the three-term recurrence. Exact for polynomials of
// degree <= 2n-1.
struct GaussHermite {
  explicit GaussHermite(int n);

  // E[f(mean + W)] with W ~ N(0, var), by change of variables.
  template <typename F>
  double expect(F&& f, double mean, double var) const {
    double acc = 0.0;
    const double scale = std::sqrt(2.0 * var);
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(mean + scale * nodes[i]);
    return acc;
  }

  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // normalized to sum to 1 (includes 1/sqrt(pi))
};

}  // namespace mftg
