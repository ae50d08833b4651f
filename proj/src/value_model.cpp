#include "mftg/value_model.hpp"

#include <algorithm>
#include <cmath>

namespace mftg {

void check_trajectory(const MeanFieldTrajectory& g) {
  for (double v : g)
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("mean-field trajectory entry outside [0, 1]");
}

int ValueWeights::feature_count(int degree) {
  switch (degree) {
    case 2: return 4;
    case 3: return 5;
    case 4: return 6;
    default: throw ConfigError("unsupported polynomial degree " + std::to_string(degree));
  }
}

ValueWeights ValueWeights::zeros(int horizon, int degree) {
  ValueWeights vw;
  vw.degree = degree;
  vw.w.assign(horizon + 1, std::vector<double>(feature_count(degree), 0.0));
  return vw;
}

double ValueWeights::evaluate(int k, double e, double gk) const {
  const auto& c = w[k];
  double v = c[0] + c[1] * e + c[2] * e * e + c[3] * gk * gk;
  if (degree >= 3) v += c[4] * e * e * e;
  if (degree >= 4) v += c[5] * e * e * e * e;
  return v;
}

std::vector<double> features(double e, double gk, int degree) {
  std::vector<double> f{1.0, e, e * e, gk * gk};
  if (degree >= 3) f.push_back(e * e * e);
  if (degree >= 4) f.push_back(e * e * e * e);
  if (degree < 2 || degree > 4)
    throw ConfigError("unsupported polynomial degree " + std::to_string(degree));
  return f;
}

double expected_weight_value(const ValueWeights& vw, int k, double x, double var, double gk) {
  const auto& c = vw.w[k];
  if (vw.degree == 2) return c[0] + c[1] * x + c[2] * (x * x + var) + c[3] * gk * gk;
  // Cubic/quartic variants integrate the polynomial numerically; a 16-node
  // rule is already exact for these degrees.
  static thread_local GaussHermite quad(16);
  return quad.expect([&](double e) { return vw.evaluate(k, e, gk); }, x, var);
}

// ---------------------------------------------------------------------------
// Grid dynamic program

namespace {

// Piecewise-linear inside the grid; quadratic through the three edge points
// beyond it. Interpolation of identical values reproduces them exactly, which
// the trajectory-sensitivity tests rely on.
double eval_on_grid(const std::vector<double>& grid, const std::vector<double>& vals, double x) {
  const std::size_t n = grid.size();
  if (x <= grid.front() || x >= grid.back()) {
    const bool right = x >= grid.back();
    const std::size_t i0 = right ? n - 3 : 0;
    const double x1 = grid[i0], x2 = grid[i0 + 1], x3 = grid[i0 + 2];
    const double v1 = vals[i0], v2 = vals[i0 + 1], v3 = vals[i0 + 2];
    const double c1 = (x - x2) * (x - x3) / ((x1 - x2) * (x1 - x3));
    const double c2 = (x - x1) * (x - x3) / ((x2 - x1) * (x2 - x3));
    const double c3 = (x - x1) * (x - x2) / ((x3 - x1) * (x3 - x2));
    return c1 * v1 + c2 * v2 + c3 * v3;
  }
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
  return (1.0 - t) * vals[lo] + t * vals[hi];
}

}  // namespace

double GridValue::value(int k, double e) const { return eval_on_grid(grid, V[k], e); }

double GridValue::expect_value(int k, double mean) const {
  return quad.expect([&](double x) { return eval_on_grid(grid, V[k], x); }, mean, noise_var);
}

double GridValue::q_value(int k, double e, int action) const {
  const double stage = gamma[k] * e * e + lambda * g[k] * action;
  const double next_mean = action ? 0.0 : a * e;
  return stage + expect_value(k + 1, next_mean);
}

GridValue grid_dp(const TeamType& type, const RiccatiSchedule& sched, const MeanFieldTrajectory& g,
                  double lambda, const GridConfig& cfg) {
  if (!type.scalar()) throw ConfigError("grid_dp requires a scalar plant");
  if (cfg.half_width_stds < 4.0) throw ConfigError("grid must cover at least 4 standard deviations");
  if (cfg.points < 7) throw ConfigError("grid too coarse");
  if (cfg.quad_nodes < 16) throw ConfigError("quadrature needs at least 16 nodes");
  check_trajectory(g);
  const int T = static_cast<int>(g.size());
  if (sched.horizon != T) throw ConfigError("schedule horizon does not match trajectory");

  const double a = type.a();
  const double kw = type.kw();

  // Worst-case error spread: the never-transmit variance recursion.
  double var = type.sigma0(), max_var = type.sigma0();
  for (int k = 0; k < T; ++k) {
    var = a * a * var + kw;
    max_var = std::max(max_var, var);
  }
  const double half = cfg.half_width_stds * std::sqrt(max_var);

  GridValue gv(cfg.quad_nodes);
  gv.g = g;
  gv.a = a;
  gv.noise_var = kw;
  gv.lambda = lambda;
  gv.gamma.resize(T);
  for (int k = 0; k < T; ++k) gv.gamma[k] = sched.gamma(k);
  const int n = cfg.points | 1;  // odd, so 0 is a grid point
  gv.grid.resize(n);
  for (int i = 0; i < n; ++i) gv.grid[i] = -half + 2.0 * half * i / (n - 1);
  gv.V.assign(T + 1, std::vector<double>(n, 0.0));

  const double margin = half * (1.0 + cfg.margin_factor);
  std::int64_t nodes_total = 0, nodes_beyond = 0;
  const double noise_scale = std::sqrt(2.0 * kw);

  for (int k = T - 1; k >= 0; --k) {
    const auto& next = gv.V[k + 1];
    // Transmit branch: next error is pure noise, independent of e.
    double ev1 = 0.0;
    for (std::size_t q = 0; q < gv.quad.nodes.size(); ++q)
      ev1 += gv.quad.weights[q] * eval_on_grid(gv.grid, next, noise_scale * gv.quad.nodes[q]);
    const double transmit = lambda * g[k] + ev1;

    auto& cur = gv.V[k];
    for (int i = 0; i < n; ++i) {
      const double mean = a * gv.grid[i];
      double ev0 = 0.0;
      for (std::size_t q = 0; q < gv.quad.nodes.size(); ++q) {
        const double x = mean + noise_scale * gv.quad.nodes[q];
        ++nodes_total;
        if (std::abs(x) > margin) ++nodes_beyond;
        ev0 += gv.quad.weights[q] * eval_on_grid(gv.grid, next, x);
      }
      cur[i] = gv.gamma[k] * gv.grid[i] * gv.grid[i] + std::min(ev0, transmit);
    }
  }

  if (nodes_beyond > nodes_total / 100)
    throw NumericError("grid too small: " + std::to_string(nodes_beyond) + " of " +
                       std::to_string(nodes_total) + " quadrature nodes beyond the margin");
  return gv;
}

}  // namespace mftg
