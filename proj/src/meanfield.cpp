#include "mftg/meanfield.hpp"

#include <algorithm>
#include <cmath>

#include "mftg/parallel.hpp"

namespace mftg {

namespace {
constexpr int kRolloutBlock = 64;
}

MeanFieldTrajectory apply_mf_operator(const MeanFieldTrajectory& g,
                                      const std::vector<TeamType>& types, double lambda,
                                      double alpha,
                                      const std::vector<ValueWeights>& weights_per_type,
                                      const std::vector<RiccatiSchedule>& scheds,
                                      const SolverConfig& cfg, std::uint64_t iteration_tag,
                                      OperatorDiagnostics* diag) {
  check_trajectory(g);
  const int T = static_cast<int>(g.size());
  if (cfg.rollouts < 1) throw ConfigError("apply_mf_operator needs at least one rollout");
  if (weights_per_type.size() != types.size() || scheds.size() != types.size())
    throw ConfigError("apply_mf_operator: one weight set and schedule per type required");
  for (const auto& w : weights_per_type)
    if (w.horizon() != T) throw ConfigError("apply_mf_operator: weights horizon mismatch");

  MeanFieldTrajectory h(T, 0.0);
  std::vector<double> var_accum(T, 0.0);

  const int n_blocks = (cfg.rollouts + kRolloutBlock - 1) / kRolloutBlock;
  std::vector<double> block_sums(static_cast<std::size_t>(n_blocks) * T);

  for (std::size_t t = 0; t < types.size(); ++t) {
    const TeamType& type = types[t];
    if (!type.scalar()) throw ConfigError("apply_mf_operator requires scalar plants");
    const ValueWeights& vw = weights_per_type[t];
    const RiccatiSchedule& sched = scheds[t];
    const double a = type.a();
    const double sigma_w = std::sqrt(type.kw());
    const double sigma_0 = std::sqrt(type.sigma0());

    std::fill(block_sums.begin(), block_sums.end(), 0.0);
    parallel_blocks(n_blocks, cfg.threads, [&](int blk) {
      const int lo = blk * kRolloutBlock, hi = std::min(cfg.rollouts, lo + kRolloutBlock);
      double* sums = &block_sums[static_cast<std::size_t>(blk) * T];
      for (int r = lo; r < hi; ++r) {
        Philox rng = make_rng(cfg.seed, StreamTag::kOpRollout, static_cast<std::uint64_t>(r),
                              static_cast<std::uint64_t>(t), iteration_tag);
        double e = sigma_0 * rng.gaussian();
        for (int k = 0; k < T; ++k) {
          const double p = boltzmann_prob(voi(e, k, g, lambda, vw, type, sched), alpha);
          sums[k] += p;
          const int act = rng.uniform01() < p ? 1 : 0;
          e = (act ? 0.0 : a * e) + sigma_w * rng.gaussian();
        }
      }
    });

    // Reduce in block order, so sums do not depend on scheduling.
    for (int k = 0; k < T; ++k) {
      double total = 0.0, sq = 0.0;
      for (int blk = 0; blk < n_blocks; ++blk) {
        const double s = block_sums[static_cast<std::size_t>(blk) * T + k];
        total += s;
        const int lo = blk * kRolloutBlock;
        const int count = std::min(cfg.rollouts, lo + kRolloutBlock) - lo;
        const double bm = s / count;
        sq += bm * bm;
      }
      const double mean = total / cfg.rollouts;
      h[k] += type.prob * mean;
      if (n_blocks > 1) {
        const double block_mean_var =
            std::max(sq / n_blocks - (total / cfg.rollouts) * (total / cfg.rollouts), 0.0);
        var_accum[k] += type.prob * type.prob * block_mean_var / n_blocks;
      }
    }
  }

  if (cfg.shifted_alignment) {
    MeanFieldTrajectory shifted(T, 0.0);
    for (int k = 0; k + 1 < T; ++k) shifted[k + 1] = h[k];
    h = shifted;
  }
  for (double& v : h) v = std::clamp(v, 0.0, 1.0);
  if (diag) {
    double worst = 0.0;
    for (double v : var_accum) worst = std::max(worst, std::sqrt(v));
    diag->max_mc_std = worst;
  }
  return h;
}

bool contraction_check(double alpha, double lambda, int horizon) {
  return 2.0 * alpha * lambda * static_cast<double>(horizon) < 1.0;
}

MFTESolution solve_mfte(const std::vector<TeamType>& types, double lambda, double alpha,
                        int horizon, const SolverConfig& cfg) {
  validate_type_set(types);
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
  if (!(cfg.tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");

  MFTESolution sol;
  sol.lambda = lambda;
  sol.alpha = alpha;
  sol.horizon = horizon;
  sol.contraction_certified = contraction_check(alpha, lambda, horizon);
  sol.scheds.reserve(types.size());
  for (const auto& t : types) sol.scheds.push_back(solve_riccati(t, horizon));

  MeanFieldTrajectory g = cfg.initial_guess ? *cfg.initial_guess
                                            : MeanFieldTrajectory(horizon, 0.5);
  check_trajectory(g);
  if (static_cast<int>(g.size()) != horizon) throw ConfigError("initial guess horizon mismatch");

  std::vector<ValueWeights> weights(types.size(), ValueWeights::zeros(horizon, cfg.fit.degree));
  MeanFieldTrajectory prev_g, prev_h;

  for (int it = 0; it < cfg.max_iter; ++it) {
    FitConfig fit_cfg = cfg.fit;
    fit_cfg.seed = cfg.seed;
    fit_cfg.iteration_tag = static_cast<std::uint64_t>(it);
    fit_cfg.threads = cfg.threads;
    for (std::size_t t = 0; t < types.size(); ++t) {
      const ValueWeights* warm = (it == 0) ? nullptr : &weights[t];
      weights[t] =
          fit_value_iteration(types[t], sol.scheds[t], g, lambda, alpha, fit_cfg, warm);
    }

    OperatorDiagnostics diag;
    const MeanFieldTrajectory h =
        apply_mf_operator(g, types, lambda, alpha, weights, sol.scheds, cfg,
                          static_cast<std::uint64_t>(it), &diag);
    double residual = 0.0;
    for (int k = 0; k < horizon; ++k) residual = std::max(residual, std::abs(h[k] - g[k]));

    if (!prev_g.empty()) {
      double dg = 0.0, dh = 0.0;
      for (int k = 0; k < horizon; ++k) {
        dg = std::max(dg, std::abs(g[k] - prev_g[k]));
        dh = std::max(dh, std::abs(h[k] - prev_h[k]));
      }
      if (dg > 0.0) sol.lipschitz_estimate = dh / dg;
    }
    prev_g = g;
    prev_h = h;

    for (int k = 0; k < horizon; ++k)
      g[k] = std::clamp((1.0 - cfg.damping) * g[k] + cfg.damping * h[k], 0.0, 1.0);

    sol.residual = residual;
    sol.mc_std = diag.max_mc_std;
    sol.iterations = it + 1;
    if (residual < cfg.tol) {
      sol.converged = true;
      break;
    }
  }

  // Refit against the final trajectory so the returned policy matches g_star.
  FitConfig fit_cfg = cfg.fit;
  fit_cfg.seed = cfg.seed;
  fit_cfg.iteration_tag = static_cast<std::uint64_t>(sol.iterations);
  fit_cfg.threads = cfg.threads;
  for (std::size_t t = 0; t < types.size(); ++t)
    weights[t] = fit_value_iteration(types[t], sol.scheds[t], g, lambda, alpha, fit_cfg, &weights[t]);

  sol.g_star = g;
  sol.weights = weights;
  return sol;
}

LipschitzProbe lipschitz_probe(const MeanFieldTrajectory& g1, const MeanFieldTrajectory& g2,
                               const std::vector<TeamType>& types, double lambda, double alpha,
                               const SolverConfig& cfg) {
  if (g1.size() != g2.size()) throw ConfigError("lipschitz_probe: trajectory lengths differ");
  double dg = 0.0;
  for (std::size_t k = 0; k < g1.size(); ++k) dg = std::max(dg, std::abs(g1[k] - g2[k]));
  if (dg == 0.0) throw ConfigError("lipschitz_probe: trajectories are identical");
  const int T = static_cast<int>(g1.size());

  std::vector<RiccatiSchedule> scheds;
  scheds.reserve(types.size());
  for (const auto& t : types) scheds.push_back(solve_riccati(t, T));

  FitConfig fit_cfg = cfg.fit;
  fit_cfg.seed = cfg.seed;
  fit_cfg.threads = cfg.threads;
  std::vector<ValueWeights> w1, w2;
  for (std::size_t t = 0; t < types.size(); ++t) {
    w1.push_back(fit_value_iteration(types[t], scheds[t], g1, lambda, alpha, fit_cfg));
    w2.push_back(fit_value_iteration(types[t], scheds[t], g2, lambda, alpha, fit_cfg));
  }

  // Same iteration tag on both evaluations -> identical noise streams.
  OperatorDiagnostics d1, d2;
  const MeanFieldTrajectory h1 = apply_mf_operator(g1, types, lambda, alpha, w1, scheds, cfg, 0, &d1);
  const MeanFieldTrajectory h2 = apply_mf_operator(g2, types, lambda, alpha, w2, scheds, cfg, 0, &d2);

  double dh = 0.0;
  for (int k = 0; k < T; ++k) dh = std::max(dh, std::abs(h1[k] - h2[k]));
  LipschitzProbe probe;
  probe.ratio = dh / dg;
  probe.mc_std = std::hypot(d1.max_mc_std, d2.max_mc_std) / dg;
  return probe;
}

}  // namespace mftg
