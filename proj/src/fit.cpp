#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "mftg/parallel.hpp"
#include "mftg/sensing.hpp"
#include "mftg/value_model.hpp"

namespace mftg {

namespace {

// Forward rollouts of the error process under the Boltzmann policy implied by
// `policy_weights`; returns the sampled errors per step (samples x T layout,
// flattened step-major).
std::vector<double> policy_rollouts(const TeamType& type, const RiccatiSchedule& sched,
                                    const MeanFieldTrajectory& g, double lambda, double alpha,
                                    const ValueWeights& policy_weights, int rollouts,
                                    std::uint64_t seed, std::uint64_t iteration_tag, int type_index,
                                    int threads) {
  const int T = static_cast<int>(g.size());
  const double a = type.a();
  const double sigma_w = std::sqrt(type.kw());
  const double sigma_0 = std::sqrt(type.sigma0());
  std::vector<double> pool(static_cast<std::size_t>(T) * rollouts);

  constexpr int kBlock = 64;
  const int n_blocks = (rollouts + kBlock - 1) / kBlock;
  parallel_blocks(n_blocks, threads, [&](int blk) {
    const int lo = blk * kBlock, hi = std::min(rollouts, lo + kBlock);
    for (int r = lo; r < hi; ++r) {
      Philox rng = make_rng(seed, StreamTag::kFitRollout, static_cast<std::uint64_t>(r),
                            static_cast<std::uint64_t>(type_index), iteration_tag);
      double e = sigma_0 * rng.gaussian();
      for (int k = 0; k < T; ++k) {
        pool[static_cast<std::size_t>(k) * rollouts + r] = e;
        const double p = boltzmann_prob(voi(e, k, g, lambda, policy_weights, type, sched), alpha);
        const int act = rng.uniform01() < p ? 1 : 0;
        e = (act ? 0.0 : a * e) + sigma_w * rng.gaussian();
      }
    }
  });
  return pool;
}

}  // namespace

ValueWeights fit_value_iteration(const TeamType& type, const RiccatiSchedule& sched,
                                 const MeanFieldTrajectory& g, double lambda, double alpha,
                                 const FitConfig& cfg, const ValueWeights* warm_start) {
  if (!type.scalar()) throw ConfigError("fit_value_iteration requires a scalar plant");
  check_trajectory(g);
  const int T = static_cast<int>(g.size());
  if (sched.horizon != T) throw ConfigError("schedule horizon does not match trajectory");
  const int n_feat = ValueWeights::feature_count(cfg.degree);
  if (cfg.samples < 10 * n_feat)
    throw ConfigError("fit needs at least 10 samples per feature");

  const double a = type.a();
  const double kw = type.kw();
  const int type_index = 0;

  ValueWeights rollout_policy =
      warm_start ? *warm_start : ValueWeights::zeros(T, warm_start ? warm_start->degree : cfg.degree);
  const int n_roll = std::max(1, static_cast<int>(std::lround(cfg.samples * (1.0 - cfg.explore_fraction))));
  const int n_explore = cfg.samples - n_roll;
  const std::vector<double> pool =
      policy_rollouts(type, sched, g, lambda, alpha, rollout_policy, n_roll, cfg.seed,
                      cfg.iteration_tag, type_index, cfg.threads);

  ValueWeights vw = ValueWeights::zeros(T, cfg.degree);

  std::vector<double> samples(cfg.samples), targets(cfg.samples);
  for (int k = T - 1; k >= 0; --k) {
    // Sample errors: policy-induced pool plus wide exploration around it.
    double mean = 0.0, sq = 0.0;
    for (int r = 0; r < n_roll; ++r) {
      const double e = pool[static_cast<std::size_t>(k) * n_roll + r];
      samples[r] = e;
      mean += e;
      sq += e * e;
    }
    mean /= n_roll;
    const double var = std::max(sq / n_roll - mean * mean, 0.0);
    const double explore_sd = 2.0 * std::sqrt(std::max(var, kw));
    Philox explore_rng = make_rng(cfg.seed, StreamTag::kFitExplore, static_cast<std::uint64_t>(k),
                                  static_cast<std::uint64_t>(type_index), cfg.iteration_tag);
    for (int i = 0; i < n_explore; ++i) samples[n_roll + i] = explore_sd * explore_rng.gaussian();

    // Bellman targets against the step-(k+1) fit.
    const double gamma_k = sched.gamma(k);
    const double gk1 = (k + 1 < T) ? g[k + 1] : 0.0;
    const double silent_price = lambda * g[k];
    const double ev_transmit = expected_weight_value(vw, k + 1, 0.0, kw, gk1);
    constexpr int kBlock = 256;
    const int n_blocks = (cfg.samples + kBlock - 1) / kBlock;
    parallel_blocks(n_blocks, cfg.threads, [&](int blk) {
      const int lo = blk * kBlock, hi = std::min(cfg.samples, lo + kBlock);
      for (int i = lo; i < hi; ++i) {
        const double e = samples[i];
        const double ev_silent = expected_weight_value(vw, k + 1, a * e, kw, gk1);
        double cont;
        if (cfg.soft_bellman) {
          const double d = ev_silent - (silent_price + ev_transmit);
          const double p = 1.0 / (1.0 + std::exp(-std::clamp(alpha * d, -700.0, 700.0)));
          cont = p * (silent_price + ev_transmit) + (1.0 - p) * ev_silent;
        } else {
          cont = std::min(ev_silent, silent_price + ev_transmit);
        }
        targets[i] = gamma_k * e * e + cont;
      }
    });

    for (double y : targets)
      if (!std::isfinite(y)) throw NumericError("fit_value_iteration: non-finite Bellman target");

    // Ridge-regularized least squares on the feature basis. The g^2 column is
    // constant within a step, so the ridge term resolves its collinearity with
    // the intercept.
    Eigen::MatrixXd FtF = Eigen::MatrixXd::Zero(n_feat, n_feat);
    Eigen::VectorXd Fty = Eigen::VectorXd::Zero(n_feat);
    for (int i = 0; i < cfg.samples; ++i) {
      const auto f = features(samples[i], g[k], cfg.degree);
      for (int r = 0; r < n_feat; ++r) {
        Fty(r) += f[r] * targets[i];
        for (int c = 0; c <= r; ++c) FtF(r, c) += f[r] * f[c];
      }
    }
    FtF = FtF.selfadjointView<Eigen::Lower>();
    FtF.diagonal().array() += cfg.ridge;
    const Eigen::VectorXd w = FtF.ldlt().solve(Fty);
    for (int r = 0; r < n_feat; ++r) vw.w[k][r] = w(r);
  }
  return vw;
}

}  // namespace mftg
