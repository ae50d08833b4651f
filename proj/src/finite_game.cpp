#include "mftg/finite_game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mftg/parallel.hpp"

namespace mftg {

Population sample_population(int N, const std::vector<TeamType>& types, PopulationMode mode,
                             std::uint64_t seed) {
  if (N < 1) throw ConfigError("population needs at least one team");
  if (types.empty()) throw ConfigError("population needs a nonempty type set");
  const int n_types = static_cast<int>(types.size());

  Population pop;
  pop.N = N;
  pop.assignment.resize(N);
  std::vector<int> counts(n_types, 0);

  if (mode == PopulationMode::kIid) {
    for (int i = 0; i < N; ++i) {
      Philox rng = make_rng(seed, StreamTag::kPopulation, static_cast<std::uint64_t>(i));
      const double u = rng.uniform01();
      double acc = 0.0;
      int pick = n_types - 1;
      for (int t = 0; t < n_types; ++t) {
        acc += types[t].prob;
        if (u < acc) {
          pick = t;
          break;
        }
      }
      pop.assignment[i] = pick;
      ++counts[pick];
    }
  } else {
    // Largest-remainder apportionment of N * P(w).
    std::vector<double> remainder(n_types);
    int assigned = 0;
    for (int t = 0; t < n_types; ++t) {
      const double exact = N * types[t].prob;
      counts[t] = static_cast<int>(std::floor(exact));
      remainder[t] = exact - counts[t];
      assigned += counts[t];
    }
    std::vector<int> order(n_types);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return remainder[x] > remainder[y]; });
    for (int i = 0; assigned < N; ++i, ++assigned) ++counts[order[i % n_types]];
    int team = 0;
    for (int t = 0; t < n_types; ++t)
      for (int c = 0; c < counts[t]; ++c) pop.assignment[team++] = t;
  }

  pop.empirical_pmf.resize(n_types);
  pop.eps_PN = 0.0;
  for (int t = 0; t < n_types; ++t) {
    pop.empirical_pmf[t] = static_cast<double>(counts[t]) / N;
    pop.eps_PN += std::abs(pop.empirical_pmf[t] - types[t].prob);
  }
  return pop;
}

std::vector<double> DeviationSpec::default_threshold_grid(double noise_var) {
  const double scale = std::sqrt(noise_var);
  const double lo = 0.05 * scale, hi = 20.0 * scale;
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i) grid[i] = lo * std::pow(hi / lo, i / 19.0);
  return grid;
}

std::vector<DeviationArm> DeviationSpec::arms() const {
  std::vector<DeviationArm> out;
  if (include_equilibrium) out.push_back({DeviationArm::Kind::kEquilibrium, 0.0, "equilibrium"});
  for (double tau : thresholds)
    out.push_back({DeviationArm::Kind::kThreshold, tau, "threshold:" + std::to_string(tau)});
  for (double a : alt_alphas)
    out.push_back({DeviationArm::Kind::kAltBoltzmann, a, "boltzmann-alpha:" + std::to_string(a)});
  if (always_transmit) out.push_back({DeviationArm::Kind::kAlwaysTransmit, 0.0, "always-transmit"});
  if (never_transmit) out.push_back({DeviationArm::Kind::kNeverTransmit, 0.0, "never-transmit"});
  if (out.empty()) throw ConfigError("deviation class is empty");
  return out;
}

namespace {

struct TeamParams {
  const TeamType* type;
  const RiccatiSchedule* sched;
  const ValueWeights* weights;
  double a, b, q, r, sigma_w, sigma_0, nu;
};

double draw_initial_state(Philox& rng, const TeamParams& tp, InitDist dist) {
  if (dist == InitDist::kUniformSymmetric)
    return tp.nu + std::sqrt(3.0) * tp.sigma_0 * (2.0 * rng.uniform01() - 1.0);
  return tp.nu + tp.sigma_0 * rng.gaussian();
}

// Transmission decision for one team at step k; consumes the step's action
// uniform regardless of the policy so that arms stay coupled.
int decide(const DeviationArm& arm, double e, int k, const MFTESolution& sol,
           const TeamParams& tp, double u) {
  switch (arm.kind) {
    case DeviationArm::Kind::kAlwaysTransmit: return 1;
    case DeviationArm::Kind::kNeverTransmit: return 0;
    case DeviationArm::Kind::kThreshold: return std::abs(e) >= arm.param ? 1 : 0;
    case DeviationArm::Kind::kAltBoltzmann:
    case DeviationArm::Kind::kEquilibrium: {
      const double alpha = arm.kind == DeviationArm::Kind::kAltBoltzmann ? arm.param : sol.alpha;
      const double p =
          boltzmann_prob(voi(e, k, sol.g_star, sol.lambda, *tp.weights, *tp.type, *tp.sched), alpha);
      return u < p ? 1 : 0;
    }
  }
  return 0;
}

struct RunOutput {
  std::vector<double> control_sum;  // per team, sum of stage control costs
  std::vector<double> comm_sum;     // per team, sum of gamma * channel average
  std::vector<double> util;         // per k
  std::vector<std::uint8_t> acts;   // team-major [team * T + k], filled when kept
};

void simulate_run(const std::vector<TeamParams>& teams, const MFTESolution& sol, int T,
                  std::uint64_t seed, int run, const SimOptions& opts, bool keep_actions,
                  RunOutput& out) {
  const int N = static_cast<int>(teams.size());
  const DeviationArm eq{DeviationArm::Kind::kEquilibrium, 0.0, "equilibrium"};
  const DeviationArm& arm = opts.policy_override ? *opts.policy_override : eq;

  std::vector<double> X(N), e(N);
  std::vector<int> gamma(N);
  out.control_sum.assign(N, 0.0);
  out.comm_sum.assign(N, 0.0);
  out.util.assign(T, 0.0);
  if (keep_actions) out.acts.assign(static_cast<std::size_t>(N) * T, 0);

  auto label = [&](int i) { return opts.stream_labels ? (*opts.stream_labels)[i] : i; };

  for (int i = 0; i < N; ++i) {
    Philox rng = make_rng(seed, StreamTag::kInitState, static_cast<std::uint64_t>(label(i)),
                          static_cast<std::uint64_t>(run), 0);
    X[i] = draw_initial_state(rng, teams[i], opts.init_dist);
    e[i] = X[i] - teams[i].nu;
  }

  for (int k = 0; k < T; ++k) {
    // Decisions first: the channel average at k needs every action at k.
    int transmitted = 0;
    for (int i = 0; i < N; ++i) {
      const TeamParams& tp = teams[i];
      Philox act_rng = make_rng(seed, StreamTag::kActionUniform,
                                static_cast<std::uint64_t>(label(i)),
                                static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(k));
      gamma[i] = decide(arm, e[i], k, sol, tp, act_rng.uniform01());
      transmitted += gamma[i];
      if (keep_actions) out.acts[static_cast<std::size_t>(i) * T + k] = gamma[i];
    }
    const double channel_avg = static_cast<double>(transmitted) / N;
    out.util[k] = channel_avg;

    for (int i = 0; i < N; ++i) {
      const TeamParams& tp = teams[i];
      const double z = X[i] - e[i];
      const double u = -tp.sched->l(k) * z;
      out.control_sum[i] += tp.q * X[i] * X[i] + tp.r * u * u;
      out.comm_sum[i] += gamma[i] * channel_avg;

      Philox noise_rng = make_rng(seed, StreamTag::kProcessNoise,
                                  static_cast<std::uint64_t>(label(i)),
                                  static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(k));
      const double w = tp.sigma_w * noise_rng.gaussian();
      X[i] = tp.a * X[i] + tp.b * u + w;
      e[i] = (gamma[i] ? 0.0 : tp.a * e[i]) + w;
    }
  }
}

std::vector<TeamParams> build_team_params(const Population& pop, const MFTESolution& sol,
                                          const std::vector<TeamType>& types) {
  if (types.size() != sol.weights.size() || types.size() != sol.scheds.size())
    throw ConfigError("solution does not cover the type set");
  std::vector<TeamParams> teams(pop.N);
  for (int i = 0; i < pop.N; ++i) {
    const int t = pop.assignment[i];
    const TeamType& type = types[t];
    if (!type.scalar()) throw ConfigError("simulate requires scalar plants");
    teams[i] = {&type,          &sol.scheds[t],          &sol.weights[t],
                type.a(),       type.b(),                type.q(),
                type.r(),       std::sqrt(type.kw()),    std::sqrt(type.sigma0()),
                type.mean0()};
  }
  return teams;
}

}  // namespace

SimResult simulate(const Population& pop, const MFTESolution& solution,
                   const std::vector<TeamType>& types, int runs, int horizon, std::uint64_t seed,
                   const SimOptions& opts) {
  if (pop.N < 1) throw ConfigError("simulate: empty population");
  if (runs < 1) throw ConfigError("simulate: needs at least one run");
  if (horizon != solution.horizon) throw ConfigError("simulate: horizon does not match solution");

  const auto teams = build_team_params(pop, solution, types);
  const int T = horizon;

  SimResult result;
  result.N = pop.N;
  result.T = T;
  result.runs = runs;
  result.assignment = pop.assignment;
  result.seed = seed;
  result.costs.resize(static_cast<std::size_t>(runs) * pop.N);
  result.utilization.resize(static_cast<std::size_t>(runs) * T);
  const std::int64_t trace_cells =
      static_cast<std::int64_t>(pop.N) * T * runs;
  result.has_traces = trace_cells <= 10'000'000;
  if (result.has_traces) result.actions.resize(trace_cells);

  parallel_blocks(runs, opts.threads, [&](int run) {
    RunOutput out;
    simulate_run(teams, solution, T, seed, run, opts, result.has_traces, out);
    for (int i = 0; i < pop.N; ++i) {
      TeamCost& c = result.costs[static_cast<std::size_t>(run) * pop.N + i];
      c.control = out.control_sum[i] / T;
      c.comm = out.comm_sum[i] / T;
      c.total = c.control + solution.lambda * c.comm;
    }
    for (int k = 0; k < T; ++k) result.utilization[static_cast<std::size_t>(run) * T + k] = out.util[k];
    if (result.has_traces)
      std::copy(out.acts.begin(), out.acts.end(),
                result.actions.begin() + static_cast<std::size_t>(run) * pop.N * T);
  });
  return result;
}

double deviation_mismatch(const Population& pop, const MFTESolution& solution,
                          const std::vector<TeamType>& types, int runs, std::uint64_t seed,
                          const SimOptions& opts) {
  const SimResult sim = simulate(pop, solution, types, runs, solution.horizon, seed, opts);
  const int T = solution.horizon;
  double acc = 0.0;
  for (int k = 0; k < T; ++k) {
    double mean_abs = 0.0;
    for (int run = 0; run < runs; ++run)
      mean_abs += std::abs(sim.util(run, k) - solution.g_star[k]);
    acc += mean_abs / runs;
  }
  return acc / T;
}

GapReport nash_gap(const Population& pop, const MFTESolution& solution,
                   const std::vector<TeamType>& types, const DeviationSpec& dev, int runs,
                   std::uint64_t seed, const SimOptions& opts) {
  if (dev.team < 0 || dev.team >= pop.N) throw ConfigError("nash_gap: deviating team out of range");
  const auto arms = dev.arms();
  const auto teams = build_team_params(pop, solution, types);
  const int T = solution.horizon;
  const int N = pop.N;
  const int i_dev = dev.team;

  // Base pass: everyone on the equilibrium policy. Non-deviating teams do not
  // react to team i, so their actions are reused across arms.
  std::vector<double> base_cost(runs);                        // team i's equilibrium cost
  std::vector<int> others(static_cast<std::size_t>(runs) * T);  // transmissions excluding team i
  parallel_blocks(runs, opts.threads, [&](int run) {
    RunOutput out;
    simulate_run(teams, solution, T, seed, run, opts, true, out);
    const TeamCost c{out.control_sum[i_dev] / T + solution.lambda * out.comm_sum[i_dev] / T,
                     out.control_sum[i_dev] / T, out.comm_sum[i_dev] / T};
    base_cost[run] = c.total;
    for (int k = 0; k < T; ++k) {
      int tx = static_cast<int>(std::lround(out.util[k] * N));
      tx -= out.acts[static_cast<std::size_t>(i_dev) * T + k];
      others[static_cast<std::size_t>(run) * T + k] = tx;
    }
  });

  // Arm passes: re-simulate only team i on its own streams.
  GapReport report;
  report.arms.reserve(arms.size());
  std::vector<double> arm_costs(runs);
  const TeamParams& tp = teams[i_dev];
  auto label_i = opts.stream_labels ? (*opts.stream_labels)[i_dev] : i_dev;

  for (const auto& arm : arms) {
    parallel_blocks(runs, opts.threads, [&](int run) {
      Philox init_rng = make_rng(seed, StreamTag::kInitState, static_cast<std::uint64_t>(label_i),
                                 static_cast<std::uint64_t>(run), 0);
      double X = draw_initial_state(init_rng, tp, opts.init_dist);
      double e = X - tp.nu;
      double control_sum = 0.0, comm_sum = 0.0;
      for (int k = 0; k < T; ++k) {
        Philox act_rng = make_rng(seed, StreamTag::kActionUniform,
                                  static_cast<std::uint64_t>(label_i),
                                  static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(k));
        const int gamma = decide(arm, e, k, solution, tp, act_rng.uniform01());
        const double channel_avg =
            (others[static_cast<std::size_t>(run) * T + k] + gamma) / static_cast<double>(N);
        const double z = X - e;
        const double u = -tp.sched->l(k) * z;
        control_sum += tp.q * X * X + tp.r * u * u;
        comm_sum += gamma * channel_avg;
        Philox noise_rng = make_rng(seed, StreamTag::kProcessNoise,
                                    static_cast<std::uint64_t>(label_i),
                                    static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(k));
        const double w = tp.sigma_w * noise_rng.gaussian();
        X = tp.a * X + tp.b * u + w;
        e = (gamma ? 0.0 : tp.a * e) + w;
      }
      arm_costs[run] = control_sum / T + solution.lambda * comm_sum / T;
    });

    ArmResult res;
    res.id = arm.id;
    double mean = 0.0;
    for (double c : arm_costs) mean += c;
    mean /= runs;
    double var = 0.0;
    for (double c : arm_costs) var += (c - mean) * (c - mean);
    const double se = runs > 1 ? std::sqrt(var / (runs - 1) / runs) : 0.0;
    res.mean_cost = mean;
    res.ci_low = mean - 1.96 * se;
    res.ci_high = mean + 1.96 * se;
    report.arms.push_back(res);

    if (report.best_arm.empty() || mean < report.best_mean) {
      report.best_arm = arm.id;
      report.best_mean = mean;
      // Paired standard error of baseline - arm under common random numbers.
      double dmean = 0.0;
      for (int run = 0; run < runs; ++run) dmean += base_cost[run] - arm_costs[run];
      dmean /= runs;
      double dvar = 0.0;
      for (int run = 0; run < runs; ++run) {
        const double d = base_cost[run] - arm_costs[run] - dmean;
        dvar += d * d;
      }
      report.gap_se = runs > 1 ? std::sqrt(dvar / (runs - 1) / runs) : 0.0;
    }
  }

  double base_mean = 0.0;
  for (double c : base_cost) base_mean += c;
  report.baseline_mean = base_mean / runs;
  report.gap = report.baseline_mean - report.best_mean;
  return report;
}

}  // namespace mftg
