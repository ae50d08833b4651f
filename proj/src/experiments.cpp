#include "mftg/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "mftg/csv.hpp"

namespace mftg {

namespace {

std::uint64_t effective_seed(const ExperimentConfig& cfg, const CliOptions& opts) {
  return opts.seed.value_or(cfg.sim.seed);
}

int effective_threads(const CliOptions& opts) { return std::max(1, opts.threads.value_or(1)); }

std::string out_path(const CliOptions& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  return (std::filesystem::path(opts.out_dir) / name).string();
}

MFTESolution solve_from_config(const ExperimentConfig& cfg, std::uint64_t seed, int threads) {
  SolverConfig solver = cfg.solver;
  solver.seed = seed;
  solver.threads = threads;
  return solve_mfte(cfg.types, cfg.lambda, cfg.alpha, cfg.horizon, solver);
}

void check_solution_matches(const ExperimentConfig& cfg, const LoadedSolution& loaded) {
  if (loaded.solution.horizon != cfg.horizon)
    throw ConfigError("solution horizon " + std::to_string(loaded.solution.horizon) +
                      " does not match config T=" + std::to_string(cfg.horizon));
  if (!loaded.solver_hash.empty() && loaded.solver_hash != cfg.solver_hash)
    throw ConfigError("solution solver_hash " + loaded.solver_hash +
                      " does not match config solver_hash " + cfg.solver_hash +
                      "; refusing to mix configurations");
}

SimResult run_simulation(const ExperimentConfig& cfg, const MFTESolution& sol,
                         const std::vector<TeamType>& types, int N, int runs, std::uint64_t seed,
                         int threads) {
  const Population pop = sample_population(N, types, cfg.sim.population, seed);
  SimOptions opts;
  opts.threads = threads;
  opts.init_dist = cfg.sim.init_dist;
  return simulate(pop, sol, types, runs, cfg.horizon, seed, opts);
}

void write_sim_csvs(const SimResult& sim, const ExperimentConfig& cfg, const CliOptions& opts,
                    std::uint64_t seed) {
  CsvWriter costs(out_path(opts, "costs.csv"),
                  {"run", "team", "type", "cost_total", "cost_control", "cost_comm"},
                  cfg.config_hash, seed, opts.timestamp);
  for (int run = 0; run < sim.runs; ++run)
    for (int team = 0; team < sim.N; ++team) {
      const TeamCost& c = sim.cost(run, team);
      costs.row({format_int(run), format_int(team),
                 cfg.types[sim.assignment[team]].id, format_double(c.total),
                 format_double(c.control), format_double(c.comm)});
    }
  costs.close();

  CsvWriter util(out_path(opts, "utilization.csv"), {"run", "k", "utilization"}, cfg.config_hash,
                 seed, opts.timestamp);
  for (int run = 0; run < sim.runs; ++run)
    for (int k = 0; k < sim.T; ++k)
      util.row({format_int(run), format_int(k), format_double(sim.util(run, k))});
  util.close();
}

double time_average(const std::vector<double>& g) {
  double acc = 0.0;
  for (double v : g) acc += v;
  return g.empty() ? 0.0 : acc / g.size();
}

}  // namespace

std::vector<double> per_run_average_cost(const SimResult& sim) {
  std::vector<double> out(sim.runs, 0.0);
  for (int run = 0; run < sim.runs; ++run) {
    double acc = 0.0;
    for (int team = 0; team < sim.N; ++team) acc += sim.cost(run, team).total;
    out[run] = acc / sim.N;
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

int cmd_solve_mfte(const ExperimentConfig& cfg, const CliOptions& opts, std::ostream& log) {
  const std::uint64_t seed = effective_seed(cfg, opts);
  const MFTESolution sol = solve_from_config(cfg, seed, effective_threads(opts));
  const std::string path = out_path(opts, "solution.json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open \"" + path + "\" for writing");
  out << solution_to_json(sol, cfg.types, cfg.solver_hash, cfg.config_hash, seed);
  log << "solve-mfte: residual=" << sol.residual << " iterations=" << sol.iterations
      << " converged=" << (sol.converged ? "true" : "false")
      << " contraction_certified=" << (sol.contraction_certified ? "true" : "false") << " -> "
      << path << "\n";
  if (!sol.converged)
    log << "solve-mfte: warning: residual above tolerance after " << sol.iterations
        << " iterations\n";
  return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, const std::string& solution_path,
                 const CliOptions& opts, std::ostream& log) {
  const LoadedSolution loaded = load_solution(solution_path);
  check_solution_matches(cfg, loaded);
  const std::uint64_t seed = effective_seed(cfg, opts);
  const SimResult sim = run_simulation(cfg, loaded.solution, loaded.types, cfg.sim.N, cfg.sim.runs,
                                       seed, effective_threads(opts));
  write_sim_csvs(sim, cfg, opts, seed);
  std::vector<double> run_costs = per_run_average_cost(sim);
  log << "simulate: runs=" << sim.runs << " N=" << sim.N
      << " cost median=" << median(run_costs) << " q25=" << quantile(run_costs, 0.25)
      << " q75=" << quantile(run_costs, 0.75) << "\n";
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const CliOptions& opts, std::ostream& log) {
  if (!cfg.sweep) throw ConfigError("config: missing field \"sweep\"");
  const SweepSpec& sweep = *cfg.sweep;
  const std::uint64_t master = effective_seed(cfg, opts);
  const int threads = effective_threads(opts);

  const std::size_t n_points = sweep.variable == SweepSpec::Variable::kLambdaAlpha
                                   ? sweep.lambda_alpha.size()
                                   : sweep.values.size();
  CsvWriter csv(out_path(opts, "sweep.csv"),
                {"point", "variable", "lambda", "alpha", "N", "degree", "status", "seed",
                 "residual", "iterations", "converged", "contraction_certified", "g_time_avg",
                 "cost_median", "cost_q25", "cost_q75", "dev_mismatch"},
                cfg.config_hash, master, opts.timestamp);

  std::vector<double> sweep_n, sweep_mismatch;
  int ok_points = 0;
  for (std::size_t i = 0; i < n_points; ++i) {
    ExperimentConfig point = cfg;
    std::string variable;
    switch (sweep.variable) {
      case SweepSpec::Variable::kLambdaAlpha:
        variable = "lambda_alpha";
        point.lambda = sweep.lambda_alpha[i].first;
        point.alpha = sweep.lambda_alpha[i].second;
        break;
      case SweepSpec::Variable::kN:
        variable = "N";
        point.sim.N = sweep.values[i];
        break;
      case SweepSpec::Variable::kDegree:
        variable = "degree";
        point.solver.fit.degree = sweep.values[i];
        break;
    }
    const std::uint64_t point_seed = mix_seed(master, i);
    try {
      const MFTESolution sol = solve_from_config(point, point_seed, threads);
      const SimResult sim = run_simulation(point, sol, point.types, point.sim.N, point.sim.runs,
                                           point_seed, threads);
      std::vector<double> run_costs = per_run_average_cost(sim);
      double mismatch = 0.0;
      for (int k = 0; k < sim.T; ++k) {
        double mean_abs = 0.0;
        for (int run = 0; run < sim.runs; ++run)
          mean_abs += std::abs(sim.util(run, k) - sol.g_star[k]);
        mismatch += mean_abs / sim.runs;
      }
      mismatch /= sim.T;
      csv.row({format_int(static_cast<std::int64_t>(i)), variable, format_double(point.lambda),
               format_double(point.alpha), format_int(point.sim.N),
               format_int(point.solver.fit.degree), "ok", format_int(point_seed),
               format_double(sol.residual), format_int(sol.iterations),
               sol.converged ? "true" : "false", sol.contraction_certified ? "true" : "false",
               format_double(time_average(sol.g_star)), format_double(median(run_costs)),
               format_double(quantile(run_costs, 0.25)), format_double(quantile(run_costs, 0.75)),
               format_double(mismatch)});
      if (sweep.variable == SweepSpec::Variable::kN) {
        sweep_n.push_back(point.sim.N);
        sweep_mismatch.push_back(mismatch);
      }
      ++ok_points;
    } catch (const std::exception& e) {
      csv.row({format_int(static_cast<std::int64_t>(i)), variable, format_double(point.lambda),
               format_double(point.alpha), format_int(point.sim.N),
               format_int(point.solver.fit.degree), "error", format_int(point_seed), "nan", "0",
               "false", "false", "nan", "nan", "nan", "nan", "nan"});
      log << "sweep: point " << i << " failed: " << e.what() << "\n";
    }
  }
  csv.close();
  log << "sweep: " << ok_points << "/" << n_points << " points ok -> "
      << out_path(opts, "sweep.csv") << "\n";
  if (sweep_n.size() >= 2)
    log << "sweep: deviation-mismatch log-log slope vs N = "
        << loglog_slope(sweep_n, sweep_mismatch) << "\n";
  return ok_points > 0 ? 0 : 3;
}

int cmd_nash_gap(const ExperimentConfig& cfg, const std::string& solution_path,
                 const CliOptions& opts, std::ostream& log) {
  if (!cfg.deviation) throw ConfigError("config: missing field \"deviation\"");
  const LoadedSolution loaded = load_solution(solution_path);
  check_solution_matches(cfg, loaded);
  const std::uint64_t seed = effective_seed(cfg, opts);

  DeviationSpec dev = *cfg.deviation;
  if (cfg.deviation_thresholds_default)
    dev.thresholds = DeviationSpec::default_threshold_grid(loaded.types[0].K_W.trace());

  const Population pop = sample_population(cfg.sim.N, loaded.types, cfg.sim.population, seed);
  SimOptions sim_opts;
  sim_opts.threads = effective_threads(opts);
  sim_opts.init_dist = cfg.sim.init_dist;
  const GapReport report =
      nash_gap(pop, loaded.solution, loaded.types, dev, cfg.sim.runs, seed, sim_opts);

  CsvWriter csv(out_path(opts, "nash_gap.csv"), {"deviation_id", "mean_cost", "ci_low", "ci_high"},
                cfg.config_hash, seed, opts.timestamp);
  for (const auto& arm : report.arms)
    csv.row({arm.id, format_double(arm.mean_cost), format_double(arm.ci_low),
             format_double(arm.ci_high)});
  csv.close();

  log << "nash-gap: baseline=" << report.baseline_mean << " best=" << report.best_mean << " ("
      << report.best_arm << ") gap=" << report.gap << " gap_se=" << report.gap_se
      << " (lower bound over the restricted class)\n";
  return 0;
}

}  // namespace mftg
