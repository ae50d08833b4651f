#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mftg/experiments.hpp"

namespace {

// Precedence for seed and threads: flag > environment > config default.
void apply_env(mftg::CliOptions& opts) {
  if (!opts.seed) {
    if (const char* env = std::getenv("MFTG_SEED")) opts.seed = std::strtoull(env, nullptr, 10);
  }
  if (!opts.threads) {
    if (const char* env = std::getenv("MFTG_THREADS")) opts.threads = std::atoi(env);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field equilibrium solver and finite-population simulator for "
               "networked LQG teams sharing a priced uplink"};
  app.require_subcommand(1);

  std::string config_path, solution_path;
  mftg::CliOptions opts;
  std::uint64_t seed_flag = 0;
  int threads_flag = 0;
  bool no_timestamp = false;

  auto add_common = [&](CLI::App* cmd, bool needs_solution) {
    cmd->add_option("--config", config_path, "experiment configuration (JSON)")->required();
    if (needs_solution)
      cmd->add_option("--solution", solution_path, "solution file from solve-mfte")->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", seed_flag, "master seed override")
        ->each([&](const std::string&) { opts.seed = seed_flag; });
    cmd->add_option("--threads", threads_flag, "worker thread count")
        ->each([&](const std::string&) { opts.threads = threads_flag; });
    cmd->add_flag("--no-timestamp", no_timestamp, "omit the timestamp header from CSV outputs");
  };

  CLI::App* solve = app.add_subcommand("solve-mfte", "solve the equilibrium fixed point");
  add_common(solve, false);
  CLI::App* sim = app.add_subcommand("simulate", "simulate the finite population");
  add_common(sim, true);
  CLI::App* sweep = app.add_subcommand("sweep", "solve + simulate over a parameter grid");
  add_common(sweep, false);
  CLI::App* gap = app.add_subcommand("nash-gap", "unilateral deviation experiment");
  add_common(gap, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  apply_env(opts);
  opts.timestamp = !no_timestamp;

  try {
    const mftg::ExperimentConfig cfg = mftg::load_config(config_path);
    if (solve->parsed()) return mftg::cmd_solve_mfte(cfg, opts, std::cout);
    if (sim->parsed()) return mftg::cmd_simulate(cfg, solution_path, opts, std::cout);
    if (sweep->parsed()) return mftg::cmd_sweep(cfg, opts, std::cout);
    if (gap->parsed()) return mftg::cmd_nash_gap(cfg, solution_path, opts, std::cout);
  } catch (const mftg::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mftg::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
