#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ctop/bench.hpp"
#include "ctop/budget.hpp"
#include "ctop/ga.hpp"
#include "ctop/instance.hpp"
#include "ctop/json_io.hpp"
#include "ctop/oracle.hpp"
#include "ctop/svg.hpp"
#include "ctop/tuner.hpp"

namespace {

constexpr int kOracleSamplingCap = 20;

struct GenArgs {
  int rows = 0;
  int cols = 0;
  double spacing = 1.0;
  double noise = 0.0;
  double kernel_length = 1.0;
  double radius = 0.0;
  std::string kernel_form = "absolute";
  std::uint64_t seed = 0;
  std::string out;
};

struct SolveArgs {
  std::string instance;
  int robots = 3;
  double budget_frac = 1.0;
  std::string method = "nnrasp";
  std::string params;
  std::uint64_t seed = 0;
  std::string out;
};

struct OracleArgs {
  std::string instance;
  int robots = 1;
  double budget_frac = 1.0;
  double gap = 0.0;
  std::uint64_t node_limit = 0;
  double time_limit_s = 0.0;
  bool force = false;
  std::string out;
};

struct BenchArgs {
  std::string instance;
  std::string sweep = "robots";
  int runs = 1;
  std::vector<std::string> methods = {"ga-random", "ga-nnrasp"};
  std::uint64_t seed = 0;
  double gap = 0.05;
  int threads = 0;
  std::string scenario;
  bool force = false;
  std::string out;
};

struct TuneArgs {
  std::string method = "random";
  std::string suite = "desk";
  int population = 100;
  int trials = 10;
  int games = 10;
  double speed_bonus = 0.1;
  std::uint64_t seed = 0;
  bool deterministic_timing = false;
  std::string out = "tuning_report.json";
  std::string params_out;
};

struct PlotArgs {
  std::string instance;
  std::string solution;
  std::string out;
};

std::string path_stem(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  const std::size_t dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return name.empty() ? "instance" : name;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

int run_gen(const GenArgs& args) {
  const ctop::ProblemInstance inst = ctop::build_grid_instance(
      args.rows, args.cols, args.spacing, args.noise, args.kernel_length,
      args.seed, args.radius, ctop::kernel_form_from_string(args.kernel_form));
  ctop::save_instance(args.out, inst);
  std::cout << "wrote " << args.out << " (" << inst.num_sampling()
            << " sampling vertices)\n";
  return 0;
}

int run_solve(const SolveArgs& args, bool method_given, bool seed_given) {
  const ctop::ProblemInstance inst = ctop::load_instance(args.instance);
  ctop::GaParams params;
  if (!args.params.empty()) {
    params = ctop::load_params(args.params);
    if (method_given) {
      params.generation_method = ctop::generation_method_from_string(args.method);
    }
  } else {
    params = ctop::generation_method_from_string(args.method) ==
                     ctop::GenerationMethod::NNRASP
                 ? ctop::GaParams::tuned_nnrasp()
                 : ctop::GaParams::tuned_random();
  }
  if (seed_given || args.params.empty()) params.seed = args.seed;

  const ctop::BudgetSpec budgets =
      ctop::budget_for_team(inst, args.robots, args.budget_frac);
  const ctop::SolveResult res = ctop::solve(inst, budgets, params);
  const ctop::json j = ctop::solve_result_to_json(res);
  if (args.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    ctop::save_json(args.out, j);
    std::cout << "utility " << res.solution.utility << ", wall time "
              << res.wall_time_s << " s -> " << args.out << '\n';
  }
  if (res.infeasible_input) {
    std::cerr << "infeasible input: per-robot budget " << budgets.budgets[0]
              << " cannot cover the direct start-finish leg ("
              << inst.travel(inst.start_id, inst.finish_id) << ")\n";
    return 1;
  }
  return 0;
}

int run_oracle(const OracleArgs& args) {
  const ctop::ProblemInstance inst = ctop::load_instance(args.instance);
  if (inst.num_sampling() > kOracleSamplingCap && !args.force) {
    std::cerr << "oracle: instance has " << inst.num_sampling()
              << " sampling vertices; exhaustive search beyond "
              << kOracleSamplingCap
              << " can take hours. Pass --force to run anyway, or add "
                 "--node-limit/--time-limit to bound the search.\n";
    return 2;
  }
  ctop::OracleConfig config;
  config.gap = args.gap;
  config.node_limit = args.node_limit;
  config.time_limit_s = args.time_limit_s;
  const ctop::BudgetSpec budgets =
      ctop::budget_for_team(inst, args.robots, args.budget_frac);
  const ctop::OracleResult res = ctop::solve_exact(inst, budgets, config);
  const ctop::json j = ctop::oracle_result_to_json(res);
  if (args.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    ctop::save_json(args.out, j);
    std::cout << "utility " << res.solution.utility << ", bound " << res.bound
              << ", proven gap " << res.proven_gap << " -> " << args.out << '\n';
  }
  if (!res.solution.feasible) {
    std::cerr << "infeasible input: per-robot budget " << budgets.budgets[0]
              << " cannot cover the direct start-finish leg ("
              << inst.travel(inst.start_id, inst.finish_id) << ")\n";
    return 1;
  }
  return 0;
}

int run_bench(const BenchArgs& args) {
  const ctop::ProblemInstance inst = ctop::load_instance(args.instance);
  ctop::BenchConfig cfg;
  cfg.scenario = args.scenario.empty() ? path_stem(args.instance) : args.scenario;
  cfg.methods.clear();
  for (const std::string& m : args.methods) {
    cfg.methods.push_back(ctop::bench_method_from_string(m));
  }
  cfg.sweep = ctop::bench_sweep_from_string(args.sweep);
  cfg.runs = args.runs;
  cfg.base_seed = args.seed;
  cfg.oracle_gap = args.gap;
  cfg.threads = args.threads;

  const bool has_oracle =
      std::find(cfg.methods.begin(), cfg.methods.end(),
                ctop::BenchMethod::Oracle) != cfg.methods.end();
  if (has_oracle && inst.num_sampling() > kOracleSamplingCap && !args.force) {
    std::cerr << "bench: oracle runs on " << inst.num_sampling()
              << " sampling vertices can take hours; pass --force to allow "
                 "them or drop the oracle method.\n";
    return 2;
  }

  const std::string csv = ctop::bench_csv(ctop::run_benchmark(inst, cfg));
  if (args.out.empty()) {
    std::cout << csv;
  } else {
    write_text(args.out, csv);
    std::cout << "wrote " << args.out << '\n';
  }
  return 0;
}

std::vector<ctop::TunerProblem> make_suite(const std::string& name) {
  using ctop::build_grid_instance;
  using ctop::make_tuner_problem;
  std::vector<ctop::TunerProblem> suite;
  if (name == "smoke") {
    suite.push_back(
        make_tuner_problem(build_grid_instance(3, 3, 1.0, 0.0, 1.0, 0), 2, 0.75));
  } else if (name == "desk") {
    suite.push_back(
        make_tuner_problem(build_grid_instance(5, 5, 1.0, 0.0, 1.0, 0), 3, 0.75));
    suite.push_back(
        make_tuner_problem(build_grid_instance(5, 5, 1.0, 0.3, 1.0, 1), 3, 0.75));
  } else if (name == "paper") {
    for (const int size : {5, 7, 9}) {
      for (const double noise : {0.0, 0.3}) {
        for (const int robots : {3, 5}) {
          suite.push_back(make_tuner_problem(
              build_grid_instance(size, size, 1.0, noise, 1.0,
                                  static_cast<std::uint64_t>(size)),
              robots, 0.75));
        }
      }
    }
  } else {
    throw std::invalid_argument("unknown suite: " + name +
                                " (expected smoke, desk, or paper)");
  }
  return suite;
}

int run_tune(const TuneArgs& args) {
  ctop::TunerConfig cfg;
  cfg.population = args.population;
  cfg.max_trials = args.trials;
  cfg.num_games = args.games;
  cfg.speed_bonus = args.speed_bonus;
  cfg.method = ctop::generation_method_from_string(args.method);
  cfg.seed = args.seed;
  cfg.deterministic_timing = args.deterministic_timing;
  cfg.suite = make_suite(args.suite);

  const ctop::TuneResult result = ctop::tune(cfg);
  ctop::save_json(args.out, ctop::tune_result_to_json(result, cfg.method));
  if (!args.params_out.empty()) {
    ctop::save_params(args.params_out, ctop::to_ga_params(result.best, cfg.method));
  }
  std::cout << "best configuration: population " << result.best.population_size
            << ", generations " << result.best.max_generations << ", tournament "
            << result.best.tournament_size << ", cx " << result.best.cx_probability
            << ", mutation " << result.best.mutation_probability << ", elite "
            << result.best.elite_fraction << " (rating "
            << result.best_state.rating << ") -> " << args.out << '\n';
  return 0;
}

int run_plot(const PlotArgs& args) {
  const ctop::ProblemInstance inst = ctop::load_instance(args.instance);
  const ctop::json sj = ctop::load_json(args.solution);
  ctop::TeamSolution sol;
  try {
    sol = ctop::solution_from_json(sj);
  } catch (const ctop::json::exception& e) {
    throw std::runtime_error("bad solution file " + args.solution + ": " + e.what());
  }
  for (const auto& path : sol.paths) {
    for (const int v : path) {
      if (v < 0 || v >= inst.size()) {
        throw std::runtime_error("solution references vertex " + std::to_string(v) +
                                 " outside the instance");
      }
    }
  }
  const double wall = sj.contains("wall_time_s")
                          ? sj.at("wall_time_s").get<double>()
                          : 0.0;
  write_text(args.out, ctop::render_solution_svg(inst, sol, wall));
  std::cout << "wrote " << args.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"correlated team orienteering: instances, solvers, benchmarks"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a grid instance file");
  gen_cmd->add_option("--rows", gen.rows, "grid rows")->required();
  gen_cmd->add_option("--cols", gen.cols, "grid columns")->required();
  gen_cmd->add_option("--spacing", gen.spacing, "grid spacing");
  gen_cmd->add_option("--noise", gen.noise, "uniform position noise amplitude");
  gen_cmd->add_option("--kernel-length", gen.kernel_length, "kernel length scale");
  gen_cmd->add_option("--radius", gen.radius,
                      "correlation neighbourhood radius (0 = 1.5 * spacing)");
  gen_cmd->add_option("--kernel-form", gen.kernel_form,
                      "kernel distance form: absolute or squared");
  gen_cmd->add_option("--seed", gen.seed, "noise seed");
  gen_cmd->add_option("-o,--out", gen.out, "output instance file")->required();

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run the genetic solver");
  solve_cmd->add_option("-i,--instance", solve_args.instance, "instance file")
      ->required();
  solve_cmd->add_option("--robots", solve_args.robots, "team size");
  solve_cmd->add_option("--budget-frac", solve_args.budget_frac,
                        "fraction of the full divided budget");
  CLI::Option* solve_method =
      solve_cmd->add_option("--method", solve_args.method, "random or nnrasp");
  solve_cmd->add_option("--params", solve_args.params, "solver params file");
  CLI::Option* solve_seed =
      solve_cmd->add_option("--seed", solve_args.seed, "solver seed");
  solve_cmd->add_option("-o,--out", solve_args.out,
                        "output solution file (default: stdout)");

  OracleArgs oracle;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "run the exact branch-and-bound baseline");
  oracle_cmd->add_option("-i,--instance", oracle.instance, "instance file")
      ->required();
  oracle_cmd->add_option("--robots", oracle.robots, "team size");
  oracle_cmd->add_option("--budget-frac", oracle.budget_frac,
                         "fraction of the full divided budget");
  oracle_cmd->add_option("--gap", oracle.gap,
                         "stop once the incumbent is within this fraction of the bound");
  oracle_cmd->add_option("--node-limit", oracle.node_limit,
                         "stop after this many search nodes (0 = off)");
  oracle_cmd->add_option("--time-limit", oracle.time_limit_s,
                         "stop after this many seconds (0 = off)");
  oracle_cmd->add_flag("--force", oracle.force,
                       "run even on instances with many sampling vertices");
  oracle_cmd->add_option("-o,--out", oracle.out,
                         "output solution file (default: stdout)");

  BenchArgs bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "sweep benchmark, CSV output");
  bench_cmd->add_option("-i,--instance", bench.instance, "instance file")
      ->required();
  bench_cmd->add_option("--sweep", bench.sweep, "robots or budget");
  bench_cmd->add_option("--runs", bench.runs, "seeds per cell");
  bench_cmd
      ->add_option("--methods", bench.methods,
                   "methods: ga-random, ga-nnrasp, oracle")
      ->delimiter(',');
  bench_cmd->add_option("--seed", bench.seed, "base seed");
  bench_cmd->add_option("--gap", bench.gap, "oracle stopping gap");
  bench_cmd->add_option("--threads", bench.threads,
                        "worker cap (0 = CTOP_THREADS or machine parallelism)");
  bench_cmd->add_option("--scenario", bench.scenario,
                        "scenario label (default: instance file stem)");
  bench_cmd->add_flag("--force", bench.force,
                      "allow oracle runs on large instances");
  bench_cmd->add_option("-o,--out", bench.out, "output CSV file (default: stdout)");

  TuneArgs tune_args;
  CLI::App* tune_cmd =
      app.add_subcommand("tune", "evolve solver parameters by rated self-play");
  tune_cmd->add_option("--method", tune_args.method, "random or nnrasp");
  tune_cmd->add_option("--suite", tune_args.suite,
                       "problem suite: smoke, desk, or paper");
  tune_cmd->add_option("--population", tune_args.population,
                       "configurations per trial");
  tune_cmd->add_option("--trials", tune_args.trials, "tuning rounds");
  tune_cmd->add_option("--games", tune_args.games, "games per problem");
  tune_cmd->add_option("--speed-bonus", tune_args.speed_bonus,
                       "score bonus for the faster of two equal solutions");
  tune_cmd->add_option("--seed", tune_args.seed, "master seed");
  tune_cmd->add_flag("--deterministic-timing", tune_args.deterministic_timing,
                     "judge speed by evaluation counts for reproducible runs");
  tune_cmd->add_option("-o,--out", tune_args.out, "report file");
  tune_cmd->add_option("--params-out", tune_args.params_out,
                       "also write the best configuration as a params file");

  PlotArgs plot;
  CLI::App* plot_cmd = app.add_subcommand("plot", "render a solution to SVG");
  plot_cmd->add_option("-i,--instance", plot.instance, "instance file")->required();
  plot_cmd->add_option("-s,--solution", plot.solution, "solution file")->required();
  plot_cmd->add_option("-o,--out", plot.out, "output SVG file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen);
    if (solve_cmd->parsed()) {
      return run_solve(solve_args, solve_method->count() > 0,
                       solve_seed->count() > 0);
    }
    if (oracle_cmd->parsed()) return run_oracle(oracle);
    if (bench_cmd->parsed()) return run_bench(bench);
    if (tune_cmd->parsed()) return run_tune(tune_args);
    if (plot_cmd->parsed()) return run_plot(plot);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
