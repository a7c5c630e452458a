#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ctop/budget.hpp"
#include "ctop/ga.hpp"
#include "ctop/instance.hpp"
#include "ctop/oracle.hpp"

namespace ctop {

enum class BenchMethod { GaRandom, GaNNRASP, Oracle };

inline const char* to_string(BenchMethod m) {
  switch (m) {
    case BenchMethod::GaRandom: return "ga-random";
    case BenchMethod::GaNNRASP: return "ga-nnrasp";
    default: return "oracle";
  }
}

inline BenchMethod bench_method_from_string(const std::string& s) {
  if (s == "ga-random") return BenchMethod::GaRandom;
  if (s == "ga-nnrasp") return BenchMethod::GaNNRASP;
  if (s == "oracle") return BenchMethod::Oracle;
  throw std::invalid_argument("unknown benchmark method: " + s);
}

enum class BenchSweep { Robots, Budget };

inline BenchSweep bench_sweep_from_string(const std::string& s) {
  if (s == "robots") return BenchSweep::Robots;
  if (s == "budget") return BenchSweep::Budget;
  throw std::invalid_argument("unknown sweep: " + s);
}

struct BenchCell {
  int robots = 0;
  double budget_fraction = 1.0;
};

// The two experiment protocols: vary the team size under the full divided
// budget, or shrink the budget for a fixed three-robot team.
inline std::vector<BenchCell> sweep_cells(BenchSweep sweep) {
  if (sweep == BenchSweep::Robots) {
    return {{2, 1.0}, {3, 1.0}, {4, 1.0}, {5, 1.0}};
  }
  return {{3, 1.0}, {3, 0.75}, {3, 0.5}, {3, 0.25}};
}

struct BenchmarkRow {
  std::string scenario;
  BenchMethod method = BenchMethod::GaRandom;
  int robots = 0;
  double budget_fraction = 1.0;
  std::uint64_t seed = 0;
  // "mean" or "stddev" on aggregate rows, empty on run rows.
  std::string seed_label;
  double utility = 0.0;
  double wall_time_s = 0.0;
  bool feasible = false;
};

struct BenchConfig {
  std::string scenario = "instance";
  std::vector<BenchMethod> methods = {BenchMethod::GaRandom, BenchMethod::GaNNRASP};
  BenchSweep sweep = BenchSweep::Robots;
  int runs = 1;
  std::uint64_t base_seed = 0;
  double oracle_gap = 0.05;
  // 0 resolves to CTOP_THREADS, then to the machine's parallelism.
  int threads = 0;

  void validate() const {
    if (methods.empty()) throw std::invalid_argument("no benchmark methods given");
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (!(oracle_gap >= 0.0 && oracle_gap < 1.0)) {
      throw std::invalid_argument("oracle gap must lie in [0, 1)");
    }
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  }
};

inline int bench_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CTOP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace bench_detail {

inline BenchmarkRow run_one(const ProblemInstance& inst, const BenchConfig& cfg,
                            BenchMethod method, const BenchCell& cell,
                            const BudgetSpec& budgets, std::uint64_t seed) {
  BenchmarkRow row;
  row.scenario = cfg.scenario;
  row.method = method;
  row.robots = cell.robots;
  row.budget_fraction = cell.budget_fraction;
  row.seed = seed;
  if (method == BenchMethod::Oracle) {
    OracleConfig ocfg;
    ocfg.gap = cfg.oracle_gap;
    const OracleResult res = solve_exact(inst, budgets, ocfg);
    row.utility = res.solution.utility;
    row.wall_time_s = res.wall_time_s;
    row.feasible = res.solution.feasible;
  } else {
    GaParams params = method == BenchMethod::GaRandom ? GaParams::tuned_random()
                                                      : GaParams::tuned_nnrasp();
    params.seed = seed;
    const SolveResult res = solve(inst, budgets, params);
    row.utility = res.solution.utility;
    row.wall_time_s = res.wall_time_s;
    row.feasible = res.solution.feasible;
  }
  return row;
}

inline void append_aggregates(std::vector<BenchmarkRow>& out,
                              const std::vector<BenchmarkRow>& cell_rows) {
  const std::size_t n = cell_rows.size();
  double mean_u = 0.0, mean_t = 0.0;
  bool all_feasible = true;
  for (const BenchmarkRow& r : cell_rows) {
    mean_u += r.utility;
    mean_t += r.wall_time_s;
    all_feasible = all_feasible && r.feasible;
  }
  mean_u /= static_cast<double>(n);
  mean_t /= static_cast<double>(n);
  double var_u = 0.0, var_t = 0.0;
  if (n > 1) {
    for (const BenchmarkRow& r : cell_rows) {
      var_u += (r.utility - mean_u) * (r.utility - mean_u);
      var_t += (r.wall_time_s - mean_t) * (r.wall_time_s - mean_t);
    }
    var_u /= static_cast<double>(n - 1);
    var_t /= static_cast<double>(n - 1);
  }

  BenchmarkRow mean = cell_rows.front();
  mean.seed = 0;
  mean.seed_label = "mean";
  mean.utility = mean_u;
  mean.wall_time_s = mean_t;
  mean.feasible = all_feasible;
  out.push_back(mean);

  BenchmarkRow stddev = mean;
  stddev.seed_label = "stddev";
  stddev.utility = std::sqrt(var_u);
  stddev.wall_time_s = std::sqrt(var_t);
  out.push_back(stddev);
}

}  // namespace bench_detail

// Runs every (method, sweep cell, seed) combination, seeds base_seed + k.
// Run rows come in (method, cell, seed) order, each cell followed by its
// mean and stddev rows. Runs execute concurrently up to the thread cap, but
// the returned order never depends on scheduling.
inline std::vector<BenchmarkRow> run_benchmark(const ProblemInstance& inst,
                                               const BenchConfig& cfg) {
  cfg.validate();
  const std::vector<BenchCell> cells = sweep_cells(cfg.sweep);

  struct Task {
    BenchMethod method;
    BenchCell cell;
    const BudgetSpec* budgets;
    std::uint64_t seed;
  };
  std::vector<BudgetSpec> cell_budgets;
  cell_budgets.reserve(cells.size());
  for (const BenchCell& cell : cells) {
    cell_budgets.push_back(budget_for_team(inst, cell.robots, cell.budget_fraction));
  }
  std::vector<Task> tasks;
  tasks.reserve(cfg.methods.size() * cells.size() * static_cast<std::size_t>(cfg.runs));
  for (const BenchMethod method : cfg.methods) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      for (int k = 0; k < cfg.runs; ++k) {
        tasks.push_back({method, cells[c], &cell_budgets[c],
                         cfg.base_seed + static_cast<std::uint64_t>(k)});
      }
    }
  }

  std::vector<BenchmarkRow> results(tasks.size());
  const int threads = std::min<int>(bench_thread_count(cfg.threads),
                                    static_cast<int>(tasks.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const Task& t = tasks[i];
      results[i] = bench_detail::run_one(inst, cfg, t.method, t.cell, *t.budgets, t.seed);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size();
             i = next.fetch_add(1)) {
          const Task& t = tasks[i];
          results[i] =
              bench_detail::run_one(inst, cfg, t.method, t.cell, *t.budgets, t.seed);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::vector<BenchmarkRow> out;
  out.reserve(results.size() + 2 * cfg.methods.size() * cells.size());
  std::size_t cursor = 0;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::size_t begin = cursor;
      for (int k = 0; k < cfg.runs; ++k) out.push_back(results[cursor++]);
      bench_detail::append_aggregates(
          out, {results.begin() + static_cast<std::ptrdiff_t>(begin),
                results.begin() + static_cast<std::ptrdiff_t>(cursor)});
    }
  }
  return out;
}

inline constexpr const char* kBenchCsvHeader =
    "scenario,method,robots,budget_fraction,seed,utility,wall_time_s,feasible";

inline std::string bench_csv(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << kBenchCsvHeader << '\n';
  for (const BenchmarkRow& row : rows) {
    out << row.scenario << ',' << to_string(row.method) << ',' << row.robots
        << ',' << row.budget_fraction << ',';
    if (row.seed_label.empty()) {
      out << row.seed;
    } else {
      out << row.seed_label;
    }
    out << ',' << row.utility << ',' << row.wall_time_s << ','
        << (row.feasible ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace ctop
