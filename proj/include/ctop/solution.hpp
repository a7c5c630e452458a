#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctop/instance.hpp"

namespace ctop {

// Slack used when comparing accumulated float costs against a budget.
inline constexpr double kFeasibilityEps = 1e-9;
// A segment reversal must beat this threshold to count as an improvement.
inline constexpr double kTwoOptEps = 1e-9;

namespace detail {
inline void check_vertex_id(int id, const ProblemInstance& inst) {
  if (id < 0 || id >= inst.size()) {
    throw std::invalid_argument("unknown vertex id " + std::to_string(id));
  }
}
}  // namespace detail

// Total resource usage of a path: for every leg (i, j) the travel cost plus
// the sensing cost of the departed vertex. Depots sense for free, so a path
// [s, v, f] costs c(s,v) + c(v,f) + c_v.
inline double path_cost(const std::vector<int>& path, const ProblemInstance& inst) {
  if (path.size() < 2) {
    throw std::invalid_argument("path must contain at least start and finish");
  }
  double cost = 0.0;
  detail::check_vertex_id(path[0], inst);
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    detail::check_vertex_id(path[t + 1], inst);
    cost += inst.travel(path[t], path[t + 1]) + inst.sensing(path[t]);
  }
  return cost;
}

// Team objective over a visited set: every visited sampling vertex yields its
// reward plus, for each unvisited neighbour j, the discounted share r_j*w_ij.
// `visited` is indexed by vertex id; depot entries are ignored.
inline double utility_of_set(const std::vector<char>& visited, const ProblemInstance& inst) {
  double utility = 0.0;
  for (int i = 0; i < inst.size(); ++i) {
    if (!visited[static_cast<std::size_t>(i)] || !inst.is_sampling(i)) continue;
    utility += inst.reward(i);
    const auto& nb = inst.correlation.neighbours(i);
    const auto& w = inst.correlation.weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (!visited[static_cast<std::size_t>(nb[k])]) {
        utility += inst.reward(nb[k]) * w[k];
      }
    }
  }
  return utility;
}

// Change in team utility if unvisited vertex v were added to `visited`:
// v's own reward, plus the shares v would collect from unvisited neighbours,
// minus the shares visited neighbours currently collect from v.
inline double marginal_gain(int v, const std::vector<char>& visited,
                            const ProblemInstance& inst) {
  double gain = inst.reward(v);
  const auto& nb = inst.correlation.neighbours(v);
  const auto& w = inst.correlation.weights(v);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    const int j = nb[k];
    if (visited[static_cast<std::size_t>(j)]) {
      gain -= inst.reward(v) * inst.correlation.weight(j, v);
    } else {
      gain += inst.reward(j) * w[k];
    }
  }
  return gain;
}

inline std::vector<char> visited_flags(const std::vector<std::vector<int>>& paths,
                                       const ProblemInstance& inst,
                                       bool throw_on_duplicate) {
  std::vector<char> visited(static_cast<std::size_t>(inst.size()), 0);
  for (const auto& path : paths) {
    for (int id : path) {
      detail::check_vertex_id(id, inst);
      if (!inst.is_sampling(id)) continue;
      if (visited[static_cast<std::size_t>(id)] && throw_on_duplicate) {
        throw std::invalid_argument("vertex " + std::to_string(id) +
                                    " visited more than once");
      }
      visited[static_cast<std::size_t>(id)] = 1;
    }
  }
  return visited;
}

// Objective value of a team of duplicate-free paths.
inline double team_utility(const std::vector<std::vector<int>>& paths,
                           const ProblemInstance& inst) {
  return utility_of_set(visited_flags(paths, inst, /*throw_on_duplicate=*/true), inst);
}

struct FeasibilityReport {
  bool feasible = false;
  std::vector<std::string> violations;
};

// Verifies endpoints, at-most-once visits across the team, and per-robot
// budgets. Violations are reported as data, never thrown. Single-tour
// structure is guaranteed by the path representation itself; the duplicate
// scan below still catches repeated interior vertices.
inline FeasibilityReport check_feasibility(const std::vector<std::vector<int>>& paths,
                                           const ProblemInstance& inst,
                                           const BudgetSpec& budgets) {
  FeasibilityReport report;
  if (static_cast<int>(paths.size()) != budgets.num_robots) {
    report.violations.push_back("team-size");
  }
  std::vector<int> visit_count(static_cast<std::size_t>(inst.size()), 0);
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const auto& path = paths[k];
    bool ids_ok = true;
    for (int id : path) {
      if (id < 0 || id >= inst.size()) {
        report.violations.push_back("unknown-vertex(" + std::to_string(id) + ")");
        ids_ok = false;
      }
    }
    if (!ids_ok) continue;
    if (path.size() < 2 || path.front() != inst.start_id || path.back() != inst.finish_id) {
      report.violations.push_back("endpoints(" + std::to_string(k) + ")");
    }
    for (std::size_t t = 1; t + 1 < path.size(); ++t) {
      if (!inst.is_sampling(path[t])) {
        report.violations.push_back("interior-depot(" + std::to_string(k) + ")");
      } else {
        ++visit_count[static_cast<std::size_t>(path[t])];
      }
    }
    if (path.size() >= 2 && k < budgets.budgets.size()) {
      const double cost = path_cost(path, inst);
      if (cost > budgets.budgets[k] + kFeasibilityEps) {
        report.violations.push_back("budget(" + std::to_string(k) + ")");
      }
    }
  }
  for (int id = 0; id < inst.size(); ++id) {
    if (visit_count[static_cast<std::size_t>(id)] > 1) {
      report.violations.push_back("duplicate-visit(" + std::to_string(id) + ")");
    }
  }
  report.feasible = report.violations.empty();
  return report;
}

// First-improvement 2-opt: scans interior index pairs (a, b) in lexicographic
// order, reverses path[a..b] whenever that strictly shortens the path, and
// restarts until no reversal improves. Endpoints and vertex set are untouched.
inline std::vector<int> two_opt(std::vector<int> path, const ProblemInstance& inst) {
  if (path.size() < 2 || path.front() != inst.start_id || path.back() != inst.finish_id) {
    throw std::invalid_argument("two_opt expects a start..finish path");
  }
  const int n = static_cast<int>(path.size());
  if (n < 4) return path;
  bool improved = true;
  while (improved) {
    improved = false;
    for (int a = 1; a <= n - 3 && !improved; ++a) {
      for (int b = a + 1; b <= n - 2 && !improved; ++b) {
        const double delta = inst.travel(path[static_cast<std::size_t>(a - 1)],
                                         path[static_cast<std::size_t>(b)]) +
                             inst.travel(path[static_cast<std::size_t>(a)],
                                         path[static_cast<std::size_t>(b + 1)]) -
                             inst.travel(path[static_cast<std::size_t>(a - 1)],
                                         path[static_cast<std::size_t>(a)]) -
                             inst.travel(path[static_cast<std::size_t>(b)],
                                         path[static_cast<std::size_t>(b + 1)]);
        if (delta < -kTwoOptEps) {
          std::reverse(path.begin() + a, path.begin() + b + 1);
          improved = true;
        }
      }
    }
  }
  return path;
}

// One robot path in the GA encoding, with cached cost and fitness.
struct Gene {
  int robot_index = 0;
  std::vector<int> path;  // begins at start_id, ends at finish_id
  double cost = 0.0;
  double fitness = 0.0;

  int interior_count() const {
    return std::max(0, static_cast<int>(path.size()) - 2);
  }
};

inline Gene make_empty_gene(int robot_index, const ProblemInstance& inst) {
  Gene gene;
  gene.robot_index = robot_index;
  gene.path = {inst.start_id, inst.finish_id};
  gene.cost = path_cost(gene.path, inst);
  gene.fitness = 0.0;
  return gene;
}

// A candidate team solution: one gene per robot.
struct Chromosome {
  std::vector<Gene> genes;
  double fitness = 0.0;
  double utility = 0.0;

  std::vector<std::vector<int>> paths() const {
    std::vector<std::vector<int>> out;
    out.reserve(genes.size());
    for (const Gene& g : genes) out.push_back(g.path);
    return out;
  }
};

// Validated final output of a solver.
struct TeamSolution {
  std::vector<std::vector<int>> paths;
  double utility = 0.0;
  std::vector<double> per_robot_cost;
  bool feasible = false;
  std::vector<std::string> violations;
};

inline TeamSolution make_team_solution(const std::vector<std::vector<int>>& paths,
                                       const ProblemInstance& inst,
                                       const BudgetSpec& budgets) {
  TeamSolution sol;
  sol.paths = paths;
  sol.utility = utility_of_set(visited_flags(paths, inst, /*throw_on_duplicate=*/false), inst);
  sol.per_robot_cost.reserve(paths.size());
  for (const auto& path : paths) sol.per_robot_cost.push_back(path_cost(path, inst));
  FeasibilityReport report = check_feasibility(paths, inst, budgets);
  sol.feasible = report.feasible;
  sol.violations = std::move(report.violations);
  return sol;
}

inline TeamSolution empty_team_solution(const ProblemInstance& inst, const BudgetSpec& budgets) {
  std::vector<std::vector<int>> paths(static_cast<std::size_t>(budgets.num_robots),
                                      {inst.start_id, inst.finish_id});
  return make_team_solution(paths, inst, budgets);
}

}  // namespace ctop
