#pragma once

#include <stdexcept>
#include <vector>

#include "ctop/instance.hpp"
#include "ctop/solution.hpp"

namespace ctop {

// Reference budget B for an instance: cost of a single tour that visits every
// sampling vertex, built nearest-neighbour from the start (ties broken by
// lowest id) and then tightened with 2-opt. Budget fractions are taken
// relative to this value.
inline double max_single_robot_budget(const ProblemInstance& inst) {
  std::vector<int> path;
  path.push_back(inst.start_id);
  std::vector<char> used(static_cast<std::size_t>(inst.size()), 0);
  int current = inst.start_id;
  const int remaining_total = inst.num_sampling();
  for (int step = 0; step < remaining_total; ++step) {
    int best = -1;
    double best_dist = 0.0;
    for (int v : inst.sampling_ids()) {
      if (used[static_cast<std::size_t>(v)]) continue;
      const double d = inst.travel(current, v);
      if (best < 0 || d < best_dist - 1e-12 ||
          (d < best_dist + 1e-12 && v < best)) {
        best = v;
        best_dist = d;
      }
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = 1;
    path.push_back(best);
    current = best;
  }
  path.push_back(inst.finish_id);
  path = two_opt(std::move(path), inst);
  return path_cost(path, inst);
}

// Per-robot budgets for a team: an equal share fraction*B/m for each robot.
inline BudgetSpec budget_for_team(const ProblemInstance& inst, int num_robots,
                                  double fraction) {
  if (num_robots <= 0) {
    throw std::invalid_argument("team must contain at least one robot");
  }
  if (!(fraction > 0.0) || !(fraction <= 1.0)) {
    throw std::invalid_argument("budget fraction must lie in (0, 1]");
  }
  const double total = max_single_robot_budget(inst);
  BudgetSpec spec;
  spec.num_robots = num_robots;
  spec.budgets.assign(static_cast<std::size_t>(num_robots),
                      fraction * total / num_robots);
  spec.validate();
  return spec;
}

}  // namespace ctop
