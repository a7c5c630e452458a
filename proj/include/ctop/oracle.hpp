#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ctop/instance.hpp"
#include "ctop/solution.hpp"

namespace ctop {

struct OracleConfig {
  // Stop once incumbent >= (1 - gap) * root upper bound.
  double gap = 0.0;
  // 0 disables the respective limit.
  std::uint64_t node_limit = 0;
  double time_limit_s = 0.0;

  void validate() const {
    if (!(gap >= 0.0 && gap < 1.0)) {
      throw std::invalid_argument("gap must lie in [0, 1)");
    }
    if (time_limit_s < 0.0) {
      throw std::invalid_argument("time limit must be nonnegative");
    }
  }
};

struct OracleResult {
  TeamSolution solution;
  double bound = 0.0;       // upper bound on the optimal utility at termination
  double proven_gap = 0.0;  // (bound - utility) / bound, 0 when bound is 0
  std::uint64_t nodes_expanded = 0;
  double wall_time_s = 0.0;
  bool limit_hit = false;  // node or time limit exhausted the search
};

namespace detail {

class ExactSearch {
 public:
  ExactSearch(const ProblemInstance& inst, const BudgetSpec& budgets,
              const OracleConfig& config)
      : inst_(inst), budgets_(budgets), config_(config) {
    const int n = inst.size();
    visited_.assign(static_cast<std::size_t>(n), 0);

    // Lower bound on the cost of returning to the finish from each vertex,
    // where entering a vertex pays its sensing cost. Shortest paths through
    // other sampling vertices cover explicit travel matrices where a detour
    // undercuts the direct leg; on Euclidean instances this equals the
    // straight-line distance to the finish.
    closure_.assign(static_cast<std::size_t>(n),
                    std::numeric_limits<double>::infinity());
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    closure_[static_cast<std::size_t>(inst.finish_id)] = 0.0;
    for (int round = 0; round < n; ++round) {
      int best = -1;
      for (int i = 0; i < n; ++i) {
        if (done[static_cast<std::size_t>(i)]) continue;
        if (best < 0 || closure_[static_cast<std::size_t>(i)] <
                            closure_[static_cast<std::size_t>(best)]) {
          best = i;
        }
      }
      if (best < 0 || std::isinf(closure_[static_cast<std::size_t>(best)])) break;
      done[static_cast<std::size_t>(best)] = 1;
      for (int v : inst.sampling_ids()) {
        if (done[static_cast<std::size_t>(v)]) continue;
        // Sensing is charged on arrival, so the hop v -> best costs the
        // travel leg plus best's sensing (zero when best is the finish).
        const double hop = inst.travel(v, best) +
                           (best == inst.finish_id ? 0.0 : inst.sensing(best));
        if (closure_[static_cast<std::size_t>(v)] >
            closure_[static_cast<std::size_t>(best)] + hop) {
          closure_[static_cast<std::size_t>(v)] =
              closure_[static_cast<std::size_t>(best)] + hop;
        }
      }
    }

    // Most a single visit can ever add: its reward plus every neighbour share.
    bonus_.assign(static_cast<std::size_t>(n), 0.0);
    for (int v : inst.sampling_ids()) {
      double b = inst.reward(v);
      const auto& nb = inst.correlation.neighbours(v);
      const auto& w = inst.correlation.weights(v);
      for (std::size_t k = 0; k < nb.size(); ++k) b += inst.reward(nb[k]) * w[k];
      bonus_[static_cast<std::size_t>(v)] = b;
    }
  }

  OracleResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    t0_ = t0;
    OracleResult result;

    const double empty_cost =
        path_cost({inst_.start_id, inst_.finish_id}, inst_);
    for (double b : budgets_.budgets) {
      if (empty_cost > b + kFeasibilityEps) {
        result.solution = empty_team_solution(inst_, budgets_);
        result.wall_time_s = elapsed();
        return result;
      }
    }

    incumbent_paths_.assign(static_cast<std::size_t>(budgets_.num_robots),
                            {inst_.start_id, inst_.finish_id});
    incumbent_utility_ = 0.0;
    utility_ = 0.0;

    paths_.assign(static_cast<std::size_t>(budgets_.num_robots),
                  {inst_.start_id});
    first_vertex_.assign(static_cast<std::size_t>(budgets_.num_robots), -1);

    root_bound_ = optimistic_bound(0, inst_.start_id,
                                   budgets_.budgets[0]);
    search(0, inst_.start_id, budgets_.budgets[0]);

    result.nodes_expanded = nodes_;
    result.limit_hit = limit_hit_;
    // A completed search certifies the incumbent; an interrupted one only has
    // the root bound.
    result.bound = (stop_ || limit_hit_) ? root_bound_ : incumbent_utility_;
    result.proven_gap =
        result.bound > 0.0
            ? (result.bound - incumbent_utility_) / result.bound
            : 0.0;
    if (result.proven_gap < 0.0) result.proven_gap = 0.0;

    std::vector<std::vector<int>> full = incumbent_paths_;
    result.solution = make_team_solution(full, inst_, budgets_);
    result.wall_time_s = elapsed();
    return result;
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

  // current utility plus the reward-and-full-bonus of every free vertex still
  // reachable by the active robot or any later one.
  double optimistic_bound(int robot, int cur, double remaining) const {
    double rest = 0.0;
    for (int v : inst_.sampling_ids()) {
      if (visited_[static_cast<std::size_t>(v)]) continue;
      const double enter = inst_.sensing(v) + closure_[static_cast<std::size_t>(v)];
      bool reachable =
          inst_.travel(cur, v) + enter <= remaining + kFeasibilityEps;
      for (int k = robot + 1; !reachable && k < budgets_.num_robots; ++k) {
        reachable = inst_.travel(inst_.start_id, v) + enter <=
                    budgets_.budgets[static_cast<std::size_t>(k)] + kFeasibilityEps;
      }
      if (reachable) rest += bonus_[static_cast<std::size_t>(v)];
    }
    return utility_ + rest;
  }

  void search(int robot, int cur, double remaining) {
    if (stop_ || limit_hit_) return;
    ++nodes_;
    if (config_.node_limit > 0 && nodes_ > config_.node_limit) {
      limit_hit_ = true;
      return;
    }
    if (config_.time_limit_s > 0.0 && (nodes_ & 1023u) == 0 &&
        elapsed() > config_.time_limit_s) {
      limit_hit_ = true;
      return;
    }
    if (optimistic_bound(robot, cur, remaining) <=
        incumbent_utility_ + 1e-12) {
      return;
    }

    auto& path = paths_[static_cast<std::size_t>(robot)];
    const bool at_start = path.size() == 1;

    // Identical robots are interchangeable: force the first visited vertex of
    // each robot to exceed that of the previous robot with the same budget
    // (an empty previous robot forbids any visit at all).
    int min_first = -1;
    if (at_start && robot > 0 &&
        budgets_.budgets[static_cast<std::size_t>(robot)] ==
            budgets_.budgets[static_cast<std::size_t>(robot - 1)]) {
      const int prev = first_vertex_[static_cast<std::size_t>(robot - 1)];
      min_first = prev < 0 ? inst_.size() : prev;
    }

    // Extend with each reachable free vertex, most promising first.
    std::vector<Candidate> local;
    for (int v : inst_.sampling_ids()) {
      if (visited_[static_cast<std::size_t>(v)]) continue;
      if (at_start && min_first >= 0 && v <= min_first) continue;
      const double move = inst_.travel(cur, v) + inst_.sensing(v);
      if (move + closure_[static_cast<std::size_t>(v)] >
          remaining + kFeasibilityEps) {
        continue;
      }
      const double gain = marginal_gain(v, visited_, inst_);
      local.push_back({gain / std::max(move, 1e-9), v, move});
    }
    std::stable_sort(local.begin(), local.end(),
                     [](const Candidate& a, const Candidate& b) {
                       if (a.score != b.score) return a.score > b.score;
                       return a.id < b.id;
                     });

    for (const Candidate& c : local) {
      const double gain = marginal_gain(c.id, visited_, inst_);
      utility_ += gain;
      visited_[static_cast<std::size_t>(c.id)] = 1;
      path.push_back(c.id);
      if (at_start) first_vertex_[static_cast<std::size_t>(robot)] = c.id;

      search(robot, c.id, remaining - c.move);

      path.pop_back();
      if (at_start) first_vertex_[static_cast<std::size_t>(robot)] = -1;
      visited_[static_cast<std::size_t>(c.id)] = 0;
      utility_ -= gain;
      if (stop_ || limit_hit_) return;
    }

    // Close this robot and hand over to the next, or record a full solution.
    if (inst_.travel(cur, inst_.finish_id) <= remaining + kFeasibilityEps) {
      if (robot + 1 < budgets_.num_robots) {
        search(robot + 1, inst_.start_id,
               budgets_.budgets[static_cast<std::size_t>(robot + 1)]);
      } else {
        const double exact = utility_of_set(visited_, inst_);
        if (exact > incumbent_utility_ + 1e-12) {
          incumbent_utility_ = exact;
          for (int k = 0; k < budgets_.num_robots; ++k) {
            incumbent_paths_[static_cast<std::size_t>(k)] =
                paths_[static_cast<std::size_t>(k)];
            incumbent_paths_[static_cast<std::size_t>(k)].push_back(inst_.finish_id);
          }
          if (incumbent_utility_ >=
              (1.0 - config_.gap) * root_bound_ - 1e-12) {
            stop_ = true;
          }
        }
      }
    }
  }

  struct Candidate {
    double score;
    int id;
    double move;
  };

  const ProblemInstance& inst_;
  const BudgetSpec& budgets_;
  const OracleConfig& config_;

  std::vector<double> closure_;
  std::vector<double> bonus_;
  std::vector<char> visited_;
  std::vector<std::vector<int>> paths_;
  std::vector<int> first_vertex_;

  double utility_ = 0.0;
  double incumbent_utility_ = 0.0;
  std::vector<std::vector<int>> incumbent_paths_;
  double root_bound_ = 0.0;

  std::uint64_t nodes_ = 0;
  bool stop_ = false;
  bool limit_hit_ = false;
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace detail

// Depth-first exact solver. Enumerates robot paths in canonical order with
// budget, reachability, and utility-bound pruning; intended for instances
// with at most ~16 sampling vertices.
inline OracleResult solve_exact(const ProblemInstance& inst, const BudgetSpec& budgets,
                                const OracleConfig& config = {}) {
  config.validate();
  budgets.validate();
  detail::ExactSearch search(inst, budgets, config);
  return search.run();
}

}  // namespace ctop
