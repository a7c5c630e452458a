#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ctop/instance.hpp"
#include "ctop/solution.hpp"

namespace ctop {

enum class GenerationMethod { Random, NNRASP };

inline const char* to_string(GenerationMethod m) {
  return m == GenerationMethod::NNRASP ? "nnrasp" : "random";
}

inline GenerationMethod generation_method_from_string(const std::string& s) {
  if (s == "random") return GenerationMethod::Random;
  if (s == "nnrasp") return GenerationMethod::NNRASP;
  throw std::invalid_argument("unknown generation method: " + s);
}

struct GaParams {
  int population_size = 300;
  int max_generations = 40;
  int tournament_size = 6;
  double cx_probability = 0.7;
  double mutation_probability = 0.6;
  double elite_fraction = 0.19;
  int num_mutations = 10;
  double add_probability = 0.9;
  int stall_generations = 10;
  GenerationMethod generation_method = GenerationMethod::Random;
  std::uint64_t seed = 0;

  void validate() const {
    if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
    if (max_generations < 1) throw std::invalid_argument("max_generations must be >= 1");
    if (tournament_size < 1 || tournament_size > population_size) {
      throw std::invalid_argument("tournament_size must lie in [1, population_size]");
    }
    for (double p : {cx_probability, mutation_probability, elite_fraction, add_probability}) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("probabilities must lie in [0, 1]");
      }
    }
    if (num_mutations < 0) throw std::invalid_argument("num_mutations must be >= 0");
    if (stall_generations < 1) throw std::invalid_argument("stall_generations must be >= 1");
  }

  static GaParams tuned_random() {
    GaParams p;
    p.population_size = 300;
    p.max_generations = 40;
    p.tournament_size = 6;
    p.cx_probability = 0.7;
    p.mutation_probability = 0.6;
    p.elite_fraction = 0.19;
    p.generation_method = GenerationMethod::Random;
    return p;
  }

  static GaParams tuned_nnrasp() {
    GaParams p;
    p.population_size = 250;
    p.max_generations = 50;
    p.tournament_size = 5;
    p.cx_probability = 0.9;
    p.mutation_probability = 0.7;
    p.elite_fraction = 0.03;
    p.generation_method = GenerationMethod::NNRASP;
    return p;
  }
};

namespace detail {

inline double gene_fitness_value(double reward, double cost) {
  if (cost <= 0.0) return 0.0;
  return reward * reward * reward / cost;
}

// Eq.-style contribution of one gene's interior vertices against a team-wide
// visited set: own rewards plus shares collected from unvisited neighbours.
inline double gene_reward(const std::vector<int>& path,
                          const std::vector<char>& team_visited,
                          const ProblemInstance& inst) {
  double reward = 0.0;
  for (std::size_t t = 1; t + 1 < path.size(); ++t) {
    const int i = path[t];
    reward += inst.reward(i);
    const auto& nb = inst.correlation.neighbours(i);
    const auto& w = inst.correlation.weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (!team_visited[static_cast<std::size_t>(nb[k])]) {
        reward += inst.reward(nb[k]) * w[k];
      }
    }
  }
  return reward;
}

inline double standalone_gene_fitness(const Gene& gene, const ProblemInstance& inst) {
  std::vector<char> own(static_cast<std::size_t>(inst.size()), 0);
  for (std::size_t t = 1; t + 1 < gene.path.size(); ++t) {
    own[static_cast<std::size_t>(gene.path[t])] = 1;
  }
  return gene_fitness_value(gene_reward(gene.path, own, inst), gene.cost);
}

// Cost delta of dropping the interior vertex at position t.
inline double removal_saving(const std::vector<int>& path, std::size_t t,
                             const ProblemInstance& inst) {
  const int prev = path[t - 1];
  const int v = path[t];
  const int next = path[t + 1];
  return inst.travel(prev, v) + inst.travel(v, next) + inst.sensing(v) -
         inst.travel(prev, next);
}

// Position of the interior vertex whose removal loses the least utility per
// unit of cost saved, judged against the team visited set.
inline std::size_t min_loss_position(const std::vector<int>& path,
                                     std::vector<char>& team_visited,
                                     const ProblemInstance& inst) {
  std::size_t best_t = 1;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t + 1 < path.size(); ++t) {
    const int v = path[t];
    team_visited[static_cast<std::size_t>(v)] = 0;
    const double lost = marginal_gain(v, team_visited, inst);
    team_visited[static_cast<std::size_t>(v)] = 1;
    const double saved = removal_saving(path, t, inst);
    const double ratio = lost / std::max(saved, 1e-9);
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace detail

// Canonicalizes and scores a chromosome in place: per gene (in index order)
// 2-opt, removal of vertices already claimed by earlier genes, and budget
// repair; then per-gene fitness reward^3/cost against the final team visited
// set. Returns the chromosome fitness (sum of gene fitnesses).
inline double evaluate_chromosome(Chromosome& chrom, const ProblemInstance& inst,
                                  const BudgetSpec& budgets) {
  std::vector<char> team(static_cast<std::size_t>(inst.size()), 0);
  for (std::size_t k = 0; k < chrom.genes.size(); ++k) {
    Gene& gene = chrom.genes[k];
    gene.robot_index = static_cast<int>(k);
    gene.path = two_opt(std::move(gene.path), inst);

    std::vector<int> kept;
    kept.reserve(gene.path.size());
    kept.push_back(inst.start_id);
    for (std::size_t t = 1; t + 1 < gene.path.size(); ++t) {
      const int v = gene.path[t];
      if (!team[static_cast<std::size_t>(v)]) {
        kept.push_back(v);
        team[static_cast<std::size_t>(v)] = 1;
      }
    }
    kept.push_back(inst.finish_id);
    gene.path = std::move(kept);
    gene.cost = path_cost(gene.path, inst);

    // Splicing and 2-opt only shorten metric paths, so this loop is idle on
    // Euclidean instances; it protects explicit non-metric travel matrices.
    const double budget = budgets.budgets[k];
    while (gene.cost > budget + kFeasibilityEps && gene.path.size() > 2) {
      const std::size_t t = detail::min_loss_position(gene.path, team, inst);
      team[static_cast<std::size_t>(gene.path[t])] = 0;
      gene.path.erase(gene.path.begin() + static_cast<std::ptrdiff_t>(t));
      gene.cost = path_cost(gene.path, inst);
    }
  }

  chrom.fitness = 0.0;
  for (Gene& gene : chrom.genes) {
    gene.fitness = detail::gene_fitness_value(detail::gene_reward(gene.path, team, inst),
                                              gene.cost);
    chrom.fitness += gene.fitness;
  }
  chrom.utility = utility_of_set(team, inst);
  return chrom.fitness;
}

// Draws uniformly from `available` and appends while the closed tour stays
// within budget; the first rejected draw ends the walk. `available` is shared
// across the genes of one chromosome and shrinks as vertices are claimed.
inline Gene random_gene(const ProblemInstance& inst, double budget,
                        std::vector<int>& available, std::mt19937_64& rng) {
  Gene gene;
  gene.path.push_back(inst.start_id);
  int last = inst.start_id;
  double open_cost = 0.0;
  while (!available.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, available.size() - 1);
    const std::size_t idx = pick(rng);
    const int v = available[idx];
    const double step = inst.travel(last, v) + inst.sensing(last);
    const double closed =
        open_cost + step + inst.travel(v, inst.finish_id) + inst.sensing(v);
    if (closed > budget + kFeasibilityEps) break;
    open_cost += step;
    gene.path.push_back(v);
    last = v;
    available[idx] = available.back();
    available.pop_back();
  }
  gene.path.push_back(inst.finish_id);
  gene.cost = open_cost + inst.travel(last, inst.finish_id) + inst.sensing(last);
  return gene;
}

// Nearest-neighbour randomised adaptive search: grows the path through free
// neighbours of the current end, sampling each step from a categorical
// distribution that favours candidates far from already-claimed vertices and
// rich in free neighbours. Stops at the first budget-infeasible pick or when
// the path end has no free neighbour.
inline Gene nnrasp_gene(const ProblemInstance& inst, double budget,
                        std::vector<int>& available, std::mt19937_64& rng) {
  std::vector<char> free_flag(static_cast<std::size_t>(inst.size()), 0);
  for (int v : available) free_flag[static_cast<std::size_t>(v)] = 1;

  Gene gene;
  gene.path.push_back(inst.start_id);
  int last = inst.start_id;
  double open_cost = 0.0;

  std::vector<int> claimed;  // sampling vertices no longer free, minus `last`
  for (int v : inst.sampling_ids()) {
    if (!free_flag[static_cast<std::size_t>(v)]) claimed.push_back(v);
  }

  std::vector<int> candidates;
  std::vector<double> weight;
  while (true) {
    const std::vector<int>& nb = (last == inst.start_id)
                                     ? inst.start_neighbours
                                     : inst.correlation.neighbours(last);
    candidates.clear();
    for (int v : nb) {
      if (free_flag[static_cast<std::size_t>(v)]) candidates.push_back(v);
    }
    if (candidates.empty()) break;

    weight.assign(candidates.size(), 1.0);
    double max_dist = 0.0;
    double max_nb = 0.0;
    std::vector<double> dist(candidates.size(), 1.0);
    std::vector<double> richness(candidates.size(), 1.0);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (!claimed.empty()) {
        double d = std::numeric_limits<double>::infinity();
        for (int u : claimed) d = std::min(d, inst.travel(candidates[c], u));
        dist[c] = d;
      }
      max_dist = std::max(max_dist, dist[c]);
      int free_nb = 0;
      for (int j : inst.correlation.neighbours(candidates[c])) {
        if (free_flag[static_cast<std::size_t>(j)]) ++free_nb;
      }
      richness[c] = 1.0 + free_nb;
      max_nb = std::max(max_nb, richness[c]);
    }
    double total = 0.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      weight[c] = (dist[c] / max_dist) * (richness[c] / max_nb);
      total += weight[c];
    }

    std::size_t chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng);
      for (; chosen + 1 < candidates.size(); ++chosen) {
        r -= weight[chosen];
        if (r < 0.0) break;
      }
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      chosen = pick(rng);
    }

    const int v = candidates[chosen];
    const double step = inst.travel(last, v) + inst.sensing(last);
    const double closed =
        open_cost + step + inst.travel(v, inst.finish_id) + inst.sensing(v);
    if (closed > budget + kFeasibilityEps) break;

    open_cost += step;
    gene.path.push_back(v);
    free_flag[static_cast<std::size_t>(v)] = 0;
    available.erase(std::find(available.begin(), available.end(), v));
    if (last != inst.start_id) claimed.push_back(last);
    last = v;
  }
  gene.path.push_back(inst.finish_id);
  gene.cost = open_cost + inst.travel(last, inst.finish_id) + inst.sensing(last);
  return gene;
}

// Elitism plus tournament selection: the top ceil(elite_fraction * N) carry
// over unchanged, the rest are winners of uniform tournaments with
// replacement. The returned population is sorted-by-fitness at the front
// (elites) followed by tournament winners.
inline std::vector<Chromosome> select_population(const std::vector<Chromosome>& pop,
                                                 const GaParams& params,
                                                 std::mt19937_64& rng) {
  std::vector<std::size_t> order(pop.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pop[a].fitness > pop[b].fitness;
  });

  const std::size_t n = pop.size();
  const std::size_t elites = std::min(
      n, static_cast<std::size_t>(
             std::ceil(params.elite_fraction * static_cast<double>(n))));

  std::vector<Chromosome> next;
  next.reserve(n);
  for (std::size_t i = 0; i < elites; ++i) next.push_back(pop[order[i]]);

  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (next.size() < n) {
    std::size_t best = pick(rng);
    for (int t = 1; t < params.tournament_size; ++t) {
      best = std::min(best, pick(rng));  // indices are fitness-sorted ranks
    }
    next.push_back(pop[order[best]]);
  }
  return next;
}

namespace detail {

struct WorkingGene {
  std::vector<int> path;
  double cost = 0.0;
  double fitness = 0.0;
};

inline void refresh_working(std::vector<WorkingGene>& genes, const ProblemInstance& inst) {
  for (WorkingGene& g : genes) {
    g.cost = path_cost(g.path, inst);
    Gene tmp;
    tmp.path = g.path;
    tmp.cost = g.cost;
    g.fitness = standalone_gene_fitness(tmp, inst);
  }
  std::stable_sort(genes.begin(), genes.end(),
                   [](const WorkingGene& a, const WorkingGene& b) {
                     return a.fitness > b.fitness;
                   });
}

inline void strip_vertices(std::vector<WorkingGene>& genes, const std::vector<char>& taken,
                           const ProblemInstance& inst) {
  for (WorkingGene& g : genes) {
    std::vector<int> kept;
    kept.reserve(g.path.size());
    for (int v : g.path) {
      if (inst.is_sampling(v) && taken[static_cast<std::size_t>(v)]) continue;
      kept.push_back(v);
    }
    g.path = std::move(kept);
  }
}

inline Chromosome assemble_child(std::vector<WorkingGene> wp1, std::vector<WorkingGene> wp2,
                                 int num_robots, const ProblemInstance& inst,
                                 const BudgetSpec& budgets, std::mt19937_64& rng) {
  refresh_working(wp1, inst);
  refresh_working(wp2, inst);
  std::uniform_int_distribution<int> coin(0, 1);

  Chromosome child;
  std::vector<char> taken(static_cast<std::size_t>(inst.size()), 0);
  while (static_cast<int>(child.genes.size()) < num_robots) {
    std::vector<WorkingGene>* source = coin(rng) == 0 ? &wp1 : &wp2;
    if (source->empty()) source = source == &wp1 ? &wp2 : &wp1;

    WorkingGene best = std::move(source->front());
    source->erase(source->begin());

    Gene gene;
    gene.robot_index = static_cast<int>(child.genes.size());
    gene.path = std::move(best.path);
    gene.cost = path_cost(gene.path, inst);
    for (std::size_t t = 1; t + 1 < gene.path.size(); ++t) {
      taken[static_cast<std::size_t>(gene.path[t])] = 1;
    }
    child.genes.push_back(std::move(gene));

    strip_vertices(wp1, taken, inst);
    strip_vertices(wp2, taken, inst);
    refresh_working(wp1, inst);
    refresh_working(wp2, inst);
  }
  evaluate_chromosome(child, inst, budgets);
  return child;
}

}  // namespace detail

// Gene-sorting crossover: each child repeatedly draws one of the two parents
// at random, adopts its current best gene, and strips that gene's vertices
// from every remaining parent gene before re-scoring them. An exhausted
// parent defers to the other.
inline std::pair<Chromosome, Chromosome> crossover(const Chromosome& p1,
                                                   const Chromosome& p2,
                                                   const ProblemInstance& inst,
                                                   const BudgetSpec& budgets,
                                                   std::mt19937_64& rng) {
  const int m = budgets.num_robots;
  const auto to_working = [](const Chromosome& p) {
    std::vector<detail::WorkingGene> w;
    w.reserve(p.genes.size());
    for (const Gene& g : p.genes) {
      detail::WorkingGene wg;
      wg.path = g.path;
      w.push_back(std::move(wg));
    }
    return w;
  };
  Chromosome c1 = detail::assemble_child(to_working(p1), to_working(p2), m, inst,
                                         budgets, rng);
  Chromosome c2 = detail::assemble_child(to_working(p1), to_working(p2), m, inst,
                                         budgets, rng);
  return {std::move(c1), std::move(c2)};
}

// Add/swap/remove mutation. Per gene, num_mutations rounds: with probability
// add_probability either swap a visited vertex for a better free neighbour
// (when the gene is nearly saturated, at 95% of its budget) or insert the
// free vertex at its best position; otherwise drop the lowest-value vertex.
inline void mutate(Chromosome& chrom, const ProblemInstance& inst,
                   const BudgetSpec& budgets, const GaParams& params,
                   std::mt19937_64& rng) {
  std::vector<char> team(static_cast<std::size_t>(inst.size()), 0);
  for (const Gene& g : chrom.genes) {
    for (std::size_t t = 1; t + 1 < g.path.size(); ++t) {
      team[static_cast<std::size_t>(g.path[t])] = 1;
    }
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (std::size_t k = 0; k < chrom.genes.size(); ++k) {
    Gene& gene = chrom.genes[k];
    const double budget = budgets.budgets[k];
    for (int round = 0; round < params.num_mutations; ++round) {
      const double u = unit(rng);
      if (u < params.add_probability) {
        if (gene.cost >= 0.95 * budget) {
          // Saturated: try to trade one visited vertex for a free neighbour.
          if (gene.path.size() <= 2) continue;
          std::uniform_int_distribution<std::size_t> pick(1, gene.path.size() - 2);
          const std::size_t t = pick(rng);
          const int v = gene.path[t];
          const int prev = gene.path[t - 1];
          const int next = gene.path[t + 1];
          const double base_fitness = detail::gene_fitness_value(
              detail::gene_reward(gene.path, team, inst), gene.cost);

          int best_w = -1;
          double best_fitness = base_fitness;
          double best_cost = gene.cost;
          for (int w : inst.correlation.neighbours(v)) {
            if (team[static_cast<std::size_t>(w)]) continue;
            const double cost_w = gene.cost - inst.travel(prev, v) -
                                  inst.travel(v, next) - inst.sensing(v) +
                                  inst.travel(prev, w) + inst.travel(w, next) +
                                  inst.sensing(w);
            if (cost_w > budget + kFeasibilityEps) continue;
            gene.path[t] = w;
            team[static_cast<std::size_t>(v)] = 0;
            team[static_cast<std::size_t>(w)] = 1;
            const double fit_w = detail::gene_fitness_value(
                detail::gene_reward(gene.path, team, inst), cost_w);
            gene.path[t] = v;
            team[static_cast<std::size_t>(v)] = 1;
            team[static_cast<std::size_t>(w)] = 0;
            if (fit_w > best_fitness + 1e-12) {
              best_fitness = fit_w;
              best_w = w;
              best_cost = cost_w;
            }
          }
          if (best_w >= 0) {
            team[static_cast<std::size_t>(v)] = 0;
            team[static_cast<std::size_t>(best_w)] = 1;
            gene.path[t] = best_w;
            gene.cost = best_cost;
          }
        } else {
          // Room to grow: insert a uniformly drawn free vertex at the position
          // with the best squared-gain-per-cost score.
          std::vector<int> free_ids;
          for (int v : inst.sampling_ids()) {
            if (!team[static_cast<std::size_t>(v)]) free_ids.push_back(v);
          }
          if (free_ids.empty()) continue;
          std::uniform_int_distribution<std::size_t> pick(0, free_ids.size() - 1);
          const int v = free_ids[pick(rng)];
          const double gain = marginal_gain(v, team, inst);

          double best_score = -1.0;
          std::size_t best_pos = 0;
          double best_cost = 0.0;
          for (std::size_t p = 1; p < gene.path.size(); ++p) {
            const int a = gene.path[p - 1];
            const int b = gene.path[p];
            const double extra = inst.travel(a, v) + inst.travel(v, b) -
                                 inst.travel(a, b) + inst.sensing(v);
            if (gene.cost + extra > budget + kFeasibilityEps) continue;
            const double score = gain * gain / std::max(extra, 1e-9);
            if (score > best_score) {
              best_score = score;
              best_pos = p;
              best_cost = gene.cost + extra;
            }
          }
          if (best_score >= 0.0) {
            gene.path.insert(gene.path.begin() + static_cast<std::ptrdiff_t>(best_pos), v);
            gene.cost = best_cost;
            team[static_cast<std::size_t>(v)] = 1;
          }
        }
      } else {
        if (gene.path.size() <= 2) continue;
        const std::size_t t = detail::min_loss_position(gene.path, team, inst);
        const double saved = detail::removal_saving(gene.path, t, inst);
        team[static_cast<std::size_t>(gene.path[t])] = 0;
        gene.path.erase(gene.path.begin() + static_cast<std::ptrdiff_t>(t));
        gene.cost -= saved;
      }
    }
  }
  evaluate_chromosome(chrom, inst, budgets);
}

struct SolveResult {
  TeamSolution solution;
  int generations_run = 0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  bool infeasible_input = false;
  // Best feasible utility seen after initialization and after each generation.
  std::vector<double> best_utility_history;
  // Number of chromosome evaluations performed; a machine-independent measure
  // of work done.
  std::uint64_t evaluations = 0;
};

// Full GA run. All randomness is drawn from one generator seeded with
// params.seed, in a fixed order: population initialization first, then per
// generation selection, pairing, crossover, and mutation. Results are
// bit-reproducible for a fixed seed.
inline SolveResult solve(const ProblemInstance& inst, const BudgetSpec& budgets,
                         const GaParams& params) {
  params.validate();
  budgets.validate();
  const auto t0 = std::chrono::steady_clock::now();

  SolveResult result;
  result.seed = params.seed;

  const double empty_cost = path_cost({inst.start_id, inst.finish_id}, inst);
  for (double b : budgets.budgets) {
    if (empty_cost > b + kFeasibilityEps) {
      result.solution = empty_team_solution(inst, budgets);
      result.infeasible_input = true;
      result.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return result;
    }
  }

  std::mt19937_64 rng(params.seed);
  const auto generate = params.generation_method == GenerationMethod::NNRASP
                            ? nnrasp_gene
                            : random_gene;

  std::vector<Chromosome> pop;
  pop.reserve(static_cast<std::size_t>(params.population_size));
  for (int i = 0; i < params.population_size; ++i) {
    Chromosome chrom;
    std::vector<int> available = inst.sampling_ids();
    for (int k = 0; k < budgets.num_robots; ++k) {
      Gene gene = generate(inst, budgets.budgets[k], available, rng);
      gene.robot_index = k;
      chrom.genes.push_back(std::move(gene));
    }
    evaluate_chromosome(chrom, inst, budgets);
    ++result.evaluations;
    pop.push_back(std::move(chrom));
  }

  Chromosome hof;
  double hof_utility = -1.0;
  const auto consider = [&](const Chromosome& c) {
    if (c.utility <= hof_utility) return;
    if (!check_feasibility(c.paths(), inst, budgets).feasible) return;
    hof = c;
    hof_utility = c.utility;
  };
  for (const Chromosome& c : pop) consider(c);
  result.best_utility_history.push_back(hof_utility);

  const std::size_t elites = std::min(
      pop.size(), static_cast<std::size_t>(std::ceil(
                      params.elite_fraction * static_cast<double>(pop.size()))));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  int stall = 0;
  double prev_best = hof_utility;
  for (int gen = 0; gen < params.max_generations; ++gen) {
    pop = select_population(pop, params, rng);

    std::vector<std::size_t> order;
    for (std::size_t i = elites; i < pop.size(); ++i) order.push_back(i);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t p = 0; p + 1 < order.size(); p += 2) {
      if (unit(rng) >= params.cx_probability) continue;
      auto children = crossover(pop[order[p]], pop[order[p + 1]], inst, budgets, rng);
      pop[order[p]] = std::move(children.first);
      pop[order[p + 1]] = std::move(children.second);
      result.evaluations += 2;
    }

    for (std::size_t i = elites; i < pop.size(); ++i) {
      if (unit(rng) >= params.mutation_probability) continue;
      mutate(pop[i], inst, budgets, params, rng);
      ++result.evaluations;
    }

    for (const Chromosome& c : pop) consider(c);
    result.best_utility_history.push_back(hof_utility);
    ++result.generations_run;

    if (std::abs(hof_utility - prev_best) < 1e-9) {
      if (++stall >= params.stall_generations) break;
    } else {
      stall = 0;
    }
    prev_best = hof_utility;
  }

  result.solution = hof_utility >= 0.0 ? make_team_solution(hof.paths(), inst, budgets)
                                       : empty_team_solution(inst, budgets);
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace ctop
