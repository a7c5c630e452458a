#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "ctop/budget.hpp"
#include "ctop/ga.hpp"
#include "ctop/glicko2.hpp"
#include "ctop/instance.hpp"

namespace ctop {

// Value grids the tuner draws from. Every chromosome knob stays on its grid
// for the whole run, so tuned outputs are always directly usable presets.
namespace grids {

inline const std::vector<int>& population_sizes() {
  static const std::vector<int> g = [] {
    std::vector<int> v;
    for (int x = 25; x <= 500; x += 25) v.push_back(x);
    return v;
  }();
  return g;
}

inline const std::vector<int>& generation_counts() {
  static const std::vector<int> g = [] {
    std::vector<int> v;
    for (int x = 5; x <= 50; x += 5) v.push_back(x);
    return v;
  }();
  return g;
}

inline const std::vector<int>& tournament_sizes() {
  static const std::vector<int> g = {3, 4, 5, 6, 7, 8, 9, 10};
  return g;
}

inline const std::vector<double>& operator_probabilities() {
  static const std::vector<double> g = [] {
    std::vector<double> v;
    for (int k = 0; k <= 9; ++k) v.push_back(k / 10.0);
    return v;
  }();
  return g;
}

inline const std::vector<double>& elite_fractions() {
  static const std::vector<double> g = [] {
    std::vector<double> v;
    for (int k = 1; k <= 20; ++k) v.push_back(k / 100.0);
    return v;
  }();
  return g;
}

}  // namespace grids

// The six solver knobs the tuner searches over.
struct ParamChromosome {
  int population_size = 100;
  int max_generations = 25;
  int tournament_size = 5;
  double cx_probability = 0.5;
  double mutation_probability = 0.5;
  double elite_fraction = 0.05;
};

inline bool operator==(const ParamChromosome& a, const ParamChromosome& b) {
  return a.population_size == b.population_size &&
         a.max_generations == b.max_generations &&
         a.tournament_size == b.tournament_size &&
         a.cx_probability == b.cx_probability &&
         a.mutation_probability == b.mutation_probability &&
         a.elite_fraction == b.elite_fraction;
}

inline bool operator!=(const ParamChromosome& a, const ParamChromosome& b) {
  return !(a == b);
}

namespace tuner_detail {

template <typename T>
bool on_grid(const std::vector<T>& grid, T value) {
  for (T g : grid) {
    if constexpr (std::is_floating_point_v<T>) {
      if (std::abs(g - value) <= 1e-9) return true;
    } else {
      if (g == value) return true;
    }
  }
  return false;
}

template <typename T>
T draw(const std::vector<T>& grid, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  return grid[pick(rng)];
}

}  // namespace tuner_detail

inline bool is_on_grids(const ParamChromosome& c) {
  using tuner_detail::on_grid;
  return on_grid(grids::population_sizes(), c.population_size) &&
         on_grid(grids::generation_counts(), c.max_generations) &&
         on_grid(grids::tournament_sizes(), c.tournament_size) &&
         on_grid(grids::operator_probabilities(), c.cx_probability) &&
         on_grid(grids::operator_probabilities(), c.mutation_probability) &&
         on_grid(grids::elite_fractions(), c.elite_fraction);
}

inline ParamChromosome random_param_chromosome(std::mt19937_64& rng) {
  using tuner_detail::draw;
  ParamChromosome c;
  c.population_size = draw(grids::population_sizes(), rng);
  c.max_generations = draw(grids::generation_counts(), rng);
  c.tournament_size = draw(grids::tournament_sizes(), rng);
  c.cx_probability = draw(grids::operator_probabilities(), rng);
  c.mutation_probability = draw(grids::operator_probabilities(), rng);
  c.elite_fraction = draw(grids::elite_fractions(), rng);
  return c;
}

// Rewrites one uniformly chosen knob with a fresh draw from its grid.
inline void mutate_one_knob(ParamChromosome& c, std::mt19937_64& rng) {
  using tuner_detail::draw;
  std::uniform_int_distribution<int> pick(0, 5);
  switch (pick(rng)) {
    case 0: c.population_size = draw(grids::population_sizes(), rng); break;
    case 1: c.max_generations = draw(grids::generation_counts(), rng); break;
    case 2: c.tournament_size = draw(grids::tournament_sizes(), rng); break;
    case 3: c.cx_probability = draw(grids::operator_probabilities(), rng); break;
    case 4: c.mutation_probability = draw(grids::operator_probabilities(), rng); break;
    default: c.elite_fraction = draw(grids::elite_fractions(), rng); break;
  }
}

inline GaParams to_ga_params(const ParamChromosome& c, GenerationMethod method,
                             std::uint64_t seed = 0) {
  GaParams p;
  p.population_size = c.population_size;
  p.max_generations = c.max_generations;
  p.tournament_size = c.tournament_size;
  p.cx_probability = c.cx_probability;
  p.mutation_probability = c.mutation_probability;
  p.elite_fraction = c.elite_fraction;
  p.generation_method = method;
  p.seed = seed;
  return p;
}

// One benchmark problem the configurations compete on.
struct TunerProblem {
  ProblemInstance instance;
  int robots = 1;
  double budget_fraction = 1.0;
  BudgetSpec budgets;
};

inline TunerProblem make_tuner_problem(ProblemInstance inst, int robots,
                                       double budget_fraction) {
  TunerProblem p;
  p.budgets = budget_for_team(inst, robots, budget_fraction);
  p.instance = std::move(inst);
  p.robots = robots;
  p.budget_fraction = budget_fraction;
  return p;
}

struct TunerConfig {
  int population = 100;
  int max_trials = 10;
  int num_games = 10;
  double speed_bonus = 0.1;
  double parent_uniform_cx_prob = 0.5;
  double parent_mutation_prob = 0.8;
  double tau = 0.5;
  GenerationMethod method = GenerationMethod::Random;
  std::uint64_t seed = 0;
  // When set, game speed is judged by the solver's evaluation counter instead
  // of wall time, which makes whole tuning runs bit-reproducible.
  bool deterministic_timing = false;
  std::vector<TunerProblem> suite;

  void validate() const {
    if (population < 2) throw std::invalid_argument("tuner population must be >= 2");
    if (max_trials < 1) throw std::invalid_argument("max_trials must be >= 1");
    if (num_games < 1) throw std::invalid_argument("num_games must be >= 1");
    for (double p : {parent_uniform_cx_prob, parent_mutation_prob}) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("tuner probabilities must lie in [0, 1]");
      }
    }
    if (!(speed_bonus >= 0.0 && speed_bonus <= 0.5)) {
      throw std::invalid_argument("speed_bonus must lie in [0, 0.5]");
    }
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (suite.empty()) throw std::invalid_argument("problem suite must not be empty");
    for (const TunerProblem& p : suite) {
      if (p.robots < 1) throw std::invalid_argument("problem robots must be >= 1");
      if (!(p.budget_fraction > 0.0 && p.budget_fraction <= 1.0)) {
        throw std::invalid_argument("problem budget fraction must lie in (0, 1]");
      }
      p.budgets.validate();
    }
  }
};

// Outcome of one GA run inside a tuning game.
struct GameCell {
  double utility = 0.0;
  double time = 0.0;
};

// score_table[config][problem * num_games + game]
using ScoreTable = std::vector<std::vector<GameCell>>;

// Runs every configuration num_games times on every suite problem, each game
// with a fresh seed drawn from rng.
inline ScoreTable play_games(const std::vector<ParamChromosome>& configs,
                             const TunerConfig& tcfg, std::mt19937_64& rng) {
  const std::size_t cells = tcfg.suite.size() * static_cast<std::size_t>(tcfg.num_games);
  ScoreTable table(configs.size(), std::vector<GameCell>(cells));
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (std::size_t p = 0; p < tcfg.suite.size(); ++p) {
      const TunerProblem& problem = tcfg.suite[p];
      for (int g = 0; g < tcfg.num_games; ++g) {
        const std::uint64_t seed = rng();
        GameCell& cell = table[c][p * static_cast<std::size_t>(tcfg.num_games) +
                                  static_cast<std::size_t>(g)];
        try {
          const SolveResult run =
              solve(problem.instance, problem.budgets,
                    to_ga_params(configs[c], tcfg.method, seed));
          cell.utility = run.solution.utility;
          cell.time = tcfg.deterministic_timing
                          ? static_cast<double>(run.evaluations)
                          : run.wall_time_s;
        } catch (const std::exception&) {
          cell.utility = 0.0;
          cell.time = 0.0;
        }
      }
    }
  }
  return table;
}

namespace tuner_detail {

constexpr double kUtilityDrawTol = 1e-9;

// Game score of the first player against the second: win/draw/loss base plus
// a speed bonus for the faster run, clamped to the legal score range.
inline double pair_score(const GameCell& mine, const GameCell& theirs,
                         double speed_bonus) {
  double s;
  if (std::abs(mine.utility - theirs.utility) <= kUtilityDrawTol) {
    s = 0.5;
  } else {
    s = mine.utility > theirs.utility ? 1.0 : 0.0;
  }
  if (mine.time < theirs.time) {
    s += speed_bonus;
  } else if (mine.time > theirs.time) {
    s -= speed_bonus;
  }
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace tuner_detail

// One rating period: every configuration plays every other on every recorded
// cell, and all results feed a single Glicko-2 update per configuration.
// Opponent ratings are taken from the start of the period.
inline std::vector<Glicko2State> rate_configurations(
    const ScoreTable& table, const std::vector<Glicko2State>& states,
    const TunerConfig& tcfg) {
  if (table.size() != states.size()) {
    throw std::invalid_argument("score table and rating list sizes differ");
  }
  std::vector<Glicko2State> updated(states.size());
  for (std::size_t a = 0; a < table.size(); ++a) {
    std::vector<GameResult> games;
    games.reserve((table.size() - 1) * table[a].size());
    for (std::size_t b = 0; b < table.size(); ++b) {
      if (b == a) continue;
      for (std::size_t cell = 0; cell < table[a].size(); ++cell) {
        games.push_back({states[b].rating, states[b].deviation,
                         tuner_detail::pair_score(table[a][cell], table[b][cell],
                                                  tcfg.speed_bonus)});
      }
    }
    updated[a] = glicko2_update(states[a], games, tcfg.tau, 1e-6);
  }
  return updated;
}

// Indices of the parent set, best rating first: the top ten configurations
// plus everyone whose two-deviation rating interval overlaps the tenth
// best's, capped at half the population.
inline std::vector<std::size_t> select_parents(
    const std::vector<Glicko2State>& states, int population) {
  std::vector<std::size_t> order(states.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return states[a].rating > states[b].rating;
  });

  const std::size_t top = std::min<std::size_t>(10, order.size());
  const std::size_t cap = std::max<std::size_t>(
      1, static_cast<std::size_t>(population) / 2);

  const Glicko2State& ref = states[order[top - 1]];
  const double ref_lo = ref.rating - 2.0 * ref.deviation;
  const double ref_hi = ref.rating + 2.0 * ref.deviation;

  std::vector<std::size_t> parents;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k < top) {
      parents.push_back(order[k]);
      continue;
    }
    const Glicko2State& s = states[order[k]];
    if (s.rating - 2.0 * s.deviation <= ref_hi &&
        s.rating + 2.0 * s.deviation >= ref_lo) {
      parents.push_back(order[k]);
    }
  }
  if (parents.size() > cap) parents.resize(cap);
  return parents;
}

// A configuration together with its rating, as carried between trials.
struct RatedConfig {
  ParamChromosome chromosome;
  Glicko2State state;
};

// Builds the next population: parents carry over unchanged (ratings
// included); each remaining slot mixes two random parents with per-knob
// uniform crossover or clones one, then may rewrite a single knob. Children
// start from a fresh rating.
inline std::vector<RatedConfig> next_generation(
    const std::vector<RatedConfig>& parents, int population_size,
    const TunerConfig& tcfg, std::mt19937_64& rng) {
  if (parents.empty()) throw std::invalid_argument("parent set must not be empty");
  std::vector<RatedConfig> next = parents;
  if (next.size() > static_cast<std::size_t>(population_size)) {
    next.resize(static_cast<std::size_t>(population_size));
  }
  std::uniform_int_distribution<std::size_t> pick(0, parents.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (next.size() < static_cast<std::size_t>(population_size)) {
    const ParamChromosome& a = parents[pick(rng)].chromosome;
    const ParamChromosome& b = parents[pick(rng)].chromosome;
    ParamChromosome child = a;
    if (unit(rng) < tcfg.parent_uniform_cx_prob) {
      child.population_size = unit(rng) < 0.5 ? a.population_size : b.population_size;
      child.max_generations = unit(rng) < 0.5 ? a.max_generations : b.max_generations;
      child.tournament_size = unit(rng) < 0.5 ? a.tournament_size : b.tournament_size;
      child.cx_probability = unit(rng) < 0.5 ? a.cx_probability : b.cx_probability;
      child.mutation_probability =
          unit(rng) < 0.5 ? a.mutation_probability : b.mutation_probability;
      child.elite_fraction = unit(rng) < 0.5 ? a.elite_fraction : b.elite_fraction;
    }
    if (unit(rng) < tcfg.parent_mutation_prob) {
      mutate_one_knob(child, rng);
    }
    next.push_back({child, Glicko2State{}});
  }
  return next;
}

struct TuneResult {
  ParamChromosome best;
  Glicko2State best_state;
  // Population of each trial after rating, best first.
  std::vector<std::vector<RatedConfig>> trials;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
};

inline TuneResult tune(const TunerConfig& tcfg) {
  tcfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(tcfg.seed);

  std::vector<RatedConfig> population;
  population.reserve(static_cast<std::size_t>(tcfg.population));
  for (int i = 0; i < tcfg.population; ++i) {
    population.push_back({random_param_chromosome(rng), Glicko2State{}});
  }

  TuneResult result;
  result.seed = tcfg.seed;
  for (int trial = 0; trial < tcfg.max_trials; ++trial) {
    std::vector<ParamChromosome> configs;
    std::vector<Glicko2State> states;
    configs.reserve(population.size());
    states.reserve(population.size());
    for (const RatedConfig& rc : population) {
      configs.push_back(rc.chromosome);
      states.push_back(rc.state);
    }

    const ScoreTable table = play_games(configs, tcfg, rng);
    states = rate_configurations(table, states, tcfg);
    for (std::size_t i = 0; i < population.size(); ++i) {
      population[i].state = states[i];
    }

    std::vector<RatedConfig> ranked = population;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RatedConfig& a, const RatedConfig& b) {
                       return a.state.rating > b.state.rating;
                     });
    result.trials.push_back(ranked);

    if (trial + 1 < tcfg.max_trials) {
      const std::vector<std::size_t> parent_ids =
          select_parents(states, tcfg.population);
      std::vector<RatedConfig> parents;
      parents.reserve(parent_ids.size());
      for (std::size_t id : parent_ids) parents.push_back(population[id]);
      population = next_generation(parents, tcfg.population, tcfg, rng);
    }
  }

  result.best = result.trials.back().front().chromosome;
  result.best_state = result.trials.back().front().state;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace ctop
