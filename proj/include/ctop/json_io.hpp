#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ctop/ga.hpp"
#include "ctop/instance.hpp"
#include "ctop/oracle.hpp"
#include "ctop/solution.hpp"
#include "ctop/tuner.hpp"

namespace ctop {

using nlohmann::json;

// ---------------------------------------------------------------------------
// file helpers

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("cannot parse " + path + ": " + e.what());
  }
  return j;
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

// ---------------------------------------------------------------------------
// instance

inline json instance_to_json(const ProblemInstance& inst) {
  json j;
  j["vertices"] = json::array();
  for (const Vertex& v : inst.vertices) {
    j["vertices"].push_back({{"id", v.id},
                             {"x", v.x},
                             {"y", v.y},
                             {"reward", v.reward},
                             {"sensing_cost", v.sensing_cost}});
  }
  j["start_id"] = inst.start_id;
  j["finish_id"] = inst.finish_id;
  j["kernel_length"] = inst.kernel_length;
  j["neighbour_radius"] = inst.neighbour_radius;
  if (inst.kernel_form == KernelForm::Squared) {
    j["kernel_form"] = to_string(inst.kernel_form);
  }
  if (inst.explicit_travel_cost) {
    const int n = inst.size();
    json rows = json::array();
    for (int r = 0; r < n; ++r) {
      json row = json::array();
      for (int c = 0; c < n; ++c) row.push_back(inst.travel(r, c));
      rows.push_back(std::move(row));
    }
    j["travel_cost"] = std::move(rows);
  }
  return j;
}

inline ProblemInstance instance_from_json(const json& j) {
  for (const char* key : {"vertices", "start_id", "finish_id", "kernel_length",
                          "neighbour_radius"}) {
    if (!j.contains(key)) {
      throw std::runtime_error(std::string("instance json missing key: ") + key);
    }
  }
  ProblemInstance inst;
  inst.vertices.reserve(j.at("vertices").size());
  for (const json& vj : j.at("vertices")) {
    Vertex v;
    v.id = vj.at("id").get<int>();
    v.x = vj.at("x").get<double>();
    v.y = vj.at("y").get<double>();
    v.reward = vj.at("reward").get<double>();
    v.sensing_cost = vj.at("sensing_cost").get<double>();
    inst.vertices.push_back(v);
  }
  std::sort(inst.vertices.begin(), inst.vertices.end(),
            [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  inst.start_id = j.at("start_id").get<int>();
  inst.finish_id = j.at("finish_id").get<int>();
  inst.kernel_length = j.at("kernel_length").get<double>();
  inst.neighbour_radius = j.at("neighbour_radius").get<double>();
  if (j.contains("kernel_form")) {
    inst.kernel_form = kernel_form_from_string(j.at("kernel_form").get<std::string>());
  }
  if (j.contains("travel_cost")) {
    const json& rows = j.at("travel_cost");
    const std::size_t n = inst.vertices.size();
    if (rows.size() != n) throw std::runtime_error("travel_cost row count mismatch");
    inst.explicit_travel_cost = true;
    inst.travel_cost.reserve(n * n);
    for (const json& row : rows) {
      if (row.size() != n) throw std::runtime_error("travel_cost column count mismatch");
      for (const json& cell : row) inst.travel_cost.push_back(cell.get<double>());
    }
  }
  inst.finalize();
  return inst;
}

inline ProblemInstance load_instance(const std::string& path) {
  try {
    return instance_from_json(load_json(path));
  } catch (const json::exception& e) {
    throw std::runtime_error("bad instance file " + path + ": " + e.what());
  }
}

inline void save_instance(const std::string& path, const ProblemInstance& inst) {
  save_json(path, instance_to_json(inst));
}

// ---------------------------------------------------------------------------
// solution

inline json solution_to_json(const TeamSolution& sol) {
  json j;
  j["paths"] = sol.paths;
  j["utility"] = sol.utility;
  j["per_robot_cost"] = sol.per_robot_cost;
  j["feasible"] = sol.feasible;
  j["violations"] = sol.violations;
  return j;
}

inline TeamSolution solution_from_json(const json& j) {
  TeamSolution sol;
  sol.paths = j.at("paths").get<std::vector<std::vector<int>>>();
  sol.utility = j.at("utility").get<double>();
  sol.per_robot_cost = j.at("per_robot_cost").get<std::vector<double>>();
  sol.feasible = j.at("feasible").get<bool>();
  sol.violations = j.at("violations").get<std::vector<std::string>>();
  return sol;
}

inline TeamSolution load_solution(const std::string& path) {
  try {
    return solution_from_json(load_json(path));
  } catch (const json::exception& e) {
    throw std::runtime_error("bad solution file " + path + ": " + e.what());
  }
}

inline void save_solution(const std::string& path, const TeamSolution& sol) {
  save_json(path, solution_to_json(sol));
}

// ---------------------------------------------------------------------------
// solver parameters

inline json params_to_json(const GaParams& p) {
  return {{"population_size", p.population_size},
          {"max_generations", p.max_generations},
          {"tournament_size", p.tournament_size},
          {"cx_probability", p.cx_probability},
          {"mutation_probability", p.mutation_probability},
          {"elite_fraction", p.elite_fraction},
          {"num_mutations", p.num_mutations},
          {"add_probability", p.add_probability},
          {"stall_generations", p.stall_generations},
          {"generation_method", to_string(p.generation_method)},
          {"seed", p.seed}};
}

// Missing keys keep their defaults so a params file may list only the knobs
// it changes; unknown keys are rejected rather than silently dropped.
inline GaParams params_from_json(const json& j) {
  GaParams p;
  for (const auto& [key, value] : j.items()) {
    if (key == "population_size") p.population_size = value.get<int>();
    else if (key == "max_generations") p.max_generations = value.get<int>();
    else if (key == "tournament_size") p.tournament_size = value.get<int>();
    else if (key == "cx_probability") p.cx_probability = value.get<double>();
    else if (key == "mutation_probability") p.mutation_probability = value.get<double>();
    else if (key == "elite_fraction") p.elite_fraction = value.get<double>();
    else if (key == "num_mutations") p.num_mutations = value.get<int>();
    else if (key == "add_probability") p.add_probability = value.get<double>();
    else if (key == "stall_generations") p.stall_generations = value.get<int>();
    else if (key == "generation_method") {
      p.generation_method = generation_method_from_string(value.get<std::string>());
    } else if (key == "seed") {
      p.seed = value.get<std::uint64_t>();
    } else {
      throw std::runtime_error("unknown solver parameter: " + key);
    }
  }
  p.validate();
  return p;
}

inline GaParams load_params(const std::string& path) {
  try {
    return params_from_json(load_json(path));
  } catch (const json::exception& e) {
    throw std::runtime_error("bad params file " + path + ": " + e.what());
  }
}

inline void save_params(const std::string& path, const GaParams& p) {
  save_json(path, params_to_json(p));
}

// ---------------------------------------------------------------------------
// run results

inline json solve_result_to_json(const SolveResult& res) {
  json j = solution_to_json(res.solution);
  j["generations_run"] = res.generations_run;
  j["wall_time_s"] = res.wall_time_s;
  j["seed"] = res.seed;
  return j;
}

inline json oracle_result_to_json(const OracleResult& res) {
  json j = solution_to_json(res.solution);
  j["bound"] = res.bound;
  j["proven_gap"] = res.proven_gap;
  j["nodes_expanded"] = res.nodes_expanded;
  j["wall_time_s"] = res.wall_time_s;
  j["limit_hit"] = res.limit_hit;
  return j;
}

// ---------------------------------------------------------------------------
// tuner report

inline json param_chromosome_to_json(const ParamChromosome& c) {
  return {{"population_size", c.population_size},
          {"max_generations", c.max_generations},
          {"tournament_size", c.tournament_size},
          {"cx_probability", c.cx_probability},
          {"mutation_probability", c.mutation_probability},
          {"elite_fraction", c.elite_fraction}};
}

inline ParamChromosome param_chromosome_from_json(const json& j) {
  ParamChromosome c;
  c.population_size = j.at("population_size").get<int>();
  c.max_generations = j.at("max_generations").get<int>();
  c.tournament_size = j.at("tournament_size").get<int>();
  c.cx_probability = j.at("cx_probability").get<double>();
  c.mutation_probability = j.at("mutation_probability").get<double>();
  c.elite_fraction = j.at("elite_fraction").get<double>();
  return c;
}

inline json tune_result_to_json(const TuneResult& result, GenerationMethod method) {
  json j;
  j["method"] = to_string(method);
  j["seed"] = result.seed;
  j["wall_time_s"] = result.wall_time_s;
  j["best_params"] = params_to_json(to_ga_params(result.best, method));
  j["best_rating"] = {{"rating", result.best_state.rating},
                      {"deviation", result.best_state.deviation},
                      {"volatility", result.best_state.volatility}};
  json trials = json::array();
  for (const auto& trial : result.trials) {
    json ranking = json::array();
    for (const RatedConfig& rc : trial) {
      ranking.push_back({{"params", param_chromosome_to_json(rc.chromosome)},
                         {"rating", rc.state.rating},
                         {"deviation", rc.state.deviation},
                         {"volatility", rc.state.volatility}});
    }
    trials.push_back(std::move(ranking));
  }
  j["trials"] = std::move(trials);
  return j;
}

}  // namespace ctop
