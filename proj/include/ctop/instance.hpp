#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctop {

// A sampling site or a depot endpoint. Depot vertices (start/finish) carry
// zero sensing cost; generated instances also give them zero reward.
struct Vertex {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double reward = 0.0;        // r_i
  double sensing_cost = 0.0;  // c_i
};

inline double euclid(const Vertex& a, const Vertex& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Correlation kernel variants. Absolute uses exp(-d / (2 l^2)); Squared uses
// the classic squared-exponential exp(-d^2 / (2 l^2)).
enum class KernelForm { Absolute, Squared };

inline const char* to_string(KernelForm form) {
  return form == KernelForm::Squared ? "squared" : "absolute";
}

inline KernelForm kernel_form_from_string(const std::string& s) {
  if (s == "absolute") return KernelForm::Absolute;
  if (s == "squared") return KernelForm::Squared;
  throw std::invalid_argument("unknown kernel form: " + s);
}

// Kernel value in (0, 1] for a pair of points at the given distance.
// Larger `length` keeps distant pairs correlated for longer.
inline double kernel_weight(double distance, double length,
                            KernelForm form = KernelForm::Absolute) {
  if (!std::isfinite(length) || length <= 0.0) {
    throw std::invalid_argument("kernel length must be positive and finite");
  }
  if (!(distance >= 0.0)) {
    throw std::invalid_argument("distance must be nonnegative");
  }
  const double num = (form == KernelForm::Squared) ? distance * distance : distance;
  return std::exp(-num / (2.0 * length * length));
}

// Sparse neighbourhood structure: for each vertex i, the ascending list N_i of
// neighbour ids and the parallel weights w_ij (the reward share i collects
// from an unvisited neighbour j). Membership is symmetric; weights need not
// be, because each weight is normalized against its target's column sum so
// that an unvisited vertex contributes at most its full reward in total.
class CorrelationGraph {
 public:
  CorrelationGraph() = default;

  int size() const { return static_cast<int>(neighbours_.size()); }

  const std::vector<int>& neighbours(int id) const { return neighbours_.at(id); }
  const std::vector<double>& weights(int id) const { return weights_.at(id); }

  // w_ij, or 0 when j is not a neighbour of i.
  double weight(int i, int j) const {
    const auto& nb = neighbours_.at(i);
    const auto it = std::lower_bound(nb.begin(), nb.end(), j);
    if (it == nb.end() || *it != j) return 0.0;
    return weights_[i][static_cast<std::size_t>(it - nb.begin())];
  }

  void resize(int n) {
    neighbours_.assign(static_cast<std::size_t>(n), {});
    weights_.assign(static_cast<std::size_t>(n), {});
  }

  void set(int i, std::vector<int> nb, std::vector<double> w) {
    neighbours_.at(i) = std::move(nb);
    weights_.at(i) = std::move(w);
  }

 private:
  std::vector<std::vector<int>> neighbours_;
  std::vector<std::vector<double>> weights_;
};

// Builds the neighbourhood graph over the sampling vertices: N_i holds every
// sampling vertex j != i within `neighbour_radius` (Euclidean), weighted by
// the kernel and then divided by max(1, column sum of raw weights toward j).
// Depot vertices get empty neighbourhoods.
inline CorrelationGraph build_correlation(const std::vector<Vertex>& vertices,
                                          int start_id, int finish_id,
                                          double kernel_length,
                                          double neighbour_radius,
                                          KernelForm form = KernelForm::Absolute) {
  if (!(neighbour_radius > 0.0)) {
    throw std::invalid_argument("neighbour radius must be positive");
  }
  const int n = static_cast<int>(vertices.size());
  CorrelationGraph graph;
  graph.resize(n);

  const auto is_depot = [&](int id) { return id == start_id || id == finish_id; };

  std::vector<std::vector<int>> nb(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> raw(static_cast<std::size_t>(n));
  std::vector<double> column_sum(static_cast<std::size_t>(n), 0.0);

  for (int i = 0; i < n; ++i) {
    if (is_depot(i)) continue;
    for (int j = 0; j < n; ++j) {
      if (j == i || is_depot(j)) continue;
      const double d = euclid(vertices[static_cast<std::size_t>(i)],
                              vertices[static_cast<std::size_t>(j)]);
      if (d <= neighbour_radius) {
        const double w = kernel_weight(d, kernel_length, form);
        nb[static_cast<std::size_t>(i)].push_back(j);
        raw[static_cast<std::size_t>(i)].push_back(w);
        column_sum[static_cast<std::size_t>(j)] += w;
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    auto weights = raw[static_cast<std::size_t>(i)];
    const auto& ids = nb[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const double divisor = std::max(1.0, column_sum[static_cast<std::size_t>(ids[k])]);
      weights[k] /= divisor;
    }
    graph.set(i, ids, std::move(weights));
  }
  return graph;
}

// One robot budget per team member.
struct BudgetSpec {
  int num_robots = 0;
  std::vector<double> budgets;  // C_k, one per robot

  void validate() const {
    if (num_robots <= 0) throw std::invalid_argument("num_robots must be positive");
    if (static_cast<int>(budgets.size()) != num_robots) {
      throw std::invalid_argument("budgets.size() must equal num_robots");
    }
    for (double b : budgets) {
      if (!(b > 0.0) || !std::isfinite(b)) {
        throw std::invalid_argument("every budget must be positive and finite");
      }
    }
  }
};

// A full CTOP instance. Immutable after finalize(); safe to share across
// concurrent solver runs.
struct ProblemInstance {
  std::vector<Vertex> vertices;  // indexed by id
  int start_id = 0;
  int finish_id = 0;
  double kernel_length = 1.0;
  double neighbour_radius = 1.5;
  KernelForm kernel_form = KernelForm::Absolute;
  // True when the travel matrix was supplied explicitly (instance file) rather
  // than derived from coordinates.
  bool explicit_travel_cost = false;

  std::vector<double> travel_cost;  // row-major n*n, symmetric, zero diagonal
  CorrelationGraph correlation;
  // Sampling vertices within neighbour_radius of the start position; used by
  // path construction, which needs candidates when standing on the depot.
  std::vector<int> start_neighbours;

  int size() const { return static_cast<int>(vertices.size()); }
  bool is_depot(int id) const { return id == start_id || id == finish_id; }
  bool is_sampling(int id) const { return !is_depot(id); }

  int num_sampling() const {
    return size() - (start_id == finish_id ? 1 : 2);
  }

  std::vector<int> sampling_ids() const {
    std::vector<int> ids;
    ids.reserve(static_cast<std::size_t>(num_sampling()));
    for (int i = 0; i < size(); ++i) {
      if (is_sampling(i)) ids.push_back(i);
    }
    return ids;
  }

  double travel(int i, int j) const {
    return travel_cost[static_cast<std::size_t>(i) * static_cast<std::size_t>(size()) +
                       static_cast<std::size_t>(j)];
  }
  double reward(int id) const { return vertices[static_cast<std::size_t>(id)].reward; }
  double sensing(int id) const { return vertices[static_cast<std::size_t>(id)].sensing_cost; }

  double total_reward() const {
    double sum = 0.0;
    for (int id : sampling_ids()) sum += reward(id);
    return sum;
  }

  // Populates travel costs (unless explicit), the correlation graph, and the
  // start neighbourhood, then validates the instance.
  void finalize() {
    const int n = size();
    if (n == 0) throw std::invalid_argument("instance has no vertices");
    for (int i = 0; i < n; ++i) {
      if (vertices[static_cast<std::size_t>(i)].id != i) {
        throw std::invalid_argument("vertex ids must be dense and sorted (0..n-1)");
      }
    }
    if (start_id < 0 || start_id >= n || finish_id < 0 || finish_id >= n) {
      throw std::invalid_argument("start/finish id out of range");
    }
    for (const Vertex& v : vertices) {
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        throw std::invalid_argument("vertex coordinates must be finite");
      }
      if (v.reward < 0.0 || v.sensing_cost < 0.0) {
        throw std::invalid_argument("rewards and sensing costs must be nonnegative");
      }
    }
    if (sensing(start_id) != 0.0 || sensing(finish_id) != 0.0) {
      throw std::invalid_argument("start and finish vertices must have zero sensing cost");
    }

    if (!explicit_travel_cost) {
      travel_cost.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const double d = euclid(vertices[static_cast<std::size_t>(i)],
                                  vertices[static_cast<std::size_t>(j)]);
          travel_cost[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(j)] = d;
          travel_cost[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(i)] = d;
        }
      }
    } else {
      if (travel_cost.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw std::invalid_argument("travel_cost must be an n-by-n matrix");
      }
      for (int i = 0; i < n; ++i) {
        if (std::abs(travel(i, i)) > 1e-12) {
          throw std::invalid_argument("travel_cost diagonal must be zero");
        }
        for (int j = 0; j < n; ++j) {
          if (travel(i, j) < 0.0 || !std::isfinite(travel(i, j))) {
            throw std::invalid_argument("travel costs must be nonnegative and finite");
          }
          if (std::abs(travel(i, j) - travel(j, i)) > 1e-9 * std::max(1.0, travel(i, j))) {
            throw std::invalid_argument("travel_cost must be symmetric");
          }
        }
      }
    }

    correlation = build_correlation(vertices, start_id, finish_id, kernel_length,
                                    neighbour_radius, kernel_form);

    start_neighbours.clear();
    for (int j = 0; j < n; ++j) {
      if (!is_sampling(j)) continue;
      if (euclid(vertices[static_cast<std::size_t>(start_id)],
                 vertices[static_cast<std::size_t>(j)]) <= neighbour_radius) {
        start_neighbours.push_back(j);
      }
    }
  }
};

// Lattice benchmark instance: rows*cols sampling vertices at
// (col*spacing, row*spacing), each axis perturbed by uniform noise in
// [-noise_amplitude, +noise_amplitude]. Start and finish share an off-grid
// depot at (-spacing, (rows-1)*spacing/2). Sampling rewards are 1, sensing
// costs 0, travel costs Euclidean. With zero noise the result is independent
// of the seed.
inline ProblemInstance build_grid_instance(int rows, int cols, double spacing,
                                           double noise_amplitude,
                                           double kernel_length, std::uint64_t seed,
                                           double neighbour_radius = 0.0,
                                           KernelForm form = KernelForm::Absolute) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("rows and cols must be positive");
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
  if (noise_amplitude < 0.0) throw std::invalid_argument("noise amplitude must be nonnegative");
  if (neighbour_radius < 0.0) throw std::invalid_argument("neighbour radius must be nonnegative");

  ProblemInstance inst;
  inst.kernel_length = kernel_length;
  inst.kernel_form = form;
  inst.neighbour_radius = neighbour_radius > 0.0 ? neighbour_radius : 1.5 * spacing;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-noise_amplitude, noise_amplitude);

  const int num_sampling = rows * cols;
  inst.vertices.reserve(static_cast<std::size_t>(num_sampling) + 2);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Vertex v;
      v.id = r * cols + c;
      v.x = c * spacing;
      v.y = r * spacing;
      if (noise_amplitude > 0.0) {
        v.x += noise(rng);
        v.y += noise(rng);
      }
      v.reward = 1.0;
      v.sensing_cost = 0.0;
      inst.vertices.push_back(v);
    }
  }

  Vertex depot;
  depot.x = -spacing;
  depot.y = (rows - 1) * spacing / 2.0;
  depot.reward = 0.0;
  depot.sensing_cost = 0.0;

  depot.id = num_sampling;
  inst.vertices.push_back(depot);
  depot.id = num_sampling + 1;
  inst.vertices.push_back(depot);
  inst.start_id = num_sampling;
  inst.finish_id = num_sampling + 1;

  inst.finalize();
  return inst;
}

}  // namespace ctop
