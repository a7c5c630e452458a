#include "ctop/instance.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

using namespace ctop;

namespace {

ProblemInstance pair_instance(double separation) {
  // Two sampling vertices on the x-axis plus a shared start/finish depot.
  ProblemInstance inst;
  inst.vertices = {
      {0, 0.0, 0.0, 1.0, 0.0},
      {1, separation, 0.0, 1.0, 0.0},
      {2, -1.0, 0.0, 0.0, 0.0},
  };
  inst.start_id = 2;
  inst.finish_id = 2;
  inst.kernel_length = 1.0;
  inst.neighbour_radius = 1.5;
  inst.finalize();
  return inst;
}

}  // namespace

TEST(KernelWeight, MatchesClosedForm) {
  EXPECT_DOUBLE_EQ(kernel_weight(0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(kernel_weight(0.0, 3.7), 1.0);
  EXPECT_NEAR(kernel_weight(2.0, 1.0), 0.36787944117144233, 1e-15);
  EXPECT_NEAR(kernel_weight(1.0, 0.5), 0.1353352832366127, 1e-15);
}

TEST(KernelWeight, SquaredFormUsesSquaredDistance) {
  EXPECT_NEAR(kernel_weight(2.0, 1.0, KernelForm::Squared), 0.1353352832366127, 1e-15);
  EXPECT_NEAR(kernel_weight(3.0, 2.0, KernelForm::Squared), 0.32465246735834974, 1e-15);
  EXPECT_DOUBLE_EQ(kernel_weight(0.0, 1.0, KernelForm::Squared), 1.0);
}

TEST(KernelWeight, RejectsBadParameters) {
  EXPECT_THROW(kernel_weight(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(kernel_weight(1.0, -2.0), std::invalid_argument);
  EXPECT_THROW(kernel_weight(1.0, std::nan("")), std::invalid_argument);
  EXPECT_THROW(kernel_weight(1.0, std::numeric_limits<double>::infinity()),
               std::invalid_argument);
  EXPECT_THROW(kernel_weight(-0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(kernel_weight(std::nan(""), 1.0), std::invalid_argument);
}

TEST(KernelWeight, MonotoneInDistanceAndLength) {
  for (KernelForm form : {KernelForm::Absolute, KernelForm::Squared}) {
    for (double l : {0.5, 1.0, 2.0}) {
      double prev = kernel_weight(0.0, l, form);
      for (double d = 0.25; d <= 5.0; d += 0.25) {
        const double w = kernel_weight(d, l, form);
        EXPECT_LT(w, prev) << "form=" << to_string(form) << " l=" << l << " d=" << d;
        prev = w;
      }
    }
    double prev = kernel_weight(1.7, 0.3, form);
    for (double l : {0.6, 1.2, 2.4, 4.8}) {
      const double w = kernel_weight(1.7, l, form);
      EXPECT_GT(w, prev) << "form=" << to_string(form) << " l=" << l;
      prev = w;
    }
  }
}

TEST(KernelForm, StringRoundTrip) {
  EXPECT_EQ(kernel_form_from_string("absolute"), KernelForm::Absolute);
  EXPECT_EQ(kernel_form_from_string("squared"), KernelForm::Squared);
  EXPECT_STREQ(to_string(KernelForm::Absolute), "absolute");
  EXPECT_STREQ(to_string(KernelForm::Squared), "squared");
  EXPECT_THROW(kernel_form_from_string("gaussian"), std::invalid_argument);
}

TEST(GridInstance, LayoutOfThreeByThree) {
  const ProblemInstance inst = build_grid_instance(3, 3, 1.0, 0.0, 1.0, 42);
  EXPECT_EQ(inst.size(), 11);
  EXPECT_EQ(inst.num_sampling(), 9);
  EXPECT_EQ(inst.start_id, 9);
  EXPECT_EQ(inst.finish_id, 10);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const Vertex& v = inst.vertices[static_cast<std::size_t>(r * 3 + c)];
      EXPECT_DOUBLE_EQ(v.x, c * 1.0);
      EXPECT_DOUBLE_EQ(v.y, r * 1.0);
      EXPECT_DOUBLE_EQ(v.reward, 1.0);
      EXPECT_DOUBLE_EQ(v.sensing_cost, 0.0);
    }
  }
  // Corner (0,0) to corner (2,2).
  EXPECT_NEAR(inst.travel(0, 8), 2.8284271247461903, 1e-15);
  // Depot at (-spacing, (rows-1)*spacing/2), finish co-located.
  EXPECT_DOUBLE_EQ(inst.vertices[9].x, -1.0);
  EXPECT_DOUBLE_EQ(inst.vertices[9].y, 1.0);
  EXPECT_DOUBLE_EQ(inst.vertices[10].x, -1.0);
  EXPECT_DOUBLE_EQ(inst.vertices[10].y, 1.0);
  EXPECT_DOUBLE_EQ(inst.travel(9, 10), 0.0);
  EXPECT_DOUBLE_EQ(inst.reward(9), 0.0);
  EXPECT_DOUBLE_EQ(inst.reward(10), 0.0);
  EXPECT_DOUBLE_EQ(inst.total_reward(), 9.0);
}

TEST(GridInstance, SingleVertexHasEmptyNeighbourhood) {
  const ProblemInstance inst = build_grid_instance(1, 1, 1.0, 0.0, 1.0, 0);
  EXPECT_EQ(inst.num_sampling(), 1);
  EXPECT_TRUE(inst.correlation.neighbours(0).empty());
  // The lone vertex sits one spacing from the depot, inside the 1.5 radius.
  EXPECT_EQ(inst.start_neighbours, std::vector<int>{0});
}

TEST(GridInstance, BenchmarkSizeNineByNine) {
  const ProblemInstance inst = build_grid_instance(9, 9, 1.0, 0.0, 1.0, 7);
  EXPECT_EQ(inst.num_sampling(), 81);
  EXPECT_EQ(inst.size(), 83);
}

TEST(GridInstance, ZeroNoiseIsSeedIndependent) {
  const ProblemInstance a = build_grid_instance(4, 5, 2.0, 0.0, 1.0, 1);
  const ProblemInstance b = build_grid_instance(4, 5, 2.0, 0.0, 1.0, 999);
  ASSERT_EQ(a.size(), b.size());
  for (int i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.vertices[static_cast<std::size_t>(i)].x,
              b.vertices[static_cast<std::size_t>(i)].x);
    EXPECT_EQ(a.vertices[static_cast<std::size_t>(i)].y,
              b.vertices[static_cast<std::size_t>(i)].y);
  }
}

TEST(GridInstance, NoiseIsSeededAndBounded) {
  const double amp = 0.3;
  const ProblemInstance a = build_grid_instance(4, 4, 1.0, amp, 1.0, 11);
  const ProblemInstance b = build_grid_instance(4, 4, 1.0, amp, 1.0, 11);
  const ProblemInstance c = build_grid_instance(4, 4, 1.0, amp, 1.0, 12);
  bool any_diff = false;
  for (int i = 0; i < a.size(); ++i) {
    const auto& va = a.vertices[static_cast<std::size_t>(i)];
    const auto& vb = b.vertices[static_cast<std::size_t>(i)];
    const auto& vc = c.vertices[static_cast<std::size_t>(i)];
    EXPECT_EQ(va.x, vb.x);
    EXPECT_EQ(va.y, vb.y);
    any_diff = any_diff || va.x != vc.x || va.y != vc.y;
    if (a.is_sampling(i)) {
      const int r = i / 4;
      const int col = i % 4;
      EXPECT_LE(std::abs(va.x - col), amp + 1e-12);
      EXPECT_LE(std::abs(va.y - r), amp + 1e-12);
    }
  }
  EXPECT_TRUE(any_diff);
}

TEST(GridInstance, RejectsBadArguments) {
  EXPECT_THROW(build_grid_instance(0, 3, 1.0, 0.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(build_grid_instance(3, -1, 1.0, 0.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(build_grid_instance(3, 3, 0.0, 0.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(build_grid_instance(3, 3, 1.0, -0.1, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(build_grid_instance(3, 3, 1.0, 0.0, 1.0, 0, -2.0), std::invalid_argument);
}

TEST(Correlation, NeighbourCountsOnCanonicalGrid) {
  const ProblemInstance inst = build_grid_instance(3, 3, 1.0, 0.0, 1.0, 0);
  EXPECT_EQ(inst.correlation.neighbours(4).size(), 8u);  // centre
  EXPECT_EQ(inst.correlation.neighbours(0).size(), 3u);  // corner
  EXPECT_EQ(inst.correlation.neighbours(1).size(), 5u);  // edge midpoint
  EXPECT_TRUE(inst.correlation.neighbours(inst.start_id).empty());
  EXPECT_TRUE(inst.correlation.neighbours(inst.finish_id).empty());
}

TEST(Correlation, MembershipSymmetryOnRandomInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const int rows = dim(rng);
    const int cols = dim(rng);
    const ProblemInstance inst =
        build_grid_instance(rows, cols, 1.0, 0.3, 1.0, rng());
    for (int i = 0; i < inst.size(); ++i) {
      const auto& nb = inst.correlation.neighbours(i);
      EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
      for (int j : nb) {
        EXPECT_NE(j, i);
        const auto& back = inst.correlation.neighbours(j);
        EXPECT_TRUE(std::binary_search(back.begin(), back.end(), i))
            << "asymmetric membership " << i << " vs " << j;
      }
    }
  }
}

TEST(Correlation, ColumnSumsNeverExceedOne) {
  for (std::uint64_t seed : {0ull, 5ull}) {
    const ProblemInstance inst = build_grid_instance(5, 5, 1.0, 0.25, 1.0, seed);
    std::vector<double> column(static_cast<std::size_t>(inst.size()), 0.0);
    for (int i = 0; i < inst.size(); ++i) {
      const auto& nb = inst.correlation.neighbours(i);
      const auto& w = inst.correlation.weights(i);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        EXPECT_GT(w[k], 0.0);
        EXPECT_LE(w[k], 1.0);
        column[static_cast<std::size_t>(nb[k])] += w[k];
      }
    }
    for (double sum : column) EXPECT_LE(sum, 1.0 + 1e-12);
  }
}

TEST(Correlation, PairAtUnitDistanceKeepsRawKernelWeight) {
  const ProblemInstance inst = pair_instance(1.0);
  // Column sums are single kernel values below 1, so normalization is a no-op.
  EXPECT_NEAR(inst.correlation.weight(0, 1), 0.6065306597126334, 1e-15);
  EXPECT_NEAR(inst.correlation.weight(1, 0), 0.6065306597126334, 1e-15);
  EXPECT_DOUBLE_EQ(inst.correlation.weight(0, 2), 0.0);
}

TEST(Correlation, TightClusterIsNormalizedPerTarget) {
  // Three collinear sampling vertices 0.1 apart; raw column sums exceed 1.
  ProblemInstance inst;
  inst.vertices = {
      {0, 0.0, 0.0, 1.0, 0.0},
      {1, 0.1, 0.0, 1.0, 0.0},
      {2, 0.2, 0.0, 1.0, 0.0},
      {3, -1.0, 0.0, 0.0, 0.0},
  };
  inst.start_id = 3;
  inst.finish_id = 3;
  inst.kernel_length = 1.0;
  inst.neighbour_radius = 1.5;
  inst.finalize();
  EXPECT_NEAR(inst.correlation.weight(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(inst.correlation.weight(2, 1), 0.5, 1e-15);
  EXPECT_NEAR(inst.correlation.weight(1, 0), 0.5124973964842103, 1e-15);
  EXPECT_NEAR(inst.correlation.weight(0, 2), 0.4875026035157896, 1e-15);
}

TEST(Correlation, RejectsNonPositiveRadius) {
  std::vector<Vertex> vs = {{0, 0.0, 0.0, 1.0, 0.0}, {1, 1.0, 0.0, 0.0, 0.0}};
  EXPECT_THROW(build_correlation(vs, 1, 1, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(build_correlation(vs, 1, 1, 1.0, -1.0), std::invalid_argument);
}

TEST(Instance, StartNeighboursCoverReachableFirstMoves) {
  const ProblemInstance inst = build_grid_instance(3, 3, 1.0, 0.0, 1.0, 0);
  // Depot (-1,1): within radius 1.5 lie the first-column vertices 0, 3, 6.
  EXPECT_EQ(inst.start_neighbours, (std::vector<int>{0, 3, 6}));
}

TEST(Instance, BudgetSpecValidation) {
  BudgetSpec ok;
  ok.num_robots = 2;
  ok.budgets = {1.0, 2.0};
  EXPECT_NO_THROW(ok.validate());

  BudgetSpec bad = ok;
  bad.num_robots = 0;
  bad.budgets = {};
  EXPECT_THROW(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.budgets = {1.0};
  EXPECT_THROW(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.budgets = {1.0, 0.0};
  EXPECT_THROW(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.budgets = {1.0, std::numeric_limits<double>::infinity()};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Instance, FinalizeRejectsMalformedInput) {
  const auto base = [] {
    ProblemInstance inst;
    inst.vertices = {
        {0, 0.0, 0.0, 1.0, 0.0},
        {1, 1.0, 0.0, 0.0, 0.0},
    };
    inst.start_id = 1;
    inst.finish_id = 1;
    inst.kernel_length = 1.0;
    inst.neighbour_radius = 1.5;
    return inst;
  };

  {
    ProblemInstance inst = base();
    inst.vertices[0].reward = -1.0;
    EXPECT_THROW(inst.finalize(), std::invalid_argument);
  }
  {
    ProblemInstance inst = base();
    inst.vertices[1].sensing_cost = 0.5;
    EXPECT_THROW(inst.finalize(), std::invalid_argument);
  }
  {
    ProblemInstance inst = base();
    inst.vertices[1].id = 5;
    EXPECT_THROW(inst.finalize(), std::invalid_argument);
  }
  {
    ProblemInstance inst = base();
    inst.start_id = 7;
    EXPECT_THROW(inst.finalize(), std::invalid_argument);
  }
  {
    ProblemInstance inst = base();
    inst.vertices[0].x = std::nan("");
    EXPECT_THROW(inst.finalize(), std::invalid_argument);
  }
  {
    ProblemInstance inst = base();
    inst.explicit_travel_cost = true;
    inst.travel_cost = {0.0, 1.0, 2.0, 0.0};  // asymmetric
    EXPECT_THROW(inst.finalize(), std::invalid_argument);
  }
  {
    ProblemInstance inst = base();
    inst.explicit_travel_cost = true;
    inst.travel_cost = {0.0, 1.0, 1.0};  // wrong size
    EXPECT_THROW(inst.finalize(), std::invalid_argument);
  }
  {
    ProblemInstance inst = base();
    inst.explicit_travel_cost = true;
    inst.travel_cost = {0.5, 1.0, 1.0, 0.0};  // nonzero diagonal
    EXPECT_THROW(inst.finalize(), std::invalid_argument);
  }
}

TEST(Instance, ExplicitTravelMatrixIsPreserved) {
  ProblemInstance inst;
  inst.vertices = {
      {0, 0.0, 0.0, 1.0, 0.0},
      {1, 1.0, 0.0, 0.0, 0.0},
  };
  inst.start_id = 1;
  inst.finish_id = 1;
  inst.kernel_length = 1.0;
  inst.neighbour_radius = 1.5;
  inst.explicit_travel_cost = true;
  inst.travel_cost = {0.0, 7.5, 7.5, 0.0};
  inst.finalize();
  EXPECT_DOUBLE_EQ(inst.travel(0, 1), 7.5);
  EXPECT_DOUBLE_EQ(inst.travel(1, 0), 7.5);
}

TEST(Instance, DefaultRadiusScalesWithSpacing) {
  const ProblemInstance inst = build_grid_instance(3, 3, 2.0, 0.0, 1.0, 0);
  EXPECT_DOUBLE_EQ(inst.neighbour_radius, 3.0);
  // Same lattice topology as the unit grid: the centre still has 8 neighbours.
  EXPECT_EQ(inst.correlation.neighbours(4).size(), 8u);
}
