#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "terraroute/errors.hpp"
#include "terraroute/risk.hpp"

namespace terraroute {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(SoilPenalty, Examples) {
  EXPECT_EQ(soil_penalty(5, 54, 54), 0.0);
  EXPECT_EQ(soil_penalty(5, 54, 100), 0.0);
  EXPECT_EQ(soil_penalty(5, 54, 30), 120.0);
  EXPECT_EQ(soil_penalty(500, 54, 53), 500.0);
}

TEST(SoilPenalty, Monotone) {
  double prev = kInf;
  for (double rci = 0; rci <= 100; rci += 0.5) {
    const double p = soil_penalty(5, 54, rci);
    EXPECT_LE(p, prev);
    EXPECT_GE(p, 0.0);
    prev = p;
  }
  EXPECT_LE(soil_penalty(5, 35, 30), soil_penalty(5, 54, 30));
  EXPECT_LE(soil_penalty(5, 54, 30), soil_penalty(6, 54, 30));
}

TEST(SoilPenalty, RejectsNonFinite) {
  EXPECT_THROW(soil_penalty(NAN, 54, 30), ValidationError);
  EXPECT_THROW(soil_penalty(5, kInf, 30), ValidationError);
  EXPECT_THROW(soil_penalty(5, 54, NAN), ValidationError);
}

TEST(ProximityPenalty, Examples) {
  EXPECT_EQ(proximity_penalty(20, 0, 15), 20.0);
  EXPECT_NEAR(proximity_penalty(20, 15, 15), 7.357589, 1e-6);
  EXPECT_NEAR(proximity_penalty(2000, 30, 30), 735.7589, 1e-4);
  EXPECT_EQ(proximity_penalty(20, kInf, 30), 0.0);
}

TEST(ProximityPenalty, StrictlyDecreasing) {
  double prev = kInf;
  for (double d = 0; d < 60; d += 0.25) {
    const double v = proximity_penalty(20, d, 15);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(ProximityPenalty, RejectsBadDecay) {
  EXPECT_THROW(proximity_penalty(20, 1, 0), ValidationError);
  EXPECT_THROW(proximity_penalty(20, 1, -3), ValidationError);
}

TEST(Distance, ThreeByThreeCenter) {
  const auto d = distance_to_nearest(3, 3, std::vector<CellIndex>{{1, 1}});
  EXPECT_EQ(d[4], 0.0);
  for (int k : {1, 3, 5, 7}) EXPECT_EQ(d[k], 1.0);
  for (int k : {0, 2, 6, 8}) EXPECT_EQ(d[k], std::sqrt(2.0));
}

TEST(Distance, EmptySourcesAreInfinite) {
  const auto d = distance_to_nearest(4, 5, {});
  ASSERT_EQ(d.size(), 20u);
  for (double v : d) EXPECT_EQ(v, kInf);
}

TEST(Distance, OutOfBoundsSourceRejected) {
  EXPECT_THROW(distance_to_nearest(3, 3, std::vector<CellIndex>{{3, 0}}), ValidationError);
  EXPECT_THROW(distance_to_nearest(3, 3, std::vector<CellIndex>{{0, -1}}), ValidationError);
}

TEST(Distance, MatchesBruteForce) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + static_cast<int>(rng() % 25);
    const int cols = 1 + static_cast<int>(rng() % 25);
    std::vector<CellIndex> src;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) src.push_back({static_cast<int>(rng() % rows), static_cast<int>(rng() % cols)});
    EXPECT_EQ(distance_to_nearest(rows, cols, src), testing::brute_force_distance(rows, cols, src)) << trial;
  }
}

TEST(Distance, ZeroOnSourcesAndLipschitz) {
  std::mt19937_64 rng(5);
  const int rows = 30, cols = 40;
  std::vector<CellIndex> src;
  for (int i = 0; i < 7; ++i) src.push_back({static_cast<int>(rng() % rows), static_cast<int>(rng() % cols)});
  const auto d = distance_to_nearest(rows, cols, src);
  for (const auto& s : src) EXPECT_EQ(d[static_cast<std::size_t>(s.row) * cols + s.col], 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr < 0 || cc < 0 || rr >= rows || cc >= cols) continue;
          EXPECT_LE(std::abs(d[r * cols + c] - d[rr * cols + cc]), std::sqrt(2.0) + 1e-12);
        }
      }
    }
  }
}

TEST(Weights, NominalValues) {
  const auto w = nominal_weights();
  EXPECT_EQ(w.P, 5);
  EXPECT_EQ(w.H, 20);
  EXPECT_EQ(w.R, 20);
  EXPECT_EQ(w.k_h, 15);
  EXPECT_EQ(w.k_r, 30);
  EXPECT_EQ(w.mu, 0.1);
  EXPECT_EQ(nominal_vehicle().vci50, 54);
}

TEST(Weights, ValidationNamesField) {
  auto expect_field = [](RiskWeights w, const std::string& field) {
    try {
      validate(w);
      ADD_FAILURE() << "no error for " << field;
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.field(), field);
    }
  };
  auto w = nominal_weights();
  w.P = -1;
  expect_field(w, "weights.P");
  w = nominal_weights();
  w.k_h = 0;
  expect_field(w, "weights.k_h");
  w = nominal_weights();
  w.k_r = 0;
  expect_field(w, "weights.k_r");
  w = nominal_weights();
  w.mu = 0;
  expect_field(w, "weights.mu");
  w = nominal_weights();
  w.H = NAN;
  expect_field(w, "weights.H");
  EXPECT_THROW(validate(Vehicle{"x", 0}), ValidationError);
}

TEST(CostField, StrongUniformSoilLeavesOnlyMu) {
  const TerrainGrid g(4, 4, 10, {0, 0}, std::vector<double>(16, 100.0));
  const auto f = build_cost_field(g, {"v", 54}, nominal_weights(), {});
  for (double c : f.total) EXPECT_EQ(c, 0.1);
}

TEST(CostField, TermSumOnEnemyCell) {
  const TerrainGrid g(1, 1, 10, {0, 0}, {30.0});
  TacticalPicture pic;
  pic.enemy_cells = {{0, 0}};
  RiskWeights w = nominal_weights();
  const auto f = build_cost_field(g, {"v", 54}, w, pic);
  EXPECT_EQ(f.soil[0], 120.0);
  EXPECT_EQ(f.history[0], 0.0);
  EXPECT_EQ(f.enemy[0], 20.0);
  EXPECT_EQ(f.total[0], 140.1);
}

TEST(CostField, MatchesPerCellRecomputation) {
  const auto g = generate_synthetic_terrain(2, 50, 50, 10.0, {});
  TacticalPicture pic;
  pic.enemy_cells = {{10, 10}, {40, 25}};
  pic.history_cells = {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {30, 44}};
  const Vehicle v{"v", 54};
  const auto w = nominal_weights();
  const auto f = build_cost_field(g, v, w, pic);
  for (int r = 0; r < 50; ++r) {
    for (int c = 0; c < 50; ++c) {
      const auto ref = testing::reference_cell(g, v, w, pic, {r, c});
      const auto k = f.index({r, c});
      EXPECT_EQ(f.soil[k], ref.p);
      EXPECT_EQ(f.history[k], ref.h);
      EXPECT_EQ(f.enemy[k], ref.r);
      EXPECT_EQ(f.total[k], ref.c);
      EXPECT_GE(f.total[k], w.mu);
    }
  }
}

TEST(CostField, ZeroCoefficientZeroesField) {
  const auto g = generate_synthetic_terrain(2, 20, 20, 10.0, {});
  TacticalPicture pic;
  pic.enemy_cells = {{5, 5}};
  pic.history_cells = {{7, 7}};
  RiskWeights w = nominal_weights();
  w.P = 0;
  w.H = 0;
  w.R = 0;
  const auto f = build_cost_field(g, {"v", 97}, w, pic);
  for (std::size_t k = 0; k < f.total.size(); ++k) {
    EXPECT_EQ(f.soil[k], 0.0);
    EXPECT_EQ(f.history[k], 0.0);
    EXPECT_EQ(f.enemy[k], 0.0);
    EXPECT_EQ(f.total[k], 0.1);
  }
}

TEST(CostField, ScaledTerrainMatchesScaledPenalty) {
  const auto g = generate_synthetic_terrain(6, 20, 20, 10.0, {});
  const auto s = scale_rci(g, 0.6);
  const auto f = build_cost_field(s, {"v", 54}, nominal_weights(), {});
  for (std::size_t k = 0; k < g.cell_count(); ++k) {
    EXPECT_EQ(f.soil[k], soil_penalty(5, 54, g.rci_values()[k] * 0.6));
  }
}

TEST(CostField, NodataCellsCarryOnlyMu) {
  const TerrainGrid g(1, 3, 10, {0, 0}, {10, 10, 10}, {0, 1, 0});
  TacticalPicture pic;
  pic.enemy_cells = {{0, 0}};
  const auto f = build_cost_field(g, {"v", 54}, nominal_weights(), pic);
  EXPECT_EQ(f.total[1], 0.1);
  EXPECT_GT(f.total[0], 0.1);
}

TEST(CostField, PictureCellsMustBeTraversable) {
  const TerrainGrid g(1, 3, 10, {0, 0}, {10, 10, 10}, {0, 1, 0});
  TacticalPicture pic;
  pic.enemy_cells = {{0, 1}};
  EXPECT_THROW(build_cost_field(g, {"v", 54}, nominal_weights(), pic), ValidationError);
  pic.enemy_cells = {{2, 0}};
  EXPECT_THROW(build_cost_field(g, {"v", 54}, nominal_weights(), pic), ValidationError);
}

}  // namespace
}  // namespace terraroute
