#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "terraroute/errors.hpp"
#include "terraroute/terrain.hpp"

namespace terraroute {
namespace {

TerrainGrid uniform(int rows, int cols, double value) {
  return TerrainGrid(rows, cols, 10.0, {0, 0}, std::vector<double>(static_cast<std::size_t>(rows) * cols, value));
}

TEST(AsciiGrid, SingleCell) {
  const auto g = parse_ascii_grid("ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 10\n54\n");
  EXPECT_EQ(g.n_rows(), 1);
  EXPECT_EQ(g.n_cols(), 1);
  EXPECT_EQ(g.rci({0, 0}), 54.0);
  EXPECT_EQ(g.nodata_count(), 0u);
}

TEST(AsciiGrid, NodataMasksExactlyThatCell) {
  const auto g = parse_ascii_grid(
      "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 10\nNODATA_value -9999\n60 -9999\n70 80\n");
  EXPECT_FALSE(g.is_nodata({0, 0}));
  EXPECT_TRUE(g.is_nodata({0, 1}));
  EXPECT_FALSE(g.is_nodata({1, 0}));
  EXPECT_FALSE(g.is_nodata({1, 1}));
  EXPECT_EQ(g.nodata_count(), 1u);
  EXPECT_EQ(g.rci({1, 1}), 80.0);
}

TEST(AsciiGrid, NorthRowFirst) {
  const auto g = parse_ascii_grid("ncols 2\nnrows 2\nxllcorner 100\nyllcorner 200\ncellsize 10\n1 2\n3 4\n");
  EXPECT_EQ(g.rci({0, 1}), 2.0);
  EXPECT_EQ(g.rci({1, 0}), 3.0);
  // Row 0 is the northern row: its centre sits half a cell below the top edge.
  EXPECT_EQ(g.cell_center({0, 0}), (MapPoint{105, 215}));
  EXPECT_EQ(g.cell_center({1, 1}), (MapPoint{115, 205}));
}

TEST(AsciiGrid, HeaderKeysCaseInsensitiveAnyOrder) {
  const auto g = parse_ascii_grid("CELLSIZE 5\nNROWS 1\nNCOLS 2\nYLLCORNER 0\nXLLCORNER 0\n1 2\n");
  EXPECT_EQ(g.n_cols(), 2);
  EXPECT_EQ(g.cell_size(), 5.0);
}

TEST(AsciiGrid, MalformedHeaderNamesLine) {
  try {
    parse_ascii_grid("ncols 2\nnrows two\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2 3 4\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_ascii_grid("ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\nbogus 3\n1\n"), ParseError);
  EXPECT_THROW(parse_ascii_grid("ncols 1\nncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n1\n"), ParseError);
  EXPECT_THROW(parse_ascii_grid("ncols 1\nnrows 1\nxllcorner 0\ncellsize 1\n1\n"), ParseError);
}

TEST(AsciiGrid, WrongValueCountReportsBoth) {
  try {
    parse_ascii_grid("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2 3\n");
    FAIL();
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("expected 4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("found 3"), std::string::npos) << msg;
  }
  EXPECT_THROW(parse_ascii_grid("ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2\n"), ParseError);
}

TEST(AsciiGrid, NegativeCellsizeIsValidationError) {
  try {
    parse_ascii_grid("ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize -5\n1\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "cellsize");
  }
  EXPECT_THROW(parse_ascii_grid("ncols 0\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n"), ValidationError);
}

TEST(AsciiGrid, RoundTripRandom) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 150.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(100);
    std::vector<std::uint8_t> m(100, 0);
    for (auto& x : v) x = u(rng);
    if (trial % 2) m[rng() % 100] = 1;
    const TerrainGrid g(10, 10, 12.5, {431000.25, 4390000.5}, v, m, -9999.0);
    const TerrainGrid back = parse_ascii_grid(write_ascii_grid(g));
    EXPECT_EQ(back, g);
  }
}

TEST(AsciiGrid, StreamOverload) {
  std::istringstream in("ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n7\n");
  EXPECT_EQ(parse_ascii_grid(in).rci({0, 0}), 7.0);
}

TEST(TerrainGrid, RejectsBadConstruction) {
  EXPECT_THROW(TerrainGrid(2, 2, 1.0, {0, 0}, {1, 2, 3}), ValidationError);
  EXPECT_THROW(TerrainGrid(1, 1, 0.0, {0, 0}, {1}), ValidationError);
  EXPECT_THROW(TerrainGrid(1, 1, 1.0, {0, 0}, {-1}), ValidationError);
  EXPECT_THROW(TerrainGrid(1, 1, 1.0, {0, 0}, {NAN}), ValidationError);
}

TEST(TerrainGrid, RequireTraversable) {
  const TerrainGrid g(1, 2, 1.0, {0, 0}, {1, 2}, {0, 1});
  EXPECT_NO_THROW(g.require_traversable({0, 0}, "start"));
  try {
    g.require_traversable({0, 1}, "end");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "end");
  }
  EXPECT_THROW(g.require_traversable({3, 0}, "start"), ValidationError);
}

TEST(Synthetic, ZeroValleysIsUniform) {
  SyntheticTerrainParams p;
  p.valley_count = 0;
  const auto g = generate_synthetic_terrain(5, 8, 9, 30.0, p);
  for (double v : g.rci_values()) EXPECT_EQ(v, 80.0);
}

TEST(Synthetic, Deterministic) {
  const auto a = generate_synthetic_terrain(3, 40, 30, 10.0, {});
  const auto b = generate_synthetic_terrain(3, 40, 30, 10.0, {});
  EXPECT_EQ(a, b);
  const auto c = generate_synthetic_terrain(4, 40, 30, 10.0, {});
  EXPECT_NE(a, c);
}

TEST(Synthetic, SeedZeroHasSoftValleys) {
  const auto g = generate_synthetic_terrain(0, 100, 100, 90.0, {80.0, 70.0, 3, 1.0});
  const double lo = *std::min_element(g.rci_values().begin(), g.rci_values().end());
  const double hi = *std::max_element(g.rci_values().begin(), g.rci_values().end());
  EXPECT_LT(lo, 54.0);
  EXPECT_GT(lo, 0.0);
  EXPECT_LE(hi, 80.0);
}

TEST(Synthetic, ValuesStayInRange) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = generate_synthetic_terrain(seed, 30, 50, 10.0, {60.0, 60.0, 6, 0.5});
    for (double v : g.rci_values()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 60.0);
    }
  }
}

TEST(Synthetic, RejectsBadParameters) {
  EXPECT_THROW(generate_synthetic_terrain(0, 1, 10, 10.0, {}), ValidationError);
  EXPECT_THROW(generate_synthetic_terrain(0, 10, 10, 10.0, {50.0, 60.0, 3, 1.0}), ValidationError);
  EXPECT_THROW(generate_synthetic_terrain(0, 10, 10, 10.0, {80.0, 70.0, -1, 1.0}), ValidationError);
  EXPECT_THROW(generate_synthetic_terrain(0, 10, 10, 10.0, {80.0, 70.0, 3, 0.0}), ValidationError);
  EXPECT_THROW(generate_synthetic_terrain(0, 10, 10, -1.0, {}), ValidationError);
}

TEST(ScaleRci, IdentityAndHalf) {
  const auto g = generate_synthetic_terrain(1, 20, 20, 10.0, {});
  EXPECT_EQ(scale_rci(g, 1.0), g);
  const auto half = scale_rci(uniform(3, 3, 80.0), 0.5);
  for (double v : half.rci_values()) EXPECT_EQ(v, 40.0);
}

TEST(ScaleRci, KeepsMaskAndGeometry) {
  const TerrainGrid g(2, 2, 7.0, {1, 2}, {10, 20, 30, 40}, {0, 1, 0, 0}, -1.0);
  const auto s = scale_rci(g, 0.25);
  EXPECT_TRUE(s.is_nodata({0, 1}));
  EXPECT_EQ(s.cell_size(), 7.0);
  EXPECT_EQ(s.origin(), g.origin());
  EXPECT_EQ(s.rci({1, 1}), 10.0);
}

TEST(ScaleRci, ComposesWithinTolerance) {
  const auto g = generate_synthetic_terrain(9, 25, 25, 10.0, {});
  const double a = 0.7;
  const double b = 0.3;
  const auto once = scale_rci(g, a * b);
  const auto twice = scale_rci(scale_rci(g, a), b);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    EXPECT_NEAR(once.rci_values()[i], twice.rci_values()[i], 1e-12 * std::abs(once.rci_values()[i]));
  }
}

TEST(ScaleRci, RejectsNonPositive) {
  const auto g = uniform(2, 2, 10.0);
  EXPECT_THROW(scale_rci(g, 0.0), ValidationError);
  EXPECT_THROW(scale_rci(g, -0.5), ValidationError);
}

}  // namespace
}  // namespace terraroute
