#include <gtest/gtest.h>

#include <map>

#include "terraroute/errors.hpp"
#include "terraroute/graph.hpp"

namespace terraroute {
namespace {

TerrainGrid uniform(int rows, int cols, double value = 100.0, std::vector<std::uint8_t> mask = {}) {
  return TerrainGrid(rows, cols, 10.0, {0, 0}, std::vector<double>(static_cast<std::size_t>(rows) * cols, value),
                     std::move(mask));
}

CostField field_for(const TerrainGrid& g) { return build_cost_field(g, {"v", 54}, nominal_weights(), {}); }

TEST(Neighbors, InteriorHasEightInClockwiseOrder) {
  const auto g = uniform(3, 3);
  const auto n = neighbors({1, 1}, g);
  ASSERT_EQ(n.size(), 8u);
  const std::vector<CellIndex> expected{{0, 1}, {0, 2}, {1, 2}, {2, 2}, {2, 1}, {2, 0}, {1, 0}, {0, 0}};
  EXPECT_EQ(std::vector<CellIndex>(n.begin(), n.end()), expected);
}

TEST(Neighbors, CornerHasThree) {
  const auto g = uniform(3, 3);
  const auto n = neighbors({0, 0}, g);
  const std::vector<CellIndex> expected{{0, 1}, {1, 1}, {1, 0}};
  EXPECT_EQ(std::vector<CellIndex>(n.begin(), n.end()), expected);
  EXPECT_EQ(neighbors({2, 2}, g).size(), 3u);
  EXPECT_EQ(neighbors({0, 1}, g).size(), 5u);
}

TEST(Neighbors, MaskedNortheastAbsent) {
  std::vector<std::uint8_t> mask(9, 0);
  mask[2] = 1;  // (0,2) is NE of (1,1)
  const auto g = uniform(3, 3, 100.0, mask);
  const auto n = neighbors({1, 1}, g);
  EXPECT_EQ(n.size(), 7u);
  for (const auto& c : n) EXPECT_NE(c, (CellIndex{0, 2}));
}

TEST(Neighbors, OutOfBoundsRejected) {
  const auto g = uniform(3, 3);
  EXPECT_THROW(neighbors({3, 0}, g), ValidationError);
  EXPECT_THROW(neighbors({0, -1}, g), ValidationError);
}

TEST(BuildGraph, TwoByTwoArcCount) {
  const auto g = uniform(2, 2);
  const auto graph = build_graph(field_for(g), g, {0, 0}, {1, 1});
  EXPECT_EQ(graph.planning_node_count(), 4u);
  EXPECT_EQ(graph.node_count(), 6u);
  EXPECT_EQ(graph.arcs().size(), 14u);
}

TEST(BuildGraph, ThreeByThreeArcCount) {
  const auto g = uniform(3, 3);
  const auto graph = build_graph(field_for(g), g, {0, 0}, {2, 2});
  EXPECT_EQ(graph.arcs().size(), 42u);
}

TEST(BuildGraph, TerminalArcs) {
  const auto g = uniform(4, 5);
  const auto graph = build_graph(field_for(g), g, {1, 2}, {3, 4});
  const auto src = graph.out_arcs(graph.source());
  ASSERT_EQ(src.size(), 1u);
  EXPECT_EQ(src[0].head, graph.start_node());
  EXPECT_EQ(src[0].cost, 0.0);
  EXPECT_TRUE(graph.in_arc_indices(graph.source()).empty());
  const auto into_sink = graph.in_arc_indices(graph.sink());
  ASSERT_EQ(into_sink.size(), 1u);
  EXPECT_EQ(graph.arcs()[into_sink[0]].tail, graph.end_node());
  EXPECT_EQ(graph.arcs()[into_sink[0]].cost, 0.0);
  EXPECT_TRUE(graph.out_arcs(graph.sink()).empty());
  EXPECT_EQ(graph.cell_of(graph.start_node()), (CellIndex{1, 2}));
}

TEST(BuildGraph, RejectsBadTerminals) {
  std::vector<std::uint8_t> mask(9, 0);
  mask[4] = 1;
  const auto g = uniform(3, 3, 100.0, mask);
  const auto f = field_for(g);
  try {
    build_graph(f, g, {1, 1}, {2, 2});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "start");
  }
  try {
    build_graph(f, g, {0, 0}, {1, 1});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "end");
  }
  EXPECT_THROW(build_graph(f, g, {0, 0}, {5, 5}), ValidationError);
  const auto other = uniform(2, 2);
  EXPECT_THROW(build_graph(field_for(other), g, {0, 0}, {2, 2}), ValidationError);
}

TEST(BuildGraph, NoArcsTouchNodata) {
  const auto base = generate_synthetic_terrain(4, 30, 30, 10.0, {});
  std::vector<double> v(base.rci_values().begin(), base.rci_values().end());
  std::vector<std::uint8_t> mask(v.size(), 0);
  for (std::size_t i = 0; i < mask.size(); i += 7) mask[i] = 1;
  mask[1] = 0;
  mask[mask.size() - 2] = 0;
  const TerrainGrid g(30, 30, 10.0, {0, 0}, v, mask);
  const auto graph = build_graph(field_for(g), g, {0, 1}, {29, 28});
  for (const auto& a : graph.arcs()) {
    if (graph.is_planning(a.tail)) EXPECT_FALSE(g.is_nodata(graph.cell_of(a.tail)));
    if (graph.is_planning(a.head)) EXPECT_FALSE(g.is_nodata(graph.cell_of(a.head)));
  }
  EXPECT_EQ(graph.planning_node_count(), g.cell_count() - g.nodata_count());
}

// Recounts the network for a full 100x100 synthetic grid by walking the
// cells directly rather than through neighbors().
TEST(BuildGraph, LargeGridDegreeSumAndDestinationCosts) {
  const auto g = generate_synthetic_terrain(0, 100, 100, 90.0, {});
  TacticalPicture pic;
  pic.enemy_cells = {{55, 55}};
  pic.history_cells = {{0, 0}, {1, 1}};
  const auto f = build_cost_field(g, {"v", 54}, nominal_weights(), pic);
  const auto graph = build_graph(f, g, {0, 0}, {99, 99});

  std::size_t degree_sum = 0;
  for (int r = 0; r < 100; ++r) {
    for (int c = 0; c < 100; ++c) {
      const int rows = 1 + (r > 0) + (r < 99);
      const int cols = 1 + (c > 0) + (c < 99);
      degree_sum += static_cast<std::size_t>(rows * cols - 1);
    }
  }
  // Closed form for an R x C king graph: 2(4RC - 3R - 3C + 2).
  EXPECT_EQ(degree_sum, 2u * (4u * 100 * 100 - 3 * 100 - 3 * 100 + 2));
  EXPECT_EQ(graph.arcs().size(), degree_sum + 2);

  std::map<NodeId, double> entering;
  for (const auto& a : graph.arcs()) {
    if (!graph.is_planning(a.tail) || !graph.is_planning(a.head)) continue;
    const auto t = graph.cell_of(a.tail);
    const auto h = graph.cell_of(a.head);
    EXPECT_LE(std::abs(t.row - h.row), 1);
    EXPECT_LE(std::abs(t.col - h.col), 1);
    EXPECT_NE(t, h);
    EXPECT_EQ(a.cost, f.cost(h));
    EXPECT_GE(a.cost, f.mu);
    const auto [it, inserted] = entering.emplace(a.head, a.cost);
    if (!inserted) EXPECT_EQ(it->second, a.cost);
  }
}

TEST(BuildGraph, Deterministic) {
  const auto g = generate_synthetic_terrain(3, 20, 20, 10.0, {});
  const auto f = field_for(g);
  const auto a = build_graph(f, g, {0, 0}, {19, 19});
  const auto b = build_graph(f, g, {0, 0}, {19, 19});
  ASSERT_EQ(a.arcs().size(), b.arcs().size());
  for (std::size_t i = 0; i < a.arcs().size(); ++i) {
    EXPECT_EQ(a.arcs()[i].tail, b.arcs()[i].tail);
    EXPECT_EQ(a.arcs()[i].head, b.arcs()[i].head);
    EXPECT_EQ(a.arcs()[i].cost, b.arcs()[i].cost);
  }
}

TEST(BuildGraph, FindArc) {
  const auto g = uniform(3, 3);
  const auto graph = build_graph(field_for(g), g, {0, 0}, {2, 2});
  const auto a = *graph.node_of({0, 0});
  const auto b = *graph.node_of({1, 1});
  const auto c = *graph.node_of({2, 2});
  EXPECT_TRUE(graph.find_arc(a, b));
  EXPECT_FALSE(graph.find_arc(a, c));
  EXPECT_TRUE(graph.find_arc(graph.source(), a));
  EXPECT_FALSE(graph.find_arc(graph.source(), b));
}

}  // namespace
}  // namespace terraroute
