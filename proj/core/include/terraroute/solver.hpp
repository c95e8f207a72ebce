#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "terraroute/graph.hpp"
#include "terraroute/risk.hpp"

namespace terraroute {

// A solved start-to-end path. The start cell is entered through the free
// source arc, so `objective` sums the costs of every cell except the first.
struct Route {
  std::vector<CellIndex> cells;
  double objective = 0.0;

  std::size_t step_count() const { return cells.empty() ? 0 : cells.size() - 1; }

  friend bool operator==(const Route&, const Route&) = default;
};

// Minimum-cost unit flow from source to sink. With one unit of supply and
// nonnegative arc costs the LP optimum is integral and equals a shortest
// path, which is found by label setting (Dijkstra) with exact path sums.
//
// Among optimal paths the one returned has the lexicographically smallest
// sequence of moves under the N, NE, E, ... NW neighbor order.
//
// Throws InfeasibleError if the end cell is unreachable.
Route solve_min_cost_path(const GridGraph& graph);

// Optimal cost by Bellman-Ford style relaxation of every arc until nothing
// changes. Independent of solve_min_cost_path; used as a test oracle.
// Throws InfeasibleError if the end cell is unreachable.
double oracle_cost(const GridGraph& graph);

// Exactly-rounded sum of per-cell composite costs over `cells`, skipping the first.
double route_cost(const CostField& field, std::span<const CellIndex> cells);

struct ConstraintCheck {
  std::string name;  // "flow_balance", "source_supply", "sink_demand", "arc_existence", "binary_flow"
  bool passed = true;
  std::string detail;  // offending node on failure
};

struct FlowVerification {
  std::vector<ConstraintCheck> checks;

  bool passed() const;
  const ConstraintCheck* first_failure() const;
  std::string summary() const;
};

// Checks the arc indicators implied by `cells` (source -> first, consecutive
// pairs, last -> sink) against the network constraints: flow balance at every
// planning node, one unit leaving the source, one unit entering the sink,
// every used arc present in the network, and no arc used more than once.
FlowVerification verify_flow_constraints(const GridGraph& graph, std::span<const CellIndex> cells);
inline FlowVerification verify_flow_constraints(const GridGraph& graph, const Route& route) {
  return verify_flow_constraints(graph, route.cells);
}

}  // namespace terraroute
