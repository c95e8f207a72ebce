#include "terraroute/solver.hpp"

#include <functional>
#include <map>
#include <queue>
#include <set>
#include <utility>

#include "terraroute/cost_sum.hpp"
#include "terraroute/errors.hpp"

namespace terraroute {

namespace {

struct Label {
  CostSum dist;
  NodeId node;
};

struct LabelAfter {
  bool operator()(const Label& a, const Label& b) const {
    if (a.dist != b.dist) return a.dist > b.dist;
    return a.node > b.node;
  }
};

[[noreturn]] void throw_unreachable(const GridGraph& graph) {
  throw InfeasibleError("end cell " + to_string(graph.end_cell()) + " is unreachable from start cell " +
                        to_string(graph.start_cell()));
}

}  // namespace

Route solve_min_cost_path(const GridGraph& graph) {
  const auto n = graph.node_count();
  std::vector<CostSum> dist(n, CostSum::infinity());
  std::vector<std::uint8_t> settled(n, 0);
  std::priority_queue<Label, std::vector<Label>, LabelAfter> open;

  dist[graph.source()] = CostSum(0.0);
  open.push({dist[graph.source()], graph.source()});
  while (!open.empty()) {
    const Label top = open.top();
    open.pop();
    if (settled[top.node] != 0) continue;
    settled[top.node] = 1;
    if (top.node == graph.sink()) break;
    for (const Arc& a : graph.out_arcs(top.node)) {
      if (settled[a.head] != 0) continue;
      const CostSum cand = top.dist.plus(a.cost);
      if (cand < dist[a.head]) {
        dist[a.head] = cand;
        open.push({cand, a.head});
      }
    }
  }
  if (settled[graph.sink()] == 0) throw_unreachable(graph);

  const NodeId start = graph.start_node();
  const NodeId end = graph.end_node();

  // An arc between planning nodes is tight when it realizes the head's label
  // exactly; optimal routes are exactly the start->end paths of tight arcs.
  auto tight = [&](const Arc& a) {
    return graph.is_planning(a.tail) && graph.is_planning(a.head) && settled[a.tail] != 0 &&
           settled[a.head] != 0 && dist[a.tail] < dist[a.head] && dist[a.tail].plus(a.cost) == dist[a.head];
  };

  std::vector<std::uint8_t> reaches_end(n, 0);
  std::vector<NodeId> stack{end};
  reaches_end[end] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (const auto idx : graph.in_arc_indices(v)) {
      const Arc& a = graph.arcs()[idx];
      if (reaches_end[a.tail] == 0 && tight(a)) {
        reaches_end[a.tail] = 1;
        stack.push_back(a.tail);
      }
    }
  }

  Route route;
  route.objective = dist[graph.sink()].value();
  route.cells.push_back(graph.cell_of(start));
  for (NodeId u = start; u != end;) {
    NodeId next = u;
    for (const Arc& a : graph.out_arcs(u)) {
      if (reaches_end[a.head] != 0 && tight(a)) {
        next = a.head;
        break;
      }
    }
    if (next == u) throw Error("internal: tight-arc walk stalled at " + to_string(graph.cell_of(u)));
    u = next;
    route.cells.push_back(graph.cell_of(u));
  }
  return route;
}

double oracle_cost(const GridGraph& graph) {
  const auto n = graph.node_count();
  std::vector<CostSum> dist(n, CostSum::infinity());
  dist[graph.source()] = CostSum(0.0);
  // Each sweep fixes at least one more node; n sweeps always suffice.
  for (std::size_t sweep = 0; sweep < n; ++sweep) {
    bool changed = false;
    for (const Arc& a : graph.arcs()) {
      if (!dist[a.tail].is_finite()) continue;
      const CostSum cand = dist[a.tail].plus(a.cost);
      if (cand < dist[a.head]) {
        dist[a.head] = cand;
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (!dist[graph.sink()].is_finite()) throw_unreachable(graph);
  return dist[graph.sink()].value();
}

double route_cost(const CostField& field, std::span<const CellIndex> cells) {
  CostSum sum;
  for (std::size_t i = 1; i < cells.size(); ++i) sum += field.cost(cells[i]);
  return sum.value();
}

bool FlowVerification::passed() const { return first_failure() == nullptr; }

const ConstraintCheck* FlowVerification::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

std::string FlowVerification::summary() const {
  std::string out;
  for (const auto& c : checks) {
    if (!out.empty()) out += "; ";
    out += c.name + (c.passed ? ": pass" : ": FAIL (" + c.detail + ")");
  }
  return out;
}

FlowVerification verify_flow_constraints(const GridGraph& graph, std::span<const CellIndex> cells) {
  struct Degree {
    int in = 0;
    int out = 0;
  };
  std::map<CellIndex, Degree> degree;
  int source_out = 0;
  int sink_in = 0;

  if (!cells.empty()) {
    if (cells.front() == graph.start_cell()) {
      ++source_out;
      ++degree[cells.front()].in;
    }
    if (cells.back() == graph.end_cell()) {
      ++sink_in;
      ++degree[cells.back()].out;
    }
  }

  ConstraintCheck arc_check{"arc_existence", true, {}};
  ConstraintCheck binary_check{"binary_flow", true, {}};
  std::set<std::pair<CellIndex, CellIndex>> used;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    const CellIndex from = cells[i];
    const CellIndex to = cells[i + 1];
    ++degree[from].out;
    ++degree[to].in;
    const auto tail = graph.node_of(from);
    const auto head = graph.node_of(to);
    if (arc_check.passed && (!tail || !head || !graph.find_arc(*tail, *head))) {
      arc_check.passed = false;
      arc_check.detail = "no arc " + to_string(from) + " -> " + to_string(to) + " at step " + std::to_string(i + 1);
    }
    if (!used.insert({from, to}).second && binary_check.passed) {
      binary_check.passed = false;
      binary_check.detail = "arc " + to_string(from) + " -> " + to_string(to) + " used more than once";
    }
  }

  ConstraintCheck balance{"flow_balance", true, {}};
  for (const auto& [cell, d] : degree) {
    if (d.in != d.out) {
      balance.passed = false;
      balance.detail = "node " + to_string(cell) + " has inflow " + std::to_string(d.in) + " and outflow " +
                       std::to_string(d.out);
      break;
    }
  }

  ConstraintCheck supply{"source_supply", source_out == 1, {}};
  if (!supply.passed) {
    supply.detail = cells.empty() ? "empty route"
                                  : "route starts at " + to_string(cells.front()) + ", source arc enters " +
                                        to_string(graph.start_cell());
  }
  ConstraintCheck demand{"sink_demand", sink_in == 1, {}};
  if (!demand.passed) {
    demand.detail = cells.empty() ? "empty route"
                                  : "route ends at " + to_string(cells.back()) + ", sink arc leaves " +
                                        to_string(graph.end_cell());
  }

  FlowVerification report;
  report.checks = {std::move(balance), std::move(supply), std::move(demand), std::move(arc_check),
                   std::move(binary_check)};
  return report;
}

}  // namespace terraroute
