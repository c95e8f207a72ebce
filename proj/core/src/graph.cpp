#include "terraroute/graph.hpp"

#include <limits>

#include "terraroute/errors.hpp"

namespace terraroute {

NeighborList neighbors(CellIndex cell, const TerrainGrid& grid) {
  if (!grid.in_bounds(cell)) throw ValidationError("cell " + to_string(cell) + " is outside the grid");
  NeighborList out;
  for (const auto& d : kDirectionOffsets) {
    const CellIndex n{cell.row + d.row, cell.col + d.col};
    if (grid.in_bounds(n) && !grid.is_nodata(n)) out.push_back(n);
  }
  return out;
}

std::optional<NodeId> GridGraph::node_of(CellIndex cell) const {
  if (cell.row < 0 || cell.row >= n_rows_ || cell.col < 0 || cell.col >= n_cols_) return std::nullopt;
  const auto id = cell_node_[static_cast<std::size_t>(cell.row) * static_cast<std::size_t>(n_cols_) +
                             static_cast<std::size_t>(cell.col)];
  if (id < 0) return std::nullopt;
  return static_cast<NodeId>(id);
}

std::optional<std::size_t> GridGraph::find_arc(NodeId tail, NodeId head) const {
  if (tail >= node_count() || head >= node_count()) return std::nullopt;
  for (std::size_t i = out_begin_[tail]; i < out_begin_[tail + 1]; ++i) {
    if (arcs_[i].head == head) return i;
  }
  return std::nullopt;
}

GridGraph build_graph(const CostField& cost_field, const TerrainGrid& grid, CellIndex start, CellIndex end) {
  if (cost_field.n_rows != grid.n_rows() || cost_field.n_cols != grid.n_cols() ||
      cost_field.total.size() != grid.cell_count()) {
    throw ValidationError("cost field dimensions do not match the terrain grid");
  }
  grid.require_traversable(start, "start");
  grid.require_traversable(end, "end");

  GridGraph g;
  g.n_rows_ = grid.n_rows();
  g.n_cols_ = grid.n_cols();
  g.start_ = start;
  g.end_ = end;

  const auto n_cells = grid.cell_count();
  g.cell_node_.assign(n_cells, -1);
  const auto mask = grid.nodata_mask();
  for (std::size_t i = 0; i < n_cells; ++i) {
    if (mask[i] != 0) continue;
    g.cell_node_[i] = static_cast<std::int32_t>(g.node_cell_.size());
    g.node_cell_.push_back(grid.cell_at(i));
  }
  if (g.node_cell_.size() + 2 > std::numeric_limits<std::uint32_t>::max() / 8) {
    throw ValidationError("grid too large for the network representation");
  }

  const auto n_nodes = g.node_count();
  g.arcs_.reserve(g.node_cell_.size() * 8 + 2);
  g.out_begin_.resize(n_nodes + 1);
  const NodeId end_node = *g.node_of(end);
  for (NodeId n = 0; n < g.node_cell_.size(); ++n) {
    g.out_begin_[n] = static_cast<std::uint32_t>(g.arcs_.size());
    for (const auto& nb : neighbors(g.node_cell_[n], grid)) {
      g.arcs_.push_back({n, *g.node_of(nb), cost_field.cost(nb)});
    }
    if (n == end_node) g.arcs_.push_back({n, g.sink(), 0.0});
  }
  g.out_begin_[g.source()] = static_cast<std::uint32_t>(g.arcs_.size());
  g.arcs_.push_back({g.source(), *g.node_of(start), 0.0});
  g.out_begin_[g.sink()] = static_cast<std::uint32_t>(g.arcs_.size());
  g.out_begin_[n_nodes] = static_cast<std::uint32_t>(g.arcs_.size());

  // Reverse adjacency via counting sort on head.
  g.in_begin_.assign(n_nodes + 1, 0);
  for (const auto& a : g.arcs_) ++g.in_begin_[a.head + 1];
  for (std::size_t n = 0; n < n_nodes; ++n) g.in_begin_[n + 1] += g.in_begin_[n];
  g.in_arcs_.resize(g.arcs_.size());
  std::vector<std::uint32_t> cursor(g.in_begin_.begin(), g.in_begin_.end() - 1);
  for (std::uint32_t i = 0; i < g.arcs_.size(); ++i) g.in_arcs_[cursor[g.arcs_[i].head]++] = i;
  return g;
}

}  // namespace terraroute
