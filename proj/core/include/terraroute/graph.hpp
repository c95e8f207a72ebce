#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "terraroute/risk.hpp"
#include "terraroute/terrain.hpp"

namespace terraroute {

using NodeId = std::uint32_t;

// 8-connected moves in the fixed clockwise order used for every neighbor
// enumeration; the order is what makes tie-breaking reproducible.
enum class Direction : std::uint8_t { N, NE, E, SE, S, SW, W, NW };

inline constexpr std::array<CellIndex, 8> kDirectionOffsets{{
    {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1},
}};

// Up to eight neighbors without heap allocation.
class NeighborList {
 public:
  void push_back(CellIndex c) { cells_[size_++] = c; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  CellIndex operator[](std::size_t i) const { return cells_[i]; }
  const CellIndex* begin() const { return cells_.data(); }
  const CellIndex* end() const { return cells_.data() + size_; }

 private:
  std::array<CellIndex, 8> cells_{};
  std::size_t size_ = 0;
};

// In-bounds, unmasked cells among the 8 surrounding `cell`, ordered
// N, NE, E, SE, S, SW, W, NW. Throws ValidationError if `cell` is out of bounds.
NeighborList neighbors(CellIndex cell, const TerrainGrid& grid);

struct Arc {
  NodeId tail;
  NodeId head;
  double cost;
};

// Unit-flow network over the planning area: one node per unmasked cell plus a
// source and a sink. Arcs are grouped by tail node (row-major cell order,
// then source, then sink); within a node they follow neighbor order. The only
// source arc enters the start cell and the only sink arc leaves the end cell,
// both at zero cost. Every other arc costs the composite cost of the cell it
// enters.
class GridGraph {
 public:
  std::size_t node_count() const { return node_cell_.size() + 2; }
  std::size_t planning_node_count() const { return node_cell_.size(); }
  NodeId source() const { return static_cast<NodeId>(node_cell_.size()); }
  NodeId sink() const { return static_cast<NodeId>(node_cell_.size() + 1); }
  bool is_planning(NodeId n) const { return n < node_cell_.size(); }

  CellIndex start_cell() const { return start_; }
  CellIndex end_cell() const { return end_; }
  NodeId start_node() const { return *node_of(start_); }
  NodeId end_node() const { return *node_of(end_); }

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }

  std::span<const Arc> arcs() const { return arcs_; }
  std::span<const Arc> out_arcs(NodeId n) const {
    return std::span<const Arc>(arcs_).subspan(out_begin_[n], out_begin_[n + 1] - out_begin_[n]);
  }
  // Indices into arcs() of the arcs entering `n`.
  std::span<const std::uint32_t> in_arc_indices(NodeId n) const {
    return std::span<const std::uint32_t>(in_arcs_).subspan(in_begin_[n], in_begin_[n + 1] - in_begin_[n]);
  }

  // std::nullopt for cells outside the grid or masked.
  std::optional<NodeId> node_of(CellIndex cell) const;
  CellIndex cell_of(NodeId n) const { return node_cell_[n]; }

  // Index of arc tail->head, if it exists.
  std::optional<std::size_t> find_arc(NodeId tail, NodeId head) const;

 private:
  friend GridGraph build_graph(const CostField&, const TerrainGrid&, CellIndex, CellIndex);

  int n_rows_ = 0;
  int n_cols_ = 0;
  CellIndex start_{};
  CellIndex end_{};
  std::vector<std::int32_t> cell_node_;  // -1 for masked cells
  std::vector<CellIndex> node_cell_;
  std::vector<Arc> arcs_;
  std::vector<std::uint32_t> out_begin_;
  std::vector<std::uint32_t> in_begin_;
  std::vector<std::uint32_t> in_arcs_;
};

// Throws ValidationError if start or end is outside the grid or masked, or if
// the cost field does not match the grid.
GridGraph build_graph(const CostField& cost_field, const TerrainGrid& grid, CellIndex start, CellIndex end);

}  // namespace terraroute
