#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "terraroute/terrain.hpp"

namespace terraroute {

// Floor cost added to every cell so that no traversal is free.
inline constexpr double kDefaultMu = 0.1;

struct Vehicle {
  std::string name;
  double vci50 = 54.0;  // psi; soil strength the limiting vehicle needs for 50 passes

  friend bool operator==(const Vehicle&, const Vehicle&) = default;
};

// Coefficients of the composite cell cost c = p + h + r + mu.
struct RiskWeights {
  double P = 0.0;    // soil-strength coefficient
  double H = 0.0;    // prior-route proximity coefficient
  double R = 0.0;    // enemy proximity coefficient
  double k_h = 1.0;  // prior-route decay constant, cells
  double k_r = 1.0;  // enemy decay constant, cells
  double mu = kDefaultMu;

  friend bool operator==(const RiskWeights&, const RiskWeights&) = default;
};

// Baseline planning values: tracked combat engineer vehicle (54 psi) with
// P = 5, H = 20, k_h = 15, R = 20, k_r = 30, mu = 0.1.
RiskWeights nominal_weights();
Vehicle nominal_vehicle();

// Throws ValidationError naming the field ("weights.k_h", "vehicle.vci50", ...).
void validate(const RiskWeights& weights);
void validate(const Vehicle& vehicle);

struct TacticalPicture {
  std::vector<CellIndex> enemy_cells;
  std::vector<CellIndex> history_cells;  // union of all prior route cells
};

// Per-cell composite cost and its decomposition, row-major like the grid.
// Masked cells carry p = h = r = 0 and c = mu; no arc ever enters them.
struct CostField {
  int n_rows = 0;
  int n_cols = 0;
  double mu = kDefaultMu;
  std::vector<double> total;  // c
  std::vector<double> soil;   // p
  std::vector<double> history;  // h
  std::vector<double> enemy;    // r
  std::vector<double> dist_history;  // d_h, cells; +inf when there is no history
  std::vector<double> dist_enemy;    // d_r, cells; +inf when there is no enemy activity

  std::size_t index(CellIndex cell) const {
    return static_cast<std::size_t>(cell.row) * static_cast<std::size_t>(n_cols) + static_cast<std::size_t>(cell.col);
  }
  double cost(CellIndex cell) const { return total[index(cell)]; }
};

// P * (vci50 - rci) when the soil is weaker than the vehicle needs, else 0.
double soil_penalty(double P, double vci50, double rci);

// coef * exp(-distance / decay); 0 for an infinite distance (empty source set).
double proximity_penalty(double coef, double distance, double decay);

// Exact Euclidean distance, in cell units, from every cell to the nearest
// source. All +inf when `sources` is empty. Throws ValidationError for an
// out-of-bounds source.
std::vector<double> distance_to_nearest(int n_rows, int n_cols, std::span<const CellIndex> sources);

CostField build_cost_field(const TerrainGrid& grid, const Vehicle& vehicle, const RiskWeights& weights,
                           const TacticalPicture& picture);

}  // namespace terraroute
