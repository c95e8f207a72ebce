#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "terraroute/risk.hpp"
#include "terraroute/solver.hpp"
#include "terraroute/terrain.hpp"

namespace terraroute {

struct SyntheticTerrainSpec {
  std::uint64_t seed = 0;
  int rows = 100;
  int cols = 100;
  double cell_size = 90.0;
  SyntheticTerrainParams params;

  friend bool operator==(const SyntheticTerrainSpec& a, const SyntheticTerrainSpec& b) {
    return a.seed == b.seed && a.rows == b.rows && a.cols == b.cols && a.cell_size == b.cell_size &&
           a.params.base_rci == b.params.base_rci && a.params.valley_depth == b.params.valley_depth &&
           a.params.valley_count == b.params.valley_count && a.params.smoothness == b.params.smoothness;
  }
};

// Where a scenario's RCI raster comes from: exactly one of `path` (an ESRI
// ASCII grid, relative paths resolved against `base_dir`) or `synthetic`.
// `rci_scale`, when present, is applied after loading.
struct TerrainSource {
  std::optional<std::string> path;
  std::optional<SyntheticTerrainSpec> synthetic;
  std::optional<double> rci_scale;
  std::filesystem::path base_dir;  // not part of the document

  std::filesystem::path resolved_path() const;

  friend bool operator==(const TerrainSource& a, const TerrainSource& b) {
    return a.path == b.path && a.synthetic == b.synthetic && a.rci_scale == b.rci_scale;
  }
};

struct Scenario {
  std::string id;
  TerrainSource terrain;
  Vehicle vehicle;
  RiskWeights weights;
  CellIndex start;
  CellIndex end;
  std::vector<CellIndex> enemy_cells;
  std::vector<std::vector<CellIndex>> prior_routes;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Checks everything that does not need the raster (weights, vehicle, terrain
// source shape). Throws ValidationError naming the field.
void validate_scenario(const Scenario& scenario);
// Additionally checks that every referenced cell is inside `grid` and unmasked.
void validate_scenario(const Scenario& scenario, const TerrainGrid& grid);

TerrainGrid load_terrain(const TerrainSource& source);

// Sorted, de-duplicated union of the cells of all routes.
std::vector<CellIndex> union_of_routes(std::span<const std::vector<CellIndex>> routes);

// Per-term totals over the cells a route enters (every cell but the first).
struct RiskBreakdown {
  double soil = 0.0;
  double history = 0.0;
  double enemy = 0.0;
  double mu = 0.0;
  double total = 0.0;  // sum of composite costs; equals the route objective

  double risk_sum() const { return soil + history + enemy; }
};

RiskBreakdown decompose_risk(std::span<const CellIndex> cells, const CostField& field);
inline RiskBreakdown decompose_risk(const Route& route, const CostField& field) {
  return decompose_risk(route.cells, field);
}

// One row of the results table: a solved phase with its decomposition.
struct RunReport {
  int phase = 1;
  double soil_risk = 0.0;
  double history_risk = 0.0;
  double enemy_risk = 0.0;
  double mu_total = 0.0;
  double objective = 0.0;  // includes mu_total
  std::size_t step_count = 0;
  double length_km = 0.0;  // step_count * cell_size
  Route route;
  FlowVerification verification;

  // Soil + history + enemy, i.e. the objective without the floor cost.
  double risk_sum() const { return soil_risk + history_risk + enemy_risk; }
};

// Solves one phase with the given history cells. Throws InfeasibleError
// prefixed with the phase label, and VerificationError if the solved route fails flow
// verification or its decomposition does not add up.
RunReport solve_phase(const Scenario& scenario, const TerrainGrid& grid, std::span<const CellIndex> history,
                      int phase);

struct TwoPhaseResult {
  RunReport phase1;
  RunReport phase2;
};

// Phase 1 plans with the scenario's prior routes as history; phase 2 re-plans
// after adding the phase-1 route to the history.
TwoPhaseResult run_two_phase(const Scenario& scenario, const TerrainGrid& grid);
TwoPhaseResult run_two_phase(const Scenario& scenario);

enum class RunStatus { ok, validation_error, infeasible, verification_failed, error };

struct SuiteEntry {
  Scenario scenario;
  RunStatus status = RunStatus::ok;
  std::optional<TwoPhaseResult> result;
  std::shared_ptr<const TerrainGrid> grid;  // terrain the runs were solved on, when it loaded
  std::string error;
};

// Runs every scenario independently; a failing scenario is recorded and the
// rest still run. Output is ordered by scenario id (stable for equal ids).
std::vector<SuiteEntry> run_suite(std::span<const Scenario> scenarios);

}  // namespace terraroute
