#include "terraroute/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "terraroute/cost_sum.hpp"
#include "terraroute/errors.hpp"
#include "terraroute/graph.hpp"
#include "terraroute/text.hpp"

namespace terraroute {

std::filesystem::path TerrainSource::resolved_path() const {
  if (!path) return {};
  std::filesystem::path p(*path);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p;
}

void validate_scenario(const Scenario& s) {
  if (s.terrain.path.has_value() == s.terrain.synthetic.has_value()) {
    throw ValidationError("exactly one of 'path' or 'synthetic' is required", "terrain");
  }
  if (s.terrain.path && s.terrain.path->empty()) throw ValidationError("must not be empty", "terrain.path");
  if (s.terrain.rci_scale) {
    const double f = *s.terrain.rci_scale;
    if (!std::isfinite(f) || f <= 0.0) {
      throw ValidationError("must be finite and > 0, got " + format_double(f), "terrain.rci_scale");
    }
  }
  validate(s.vehicle);
  validate(s.weights);
}

void validate_scenario(const Scenario& s, const TerrainGrid& grid) {
  validate_scenario(s);
  grid.require_traversable(s.start, "start");
  grid.require_traversable(s.end, "end");
  for (const auto& c : s.enemy_cells) grid.require_traversable(c, "enemy_cells");
  for (const auto& route : s.prior_routes) {
    for (const auto& c : route) grid.require_traversable(c, "prior_routes");
  }
}

TerrainGrid load_terrain(const TerrainSource& source) {
  if (source.path.has_value() == source.synthetic.has_value()) {
    throw ValidationError("exactly one of 'path' or 'synthetic' is required", "terrain");
  }
  TerrainGrid grid = [&] {
    if (source.path) return read_ascii_grid(source.resolved_path().string());
    const auto& syn = *source.synthetic;
    return generate_synthetic_terrain(syn.seed, syn.rows, syn.cols, syn.cell_size, syn.params);
  }();
  if (source.rci_scale) grid = scale_rci(grid, *source.rci_scale);
  return grid;
}

std::vector<CellIndex> union_of_routes(std::span<const std::vector<CellIndex>> routes) {
  std::vector<CellIndex> out;
  for (const auto& r : routes) out.insert(out.end(), r.begin(), r.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RiskBreakdown decompose_risk(std::span<const CellIndex> cells, const CostField& field) {
  CostSum soil, history, enemy, mu, total;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const auto k = field.index(cells[i]);
    soil += field.soil[k];
    history += field.history[k];
    enemy += field.enemy[k];
    mu += field.mu;
    total += field.total[k];
  }
  return {soil.value(), history.value(), enemy.value(), mu.value(), total.value()};
}

RunReport solve_phase(const Scenario& scenario, const TerrainGrid& grid, std::span<const CellIndex> history,
                      int phase) {
  const std::string label = "phase " + std::to_string(phase);
  TacticalPicture picture;
  picture.enemy_cells = scenario.enemy_cells;
  picture.history_cells.assign(history.begin(), history.end());

  const CostField field = build_cost_field(grid, scenario.vehicle, scenario.weights, picture);
  const GridGraph graph = build_graph(field, grid, scenario.start, scenario.end);
  Route route;
  try {
    route = solve_min_cost_path(graph);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(label + ": " + e.what());
  }

  RunReport report;
  report.phase = phase;
  report.verification = verify_flow_constraints(graph, route);
  if (!report.verification.passed()) {
    throw VerificationError(label + ": solved route failed flow verification: " + report.verification.summary());
  }
  const RiskBreakdown parts = decompose_risk(route, field);
  report.soil_risk = parts.soil;
  report.history_risk = parts.history;
  report.enemy_risk = parts.enemy;
  report.mu_total = parts.mu;
  report.objective = route.objective;
  const double sum = parts.soil + parts.history + parts.enemy + parts.mu;
  if (std::abs(sum - route.objective) > 1e-6 * std::max(1.0, std::abs(route.objective))) {
    throw VerificationError(label + ": risk decomposition " + format_double(sum) + " does not match objective " +
                format_double(route.objective));
  }
  report.step_count = route.step_count();
  report.length_km = static_cast<double>(report.step_count) * grid.cell_size() / 1000.0;
  report.route = std::move(route);
  return report;
}

TwoPhaseResult run_two_phase(const Scenario& scenario, const TerrainGrid& grid) {
  validate_scenario(scenario, grid);
  auto history = union_of_routes(scenario.prior_routes);
  TwoPhaseResult out;
  out.phase1 = solve_phase(scenario, grid, history, 1);

  std::vector<std::vector<CellIndex>> routes = scenario.prior_routes;
  routes.push_back(out.phase1.route.cells);
  history = union_of_routes(routes);
  out.phase2 = solve_phase(scenario, grid, history, 2);
  return out;
}

TwoPhaseResult run_two_phase(const Scenario& scenario) {
  validate_scenario(scenario);
  return run_two_phase(scenario, load_terrain(scenario.terrain));
}

std::vector<SuiteEntry> run_suite(std::span<const Scenario> scenarios) {
  struct CachedGrid {
    TerrainSource source;
    std::filesystem::path resolved;
    std::shared_ptr<const TerrainGrid> grid;
  };
  std::vector<CachedGrid> cache;

  std::vector<SuiteEntry> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) {
    SuiteEntry entry;
    entry.scenario = s;
    try {
      validate_scenario(s);
      const auto resolved = s.terrain.resolved_path();
      auto it = std::find_if(cache.begin(), cache.end(), [&](const CachedGrid& c) {
        return c.source == s.terrain && c.resolved == resolved;
      });
      if (it == cache.end()) {
        cache.push_back({s.terrain, resolved, std::make_shared<const TerrainGrid>(load_terrain(s.terrain))});
        it = cache.end() - 1;
      }
      entry.grid = it->grid;
      entry.result = run_two_phase(s, *entry.grid);
    } catch (const ValidationError& e) {
      entry.status = RunStatus::validation_error;
      entry.error = e.what();
    } catch (const ParseError& e) {
      entry.status = RunStatus::validation_error;
      entry.error = e.what();
    } catch (const InfeasibleError& e) {
      entry.status = RunStatus::infeasible;
      entry.error = e.what();
    } catch (const VerificationError& e) {
      entry.status = RunStatus::verification_failed;
      entry.error = e.what();
    } catch (const std::exception& e) {
      entry.status = RunStatus::error;
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SuiteEntry& a, const SuiteEntry& b) { return a.scenario.id < b.scenario.id; });
  return out;
}

}  // namespace terraroute
