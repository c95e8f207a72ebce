#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "terraroute/scenario.hpp"
#include "terraroute/terrain.hpp"

namespace terraroute {

struct ServiceResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Single-session planning state behind the HTTP API.
//
//   PUT    /terrain          ESRI ASCII grid text, or JSON {"synthetic": {...}, "rci_scale": x}
//   GET    /terrain          grid summary and downsampled preview
//   GET    /terrain/raster   full RCI field, row-major, null for nodata
//   PUT    /scenario         vehicle, weights, start, end, enemy_cells
//   GET    /scenario
//   POST   /solve            route + decomposition against committed history
//   POST   /history/commit   {"route_id": "..."}
//   GET    /history
//   DELETE /history
//
// Loading terrain discards the scenario and history. Solves read a snapshot
// of the state and never modify it; only the scenario and history endpoints
// mutate. Thread-safe.
class PlannerService {
 public:
  static constexpr int kPreviewMaxSide = 128;

  PlannerService() = default;

  void load_terrain(TerrainGrid grid);

  ServiceResponse handle(std::string_view method, std::string_view path, std::string_view body = {});

  ServiceResponse put_terrain(std::string_view body);
  ServiceResponse get_terrain() const;
  ServiceResponse get_terrain_raster() const;
  ServiceResponse put_scenario(std::string_view body);
  ServiceResponse get_scenario() const;
  ServiceResponse solve() const;
  ServiceResponse commit(std::string_view body);
  ServiceResponse get_history() const;
  ServiceResponse clear_history();

 private:
  struct SolvedRoute {
    std::vector<CellIndex> cells;
    std::string report_json;
  };
  struct CommittedRoute {
    std::string route_id;
    SolvedRoute route;
  };

  mutable std::shared_mutex state_mutex_;
  std::shared_ptr<const TerrainGrid> terrain_;
  std::optional<Scenario> scenario_;
  std::vector<CommittedRoute> history_;

  // Memo of solve results by route id so they can be committed later. Not
  // observable state: ids are content hashes, so responses do not depend on it.
  mutable std::mutex solved_mutex_;
  mutable std::map<std::string, SolvedRoute> solved_;
};

}  // namespace terraroute
