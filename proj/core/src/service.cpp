#include "terraroute/service.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "terraroute/errors.hpp"
#include "terraroute/io.hpp"
#include "terraroute/text.hpp"

namespace terraroute {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ServiceResponse json_response(int status, const ordered_json& body) { return {status, "application/json", body.dump()}; }

ServiceResponse error_response(int status, const std::string& message, const std::string& field = {}) {
  ordered_json body;
  body["error"] = message;
  if (!field.empty()) body["field"] = field;
  return json_response(status, body);
}

ordered_json cell_json(CellIndex c) { return ordered_json::array({c.row, c.col}); }

ordered_json cells_json(const std::vector<CellIndex>& cells) {
  auto arr = ordered_json::array();
  for (const auto& c : cells) arr.push_back(cell_json(c));
  return arr;
}

ordered_json report_json(const RunReport& r) {
  ordered_json j;
  j["phase"] = r.phase;
  j["soil_risk"] = r.soil_risk;
  j["history_risk"] = r.history_risk;
  j["enemy_risk"] = r.enemy_risk;
  j["risk_sum"] = r.risk_sum();
  j["mu_total"] = r.mu_total;
  j["objective"] = r.objective;
  j["step_count"] = r.step_count;
  j["length_km"] = r.length_km;
  return j;
}

ordered_json verification_json(const FlowVerification& v) {
  ordered_json j;
  j["passed"] = v.passed();
  auto checks = ordered_json::array();
  for (const auto& c : v.checks) {
    ordered_json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    if (!c.passed) cj["detail"] = c.detail;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

ordered_json terrain_summary(const TerrainGrid& g) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (g.nodata_mask()[i] != 0) continue;
    lo = std::min(lo, g.rci_values()[i]);
    hi = std::max(hi, g.rci_values()[i]);
  }
  ordered_json j;
  j["n_rows"] = g.n_rows();
  j["n_cols"] = g.n_cols();
  j["cell_size"] = g.cell_size();
  j["origin"] = ordered_json::array({g.origin().easting, g.origin().northing});
  j["nodata_count"] = g.nodata_count();
  j["rci_min"] = std::isfinite(lo) ? ordered_json(lo) : ordered_json(nullptr);
  j["rci_max"] = std::isfinite(hi) ? ordered_json(hi) : ordered_json(nullptr);

  // Block means over stride x stride windows; null where a block is all nodata.
  const int side = std::max(g.n_rows(), g.n_cols());
  const int stride = (side + PlannerService::kPreviewMaxSide - 1) / PlannerService::kPreviewMaxSide;
  const int prows = (g.n_rows() + stride - 1) / stride;
  const int pcols = (g.n_cols() + stride - 1) / stride;
  auto values = ordered_json::array();
  for (int pr = 0; pr < prows; ++pr) {
    auto row = ordered_json::array();
    for (int pc = 0; pc < pcols; ++pc) {
      double sum = 0.0;
      int count = 0;
      for (int r = pr * stride; r < std::min(g.n_rows(), (pr + 1) * stride); ++r) {
        for (int c = pc * stride; c < std::min(g.n_cols(), (pc + 1) * stride); ++c) {
          if (g.is_nodata({r, c})) continue;
          sum += g.rci({r, c});
          ++count;
        }
      }
      row.push_back(count > 0 ? ordered_json(sum / count) : ordered_json(nullptr));
    }
    values.push_back(std::move(row));
  }
  j["preview"] = {{"rows", prows}, {"cols", pcols}, {"stride", stride}, {"values", std::move(values)}};
  return j;
}

std::string route_id_for(const std::vector<CellIndex>& cells, const RunReport& report) {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& c : cells) {
    mix(static_cast<std::uint32_t>(c.row));
    mix(static_cast<std::uint32_t>(c.col));
  }
  mix(std::bit_cast<std::uint64_t>(report.objective));
  mix(static_cast<std::uint64_t>(report.phase));
  char buf[24];
  std::snprintf(buf, sizeof buf, "rt-%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

void PlannerService::load_terrain(TerrainGrid grid) {
  std::unique_lock lock(state_mutex_);
  terrain_ = std::make_shared<const TerrainGrid>(std::move(grid));
  scenario_.reset();
  history_.clear();
}

ServiceResponse PlannerService::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    if (path == "/terrain") {
      if (method == "PUT") return put_terrain(body);
      if (method == "GET") return get_terrain();
    } else if (path == "/terrain/raster") {
      if (method == "GET") return get_terrain_raster();
    } else if (path == "/scenario") {
      if (method == "PUT") return put_scenario(body);
      if (method == "GET") return get_scenario();
    } else if (path == "/solve") {
      if (method == "POST") return solve();
    } else if (path == "/history/commit") {
      if (method == "POST") return commit(body);
    } else if (path == "/history") {
      if (method == "GET") return get_history();
      if (method == "DELETE") return clear_history();
    } else {
      return error_response(404, "no such endpoint: " + std::string(path));
    }
    return error_response(405, "method " + std::string(method) + " not allowed on " + std::string(path));
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

ServiceResponse PlannerService::put_terrain(std::string_view body) {
  try {
    const auto text = trim(body);
    TerrainGrid grid = [&] {
      if (!text.empty() && text.front() == '{') {
        const TerrainSource source = parse_terrain_source(text);
        if (source.path) throw ValidationError("file paths are not accepted over HTTP", "terrain.path");
        return terraroute::load_terrain(source);
      }
      return parse_ascii_grid(text);
    }();
    const auto summary = terrain_summary(grid);
    load_terrain(std::move(grid));
    return json_response(200, summary);
  } catch (const ValidationError& e) {
    return error_response(400, e.what(), e.field());
  } catch (const ParseError& e) {
    return error_response(400, e.what());
  }
}

ServiceResponse PlannerService::get_terrain() const {
  std::shared_lock lock(state_mutex_);
  if (!terrain_) return error_response(409, "no terrain loaded");
  return json_response(200, terrain_summary(*terrain_));
}

ServiceResponse PlannerService::get_terrain_raster() const {
  std::shared_ptr<const TerrainGrid> grid;
  {
    std::shared_lock lock(state_mutex_);
    grid = terrain_;
  }
  if (!grid) return error_response(409, "no terrain loaded");
  ordered_json j;
  j["n_rows"] = grid->n_rows();
  j["n_cols"] = grid->n_cols();
  auto values = ordered_json::array();
  for (std::size_t i = 0; i < grid->cell_count(); ++i) {
    values.push_back(grid->nodata_mask()[i] != 0 ? ordered_json(nullptr) : ordered_json(grid->rci_values()[i]));
  }
  j["values"] = std::move(values);
  return json_response(200, j);
}

ServiceResponse PlannerService::put_scenario(std::string_view body) {
  try {
    Scenario s = parse_session_scenario(body);
    std::unique_lock lock(state_mutex_);
    if (!terrain_) return error_response(409, "no terrain loaded");
    terrain_->require_traversable(s.start, "start");
    terrain_->require_traversable(s.end, "end");
    for (const auto& c : s.enemy_cells) terrain_->require_traversable(c, "enemy_cells");
    scenario_ = s;
    return {200, "application/json", session_scenario_json(s)};
  } catch (const ValidationError& e) {
    return error_response(400, e.what(), e.field());
  } catch (const ParseError& e) {
    return error_response(400, e.what());
  }
}

ServiceResponse PlannerService::get_scenario() const {
  std::shared_lock lock(state_mutex_);
  if (!scenario_) return error_response(409, "no scenario defined");
  return {200, "application/json", session_scenario_json(*scenario_)};
}

ServiceResponse PlannerService::solve() const {
  std::shared_ptr<const TerrainGrid> grid;
  Scenario scenario;
  std::vector<CellIndex> history;
  int phase = 1;
  {
    std::shared_lock lock(state_mutex_);
    if (!terrain_) return error_response(409, "no terrain loaded");
    if (!scenario_) return error_response(409, "no scenario defined");
    grid = terrain_;
    scenario = *scenario_;
    std::vector<std::vector<CellIndex>> routes;
    for (const auto& c : history_) routes.push_back(c.route.cells);
    history = union_of_routes(routes);
    phase = static_cast<int>(history_.size()) + 1;
  }

  RunReport report;
  try {
    report = solve_phase(scenario, *grid, history, phase);
  } catch (const InfeasibleError& e) {
    ordered_json body;
    body["error"] = e.what();
    body["terminal"] = "end";
    body["cell"] = cell_json(scenario.end);
    return json_response(422, body);
  } catch (const ValidationError& e) {
    return error_response(400, e.what(), e.field());
  }

  const auto id = route_id_for(report.route.cells, report);
  const auto rjson = report_json(report);
  ordered_json body;
  body["route_id"] = id;
  body["phase"] = phase;
  body["cells"] = cells_json(report.route.cells);
  auto coords = ordered_json::array();
  for (const auto& c : report.route.cells) {
    const auto p = grid->cell_center(c);
    coords.push_back(ordered_json::array({p.easting, p.northing}));
  }
  body["coordinates"] = std::move(coords);
  body["report"] = rjson;
  body["verification"] = verification_json(report.verification);
  {
    std::lock_guard lock(solved_mutex_);
    solved_.insert_or_assign(id, SolvedRoute{report.route.cells, rjson.dump()});
  }
  return json_response(200, body);
}

ServiceResponse PlannerService::commit(std::string_view body) {
  std::string id;
  try {
    const json doc = json::parse(body.begin(), body.end());
    if (!doc.is_object() || !doc.contains("route_id") || !doc["route_id"].is_string()) {
      return error_response(400, "body must be {\"route_id\": \"...\"}", "route_id");
    }
    for (const auto& [key, value] : doc.items()) {
      if (key != "route_id") return error_response(400, "unknown field", key);
    }
    id = doc["route_id"].get<std::string>();
  } catch (const json::parse_error& e) {
    return error_response(400, std::string("malformed JSON: ") + e.what());
  }

  SolvedRoute route;
  {
    std::lock_guard lock(solved_mutex_);
    const auto it = solved_.find(id);
    if (it == solved_.end()) return error_response(409, "unknown route_id " + id, "route_id");
    route = it->second;
  }
  std::unique_lock lock(state_mutex_);
  for (const auto& c : history_) {
    if (c.route_id == id) return error_response(409, "route " + id + " is already committed", "route_id");
  }
  for (const auto& c : route.cells) {
    if (!terrain_ || !terrain_->in_bounds(c) || terrain_->is_nodata(c)) {
      return error_response(409, "route " + id + " does not belong to the loaded terrain", "route_id");
    }
  }
  history_.push_back({id, std::move(route)});
  ordered_json out;
  out["route_id"] = id;
  out["history_size"] = history_.size();
  return json_response(200, out);
}

ServiceResponse PlannerService::get_history() const {
  std::shared_lock lock(state_mutex_);
  ordered_json j;
  auto routes = ordered_json::array();
  for (const auto& c : history_) {
    ordered_json r;
    r["route_id"] = c.route_id;
    r["cells"] = cells_json(c.route.cells);
    r["report"] = ordered_json::parse(c.route.report_json);
    routes.push_back(std::move(r));
  }
  j["routes"] = std::move(routes);
  return json_response(200, j);
}

ServiceResponse PlannerService::clear_history() {
  std::unique_lock lock(state_mutex_);
  history_.clear();
  return json_response(200, ordered_json{{"routes", ordered_json::array()}});
}

}  // namespace terraroute
