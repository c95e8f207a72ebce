#include "terraroute/io.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "terraroute/errors.hpp"
#include "terraroute/text.hpp"

namespace terraroute {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string join(std::string_view prefix, std::string_view key) {
  if (prefix.empty()) return std::string(key);
  return std::string(prefix) + "." + std::string(key);
}

void require_object(const json& j, const std::string& field) {
  if (!j.is_object()) throw ValidationError("must be an object", field.empty() ? "document" : field);
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view prefix) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const auto a : allowed) known = known || key == a;
    if (!known) throw ValidationError("unknown field", join(prefix, key));
  }
}

const json& require_key(const json& obj, std::string_view key, std::string_view prefix) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) throw ValidationError("is required", join(prefix, key));
  return *it;
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ValidationError("must be a number", field);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError("must be finite", field);
  return v;
}

long long as_integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ValidationError("must be an integer", field);
  if (j.is_number_unsigned()) {
    const auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<long long>::max())) {
      throw ValidationError("is out of range", field);
    }
    return static_cast<long long>(u);
  }
  return j.get<long long>();
}

int as_int(const json& j, const std::string& field) {
  const auto v = as_integer(j, field);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ValidationError("is out of range", field);
  }
  return static_cast<int>(v);
}

std::string as_string(const json& j, const std::string& field) {
  if (!j.is_string()) throw ValidationError("must be a string", field);
  return j.get<std::string>();
}

CellIndex as_cell(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("must be a [row, col] pair", field);
  return {as_int(j[0], field + "[0]"), as_int(j[1], field + "[1]")};
}

std::vector<CellIndex> as_cells(const json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError("must be an array of [row, col] pairs", field);
  std::vector<CellIndex> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_cell(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

SyntheticTerrainSpec as_synthetic(const json& j) {
  const std::string prefix = "terrain.synthetic";
  require_object(j, prefix);
  reject_unknown(j, {"seed", "rows", "cols", "cell_size", "base_rci", "valley_depth", "valley_count", "smoothness"},
                 prefix);
  SyntheticTerrainSpec s;
  const auto& seed = require_key(j, "seed", prefix);
  if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<long long>() < 0)) {
    throw ValidationError("must be a non-negative integer", prefix + ".seed");
  }
  s.seed = seed.get<std::uint64_t>();
  s.rows = as_int(require_key(j, "rows", prefix), prefix + ".rows");
  s.cols = as_int(require_key(j, "cols", prefix), prefix + ".cols");
  s.cell_size = as_number(require_key(j, "cell_size", prefix), prefix + ".cell_size");
  s.params.base_rci = as_number(require_key(j, "base_rci", prefix), prefix + ".base_rci");
  s.params.valley_depth = as_number(require_key(j, "valley_depth", prefix), prefix + ".valley_depth");
  s.params.valley_count = as_int(require_key(j, "valley_count", prefix), prefix + ".valley_count");
  s.params.smoothness = as_number(require_key(j, "smoothness", prefix), prefix + ".smoothness");
  if (s.rows < 2) throw ValidationError("must be >= 2", prefix + ".rows");
  if (s.cols < 2) throw ValidationError("must be >= 2", prefix + ".cols");
  if (s.cell_size <= 0.0) throw ValidationError("must be > 0", prefix + ".cell_size");
  if (s.params.base_rci < 0.0) throw ValidationError("must be >= 0", prefix + ".base_rci");
  if (s.params.valley_depth < 0.0 || s.params.valley_depth > s.params.base_rci) {
    throw ValidationError("must be within [0, base_rci]", prefix + ".valley_depth");
  }
  if (s.params.valley_count < 0) throw ValidationError("must be >= 0", prefix + ".valley_count");
  if (s.params.smoothness <= 0.0) throw ValidationError("must be > 0", prefix + ".smoothness");
  return s;
}

void parse_planning_fields(const json& doc, Scenario& s);

TerrainSource terrain_from_json(const json& terrain, const std::filesystem::path& base_dir) {
  require_object(terrain, "terrain");
  reject_unknown(terrain, {"path", "synthetic", "rci_scale"}, "terrain");
  TerrainSource t;
  if (const auto it = terrain.find("path"); it != terrain.end()) t.path = as_string(*it, "terrain.path");
  if (const auto it = terrain.find("synthetic"); it != terrain.end()) t.synthetic = as_synthetic(*it);
  if (const auto it = terrain.find("rci_scale"); it != terrain.end()) {
    t.rci_scale = as_number(*it, "terrain.rci_scale");
  }
  if (t.path.has_value() == t.synthetic.has_value()) {
    throw ValidationError("exactly one of 'path' or 'synthetic' is required", "terrain");
  }
  if (t.rci_scale && *t.rci_scale <= 0.0) throw ValidationError("must be > 0", "terrain.rci_scale");
  t.base_dir = base_dir;
  return t;
}

Scenario scenario_from_json(const json& doc, const std::filesystem::path& base_dir) {
  require_object(doc, "");
  reject_unknown(doc, {"schema_version", "id", "terrain", "vehicle", "weights", "start", "end", "enemy_cells",
                       "prior_routes"},
                 "");
  const auto version = as_integer(require_key(doc, "schema_version", ""), "schema_version");
  if (version != kScenarioSchemaVersion) {
    throw ValidationError("unsupported version " + std::to_string(version), "schema_version");
  }

  Scenario s;
  if (const auto it = doc.find("id"); it != doc.end()) s.id = as_string(*it, "id");

  s.terrain = terrain_from_json(require_key(doc, "terrain", ""), base_dir);

  parse_planning_fields(doc, s);
  validate_scenario(s);
  return s;
}

void parse_planning_fields(const json& doc, Scenario& s) {
  const auto& vehicle = require_key(doc, "vehicle", "");
  require_object(vehicle, "vehicle");
  reject_unknown(vehicle, {"name", "vci50"}, "vehicle");
  if (const auto it = vehicle.find("name"); it != vehicle.end()) s.vehicle.name = as_string(*it, "vehicle.name");
  s.vehicle.vci50 = as_number(require_key(vehicle, "vci50", "vehicle"), "vehicle.vci50");

  const auto& weights = require_key(doc, "weights", "");
  require_object(weights, "weights");
  reject_unknown(weights, {"P", "H", "R", "k_h", "k_r", "mu"}, "weights");
  s.weights.P = as_number(require_key(weights, "P", "weights"), "weights.P");
  s.weights.H = as_number(require_key(weights, "H", "weights"), "weights.H");
  s.weights.R = as_number(require_key(weights, "R", "weights"), "weights.R");
  s.weights.k_h = as_number(require_key(weights, "k_h", "weights"), "weights.k_h");
  s.weights.k_r = as_number(require_key(weights, "k_r", "weights"), "weights.k_r");
  s.weights.mu = kDefaultMu;
  if (const auto it = weights.find("mu"); it != weights.end()) s.weights.mu = as_number(*it, "weights.mu");

  s.start = as_cell(require_key(doc, "start", ""), "start");
  s.end = as_cell(require_key(doc, "end", ""), "end");
  if (const auto it = doc.find("enemy_cells"); it != doc.end()) s.enemy_cells = as_cells(*it, "enemy_cells");
  if (const auto it = doc.find("prior_routes"); it != doc.end()) {
    if (!it->is_array()) throw ValidationError("must be an array of routes", "prior_routes");
    for (std::size_t i = 0; i < it->size(); ++i) {
      s.prior_routes.push_back(as_cells((*it)[i], "prior_routes[" + std::to_string(i) + "]"));
    }
  }
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

ordered_json cell_json(CellIndex c) { return ordered_json::array({c.row, c.col}); }

ordered_json cells_json(std::span<const CellIndex> cells) {
  auto arr = ordered_json::array();
  for (const auto& c : cells) arr.push_back(cell_json(c));
  return arr;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  return scenario_from_json(parse_json(json_text, "scenario"), base_dir);
}

Scenario load_scenario(const std::filesystem::path& path) {
  Scenario s = parse_scenario(read_text_file(path), path.parent_path());
  if (s.id.empty()) s.id = path.stem().string();
  return s;
}

std::string save_scenario(const Scenario& s) {
  ordered_json doc;
  doc["schema_version"] = kScenarioSchemaVersion;
  doc["id"] = s.id;
  ordered_json terrain = ordered_json::object();
  if (s.terrain.path) terrain["path"] = *s.terrain.path;
  if (s.terrain.synthetic) {
    const auto& syn = *s.terrain.synthetic;
    ordered_json j;
    j["seed"] = syn.seed;
    j["rows"] = syn.rows;
    j["cols"] = syn.cols;
    j["cell_size"] = syn.cell_size;
    j["base_rci"] = syn.params.base_rci;
    j["valley_depth"] = syn.params.valley_depth;
    j["valley_count"] = syn.params.valley_count;
    j["smoothness"] = syn.params.smoothness;
    terrain["synthetic"] = std::move(j);
  }
  if (s.terrain.rci_scale) terrain["rci_scale"] = *s.terrain.rci_scale;
  doc["terrain"] = std::move(terrain);
  doc["vehicle"] = {{"name", s.vehicle.name}, {"vci50", s.vehicle.vci50}};
  doc["weights"] = {{"P", s.weights.P},     {"H", s.weights.H},     {"R", s.weights.R},
                    {"k_h", s.weights.k_h}, {"k_r", s.weights.k_r}, {"mu", s.weights.mu}};
  doc["start"] = cell_json(s.start);
  doc["end"] = cell_json(s.end);
  doc["enemy_cells"] = cells_json(s.enemy_cells);
  auto routes = ordered_json::array();
  for (const auto& r : s.prior_routes) routes.push_back(cells_json(r));
  doc["prior_routes"] = std::move(routes);
  return doc.dump(2) + "\n";
}

TerrainSource parse_terrain_source(std::string_view json_text, const std::filesystem::path& base_dir) {
  return terrain_from_json(parse_json(json_text, "terrain"), base_dir);
}

Scenario parse_session_scenario(std::string_view json_text) {
  const json doc = parse_json(json_text, "scenario");
  require_object(doc, "");
  reject_unknown(doc, {"id", "vehicle", "weights", "start", "end", "enemy_cells"}, "");
  Scenario s;
  if (const auto it = doc.find("id"); it != doc.end()) s.id = as_string(*it, "id");
  parse_planning_fields(doc, s);
  validate(s.vehicle);
  validate(s.weights);
  return s;
}

std::string session_scenario_json(const Scenario& s) {
  ordered_json doc;
  doc["id"] = s.id;
  doc["vehicle"] = {{"name", s.vehicle.name}, {"vci50", s.vehicle.vci50}};
  doc["weights"] = {{"P", s.weights.P},     {"H", s.weights.H},     {"R", s.weights.R},
                    {"k_h", s.weights.k_h}, {"k_r", s.weights.k_r}, {"mu", s.weights.mu}};
  doc["start"] = cell_json(s.start);
  doc["end"] = cell_json(s.end);
  doc["enemy_cells"] = cells_json(s.enemy_cells);
  return doc.dump();
}

std::vector<SuiteDocument> load_suite(const std::filesystem::path& path) {
  const json doc = parse_json(read_text_file(path), "suite " + path.string());
  require_object(doc, "suite");
  reject_unknown(doc, {"schema_version", "scenarios"}, "suite");
  const auto version = as_integer(require_key(doc, "schema_version", "suite"), "suite.schema_version");
  if (version != kScenarioSchemaVersion) {
    throw ValidationError("unsupported version " + std::to_string(version), "suite.schema_version");
  }
  const auto& list = require_key(doc, "scenarios", "suite");
  if (!list.is_array()) throw ValidationError("must be an array", "suite.scenarios");

  std::vector<SuiteDocument> out;
  const auto base = path.parent_path();
  for (std::size_t i = 0; i < list.size(); ++i) {
    SuiteDocument d;
    const auto& entry = list[i];
    try {
      if (entry.is_string()) {
        d.label = entry.get<std::string>();
        std::filesystem::path p(d.label);
        if (p.is_relative()) p = base / p;
        d.scenario = load_scenario(p);
      } else {
        d.label = "#" + std::to_string(i);
        d.scenario = scenario_from_json(entry, base);
        if (d.scenario->id.empty()) d.scenario->id = "scenario" + std::to_string(i);
      }
    } catch (const Error& e) {
      d.error = e.what();
    }
    out.push_back(std::move(d));
  }
  return out;
}

RouteFormat parse_route_format(std::string_view name) {
  if (name == "csv") return RouteFormat::csv;
  if (name == "geojson") return RouteFormat::geojson;
  throw UsageError("route format must be 'csv' or 'geojson', got '" + std::string(name) + "'");
}

std::string export_route(const Route& route, const TerrainGrid& grid, RouteFormat format) {
  if (format == RouteFormat::csv) {
    std::string out = "step,row,col,easting,northing\n";
    for (std::size_t i = 0; i < route.cells.size(); ++i) {
      const auto c = route.cells[i];
      const auto p = grid.cell_center(c);
      out += std::to_string(i) + "," + std::to_string(c.row) + "," + std::to_string(c.col) + "," +
             format_double(p.easting) + "," + format_double(p.northing) + "\n";
    }
    return out;
  }
  auto coords = ordered_json::array();
  for (const auto& c : route.cells) {
    const auto p = grid.cell_center(c);
    coords.push_back(ordered_json::array({p.easting, p.northing}));
  }
  ordered_json feature;
  feature["type"] = "Feature";
  feature["properties"] = {{"objective", route.objective}, {"step_count", route.step_count()}};
  feature["geometry"] = {{"type", "LineString"}, {"coordinates", std::move(coords)}};
  return feature.dump() + "\n";
}

std::vector<std::map<std::string, std::string>> parse_csv(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      const auto line = trim(text.substr(pos, end - pos));
      if (!line.empty()) lines.emplace_back(line);
      pos = end + 1;
    }
  }
  auto split = [](std::string_view line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      out.emplace_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return out;
  };
  std::vector<std::map<std::string, std::string>> rows;
  if (lines.empty()) return rows;
  const auto header = split(lines[0]);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i]);
    if (fields.size() != header.size()) {
      throw ParseError("csv line " + std::to_string(i + 1) + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    }
    std::map<std::string, std::string> row;
    for (std::size_t k = 0; k < header.size(); ++k) row[header[k]] = fields[k];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CellIndex> parse_route_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  std::vector<CellIndex> cells;
  cells.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = rows[i].find("row");
    const auto c = rows[i].find("col");
    if (r == rows[i].end() || c == rows[i].end()) throw ParseError("route csv needs 'row' and 'col' columns");
    const auto rv = parse_integer(r->second);
    const auto cv = parse_integer(c->second);
    if (!rv || !cv) throw ParseError("route csv line " + std::to_string(i + 2) + ": non-integer cell index");
    cells.push_back({static_cast<int>(*rv), static_cast<int>(*cv)});
  }
  return cells;
}

ReportRow make_report_row(const Scenario& scenario, const RunReport& report) {
  return {scenario.id, scenario.vehicle, scenario.weights, scenario.start, scenario.end, scenario.enemy_cells, report};
}

std::vector<ReportRow> make_report_rows(const Scenario& scenario, const TwoPhaseResult& result) {
  return {make_report_row(scenario, result.phase1), make_report_row(scenario, result.phase2)};
}

namespace {

constexpr std::array<std::string_view, 22> kReportColumns{
    "scenario",  "phase",     "vci50",      "P",           "H",            "R",
    "k_h",       "k_r",       "mu",         "start_row",   "start_col",    "end_row",
    "end_col",   "enemy_cells", "soil_risk", "history_risk", "enemy_risk", "risk_sum",
    "mu_total",  "objective", "step_count", "length_km",
};

}  // namespace

std::span<const std::string_view> report_columns() { return kReportColumns; }

std::string export_report(std::span<const ReportRow> rows) {
  std::string out;
  for (std::size_t i = 0; i < kReportColumns.size(); ++i) {
    if (i > 0) out += ',';
    out += kReportColumns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    std::string enemy;
    for (const auto& c : row.enemy_cells) {
      if (!enemy.empty()) enemy += ' ';
      enemy += std::to_string(c.row) + ":" + std::to_string(c.col);
    }
    const auto& r = row.report;
    const std::array<std::string, 22> fields{
        row.scenario_id,
        std::to_string(r.phase),
        format_double(row.vehicle.vci50),
        format_double(row.weights.P),
        format_double(row.weights.H),
        format_double(row.weights.R),
        format_double(row.weights.k_h),
        format_double(row.weights.k_r),
        format_double(row.weights.mu),
        std::to_string(row.start.row),
        std::to_string(row.start.col),
        std::to_string(row.end.row),
        std::to_string(row.end.col),
        enemy,
        format_double(r.soil_risk),
        format_double(r.history_risk),
        format_double(r.enemy_risk),
        format_double(r.risk_sum()),
        format_double(r.mu_total),
        format_double(r.objective),
        std::to_string(r.step_count),
        format_double(r.length_km),
    };
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace terraroute
