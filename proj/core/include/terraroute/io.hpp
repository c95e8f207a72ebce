#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "terraroute/scenario.hpp"

namespace terraroute {

inline constexpr int kScenarioSchemaVersion = 1;

// Scenario documents are strict JSON: unknown keys are rejected, every
// numeric field must be finite, and the only defaulted coefficient is
// weights.mu (0.1). Optional keys: id, vehicle.name, terrain.rci_scale,
// enemy_cells, prior_routes. See docs/formats.md for the schema.
//
// Throws ParseError for malformed JSON and ValidationError (with the dotted
// field name) for schema or constraint violations.
Scenario parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

// Canonical document text: fixed key order, defaults written out, two-space
// indent, trailing newline.
std::string save_scenario(const Scenario& scenario);

// The terrain-free part of a scenario, as exchanged with the planning
// service: optional id, vehicle, weights, start, end, optional enemy_cells.
// Same strictness as parse_scenario. The returned scenario has no terrain.
Scenario parse_session_scenario(std::string_view json_text);
std::string session_scenario_json(const Scenario& scenario);

// A standalone terrain block: {"path": ...} or {"synthetic": {...}}, plus
// optional "rci_scale". Same keys and checks as a scenario's "terrain".
TerrainSource parse_terrain_source(std::string_view json_text, const std::filesystem::path& base_dir = {});

// A suite file lists scenario documents, either as paths relative to the
// suite file or inline objects. Each entry is loaded independently so one
// bad document does not prevent the others from running.
struct SuiteDocument {
  std::string label;  // path as written, or "#<index>" for inline entries
  std::optional<Scenario> scenario;
  std::string error;
};
std::vector<SuiteDocument> load_suite(const std::filesystem::path& path);

enum class RouteFormat { csv, geojson };
// Throws UsageError for anything but "csv" or "geojson".
RouteFormat parse_route_format(std::string_view name);

// CSV: `step,row,col,easting,northing`, one row per cell, cell-center
// coordinates. GeoJSON: one Feature whose geometry is a LineString of the
// same cell centers.
std::string export_route(const Route& route, const TerrainGrid& grid, RouteFormat format);

// Reads the cells back from a route CSV (only the row and col columns are used).
std::vector<CellIndex> parse_route_csv(std::string_view text);

struct ReportRow {
  std::string scenario_id;
  Vehicle vehicle;
  RiskWeights weights;
  CellIndex start;
  CellIndex end;
  std::vector<CellIndex> enemy_cells;
  RunReport report;
};

ReportRow make_report_row(const Scenario& scenario, const RunReport& report);
std::vector<ReportRow> make_report_rows(const Scenario& scenario, const TwoPhaseResult& result);

// Column order of the results table.
std::span<const std::string_view> report_columns();

// Header plus one line per row, in the order given.
std::string export_report(std::span<const ReportRow> rows);

// Minimal RFC-4180-free CSV reader for the files this library writes: no
// quoting, comma separated, first line is the header.
std::vector<std::map<std::string, std::string>> parse_csv(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
// Writes through a temporary sibling file and renames it into place.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace terraroute
