#include "terraroute_tools/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <set>

#include <CLI11.hpp>

#include "terraroute/errors.hpp"
#include "terraroute/io.hpp"
#include "terraroute/scenario.hpp"
#include "terraroute/text.hpp"

namespace terraroute::cli {
namespace {

namespace fs = std::filesystem;

struct Overrides {
  std::optional<double> vci50, P, H, R, k_h, k_r, mu, rci_scale;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--vci50", vci50, "Override vehicle.vci50");
    cmd.add_option("--P", P, "Override weights.P");
    cmd.add_option("--H", H, "Override weights.H");
    cmd.add_option("--R", R, "Override weights.R");
    cmd.add_option("--k_h", k_h, "Override weights.k_h");
    cmd.add_option("--k_r", k_r, "Override weights.k_r");
    cmd.add_option("--mu", mu, "Override weights.mu");
    cmd.add_option("--rci-scale", rci_scale, "Override terrain.rci_scale");
  }

  void apply(Scenario& s) const {
    if (vci50) s.vehicle.vci50 = *vci50;
    if (P) s.weights.P = *P;
    if (H) s.weights.H = *H;
    if (R) s.weights.R = *R;
    if (k_h) s.weights.k_h = *k_h;
    if (k_r) s.weights.k_r = *k_r;
    if (mu) s.weights.mu = *mu;
    if (rci_scale) s.terrain.rci_scale = *rci_scale;
    validate_scenario(s);
  }
};

// route.csv -> route-phase1.csv
fs::path with_suffix(const fs::path& path, const std::string& suffix) {
  fs::path out = path;
  out.replace_filename(path.stem().string() + suffix + path.extension().string());
  return out;
}

RouteFormat format_for(const std::string& requested, const fs::path& path) {
  if (!requested.empty()) return parse_route_format(requested);
  const auto ext = path.extension().string();
  return ext == ".geojson" || ext == ".json" ? RouteFormat::geojson : RouteFormat::csv;
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

void print_summary(std::ostream& out, const std::string& id, const RunReport& r) {
  out << id << " phase " << r.phase << ": objective=" << format_double(r.objective) << " steps=" << r.step_count
      << " length_km=" << format_double(r.length_km) << "\n";
}

int exit_code_for(RunStatus status) {
  switch (status) {
    case RunStatus::ok: return kExitOk;
    case RunStatus::infeasible: return kExitInfeasible;
    case RunStatus::verification_failed: return kExitVerification;
    case RunStatus::validation_error:
    case RunStatus::error: return kExitUsage;
  }
  return kExitUsage;
}

struct SolveArgs {
  std::string scenario, out_route, out_report, phase = "both", route_format;
  Overrides overrides;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  Scenario s = load_scenario(a.scenario);
  a.overrides.apply(s);
  const TerrainGrid grid = load_terrain(s.terrain);
  validate_scenario(s, grid);
  const RouteFormat format = format_for(a.route_format, a.out_route);

  std::vector<RunReport> reports;
  if (a.phase == "1") {
    reports.push_back(solve_phase(s, grid, union_of_routes(s.prior_routes), 1));
  } else {
    auto two = run_two_phase(s, grid);
    if (a.phase == "2") {
      reports.push_back(std::move(two.phase2));
    } else {
      reports.push_back(std::move(two.phase1));
      reports.push_back(std::move(two.phase2));
    }
  }

  std::vector<ReportRow> rows;
  for (const auto& r : reports) {
    const fs::path route_path =
        reports.size() == 1 ? fs::path(a.out_route) : with_suffix(a.out_route, "-phase" + std::to_string(r.phase));
    ensure_parent(route_path);
    write_text_file_atomic(route_path, export_route(r.route, grid, format));
    rows.push_back(make_report_row(s, r));
    print_summary(out, s.id, r);
  }
  ensure_parent(a.out_report);
  write_text_file_atomic(a.out_report, export_report(rows));
  return kExitOk;
}

struct SuiteArgs {
  std::string suite, out, route_format = "csv";
};

int cmd_suite(const SuiteArgs& a, std::ostream& out, std::ostream& err) {
  const RouteFormat format = parse_route_format(a.route_format);
  const auto docs = load_suite(a.suite);
  const char* ext = format == RouteFormat::csv ? ".csv" : ".geojson";

  int code = kExitOk;
  std::vector<Scenario> scenarios;
  std::set<std::string> ids;
  for (const auto& d : docs) {
    if (!d.scenario) {
      err << "error: " << d.label << ": " << d.error << "\n";
      code = std::max(code, kExitUsage);
      continue;
    }
    if (!ids.insert(d.scenario->id).second) {
      err << "error: " << d.label << ": duplicate scenario id '" << d.scenario->id << "'\n";
      code = std::max(code, kExitUsage);
      continue;
    }
    scenarios.push_back(*d.scenario);
  }

  const fs::path dir(a.out);
  fs::create_directories(dir / "routes");
  std::vector<ReportRow> rows;
  for (const auto& entry : run_suite(scenarios)) {
    const auto& s = entry.scenario;
    if (entry.status != RunStatus::ok) {
      err << "error: " << s.id << ": " << entry.error << "\n";
      code = std::max(code, exit_code_for(entry.status));
      continue;
    }
    for (const RunReport* r : {&entry.result->phase1, &entry.result->phase2}) {
      const auto name = s.id + "-phase" + std::to_string(r->phase) + ext;
      write_text_file_atomic(dir / "routes" / name, export_route(r->route, *entry.grid, format));
      rows.push_back(make_report_row(s, *r));
      print_summary(out, s.id, *r);
    }
  }
  write_text_file_atomic(dir / "report.csv", export_report(rows));
  return code;
}

struct GenArgs {
  std::uint64_t seed = 0;
  int rows = 100, cols = 100;
  double cell_size = 90.0;
  SyntheticTerrainParams params;
  std::optional<double> rci_scale;
  std::string out;
};

int cmd_gen_terrain(const GenArgs& a) {
  TerrainGrid grid = generate_synthetic_terrain(a.seed, a.rows, a.cols, a.cell_size, a.params);
  if (a.rci_scale) grid = scale_rci(grid, *a.rci_scale);
  ensure_parent(a.out);
  write_text_file_atomic(a.out, write_ascii_grid(grid));
  return kExitOk;
}

struct VerifyArgs {
  std::string scenario, route;
  int phase = 1;
  Overrides overrides;
};

// Re-checks a route file against the network built from the scenario. A
// phase-2 route is checked against the history made of prior routes and the
// (re-solved, deterministic) phase-1 route.
int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  Scenario s = load_scenario(a.scenario);
  a.overrides.apply(s);
  const TerrainGrid grid = load_terrain(s.terrain);
  validate_scenario(s, grid);
  const auto cells = parse_route_csv(read_text_file(a.route));

  std::vector<std::vector<CellIndex>> routes = s.prior_routes;
  if (a.phase == 2) routes.push_back(solve_phase(s, grid, union_of_routes(s.prior_routes), 1).route.cells);
  const auto history = union_of_routes(routes);
  TacticalPicture picture{s.enemy_cells, history};
  const CostField field = build_cost_field(grid, s.vehicle, s.weights, picture);
  const GridGraph graph = build_graph(field, grid, s.start, s.end);

  FlowVerification v = verify_flow_constraints(graph, cells);
  if (v.passed()) {
    // Cells are in bounds and adjacent, so the route can be priced.
    const double cost = route_cost(field, cells);
    const RiskBreakdown parts = decompose_risk(cells, field);
    const double sum = parts.soil + parts.history + parts.enemy + parts.mu;
    const bool adds_up = std::abs(sum - cost) <= 1e-9 * std::max(1.0, std::abs(cost));
    v.checks.push_back({"decomposition", adds_up,
                        adds_up ? "" : "components sum to " + format_double(sum) + ", route costs " + format_double(cost)});
    const Route best = solve_min_cost_path(graph);
    const bool optimal = cost <= best.objective * (1.0 + 1e-12);
    v.checks.push_back({"optimality", optimal,
                        optimal ? "" : "route costs " + format_double(cost) + ", optimum is " + format_double(best.objective)});
  }
  for (const auto& c : v.checks) {
    out << (c.passed ? "ok   " : "FAIL ") << c.name;
    if (!c.passed) out << ": " << c.detail;
    out << "\n";
  }
  if (!v.passed()) {
    out << "verification failed: " << v.first_failure()->name << "\n";
    return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Terrain route planning over soil-strength rasters", "terraroute"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a scenario in one or both phases");
  solve_cmd->add_option("--scenario", solve.scenario, "Scenario JSON")->required();
  solve_cmd->add_option("--out-route", solve.out_route, "Route output (phase suffix added for --phase both)")
      ->required();
  solve_cmd->add_option("--out-report", solve.out_report, "Report CSV output")->required();
  solve_cmd->add_option("--phase", solve.phase, "1, 2 or both")->check(CLI::IsMember({"1", "2", "both"}));
  solve_cmd->add_option("--route-format", solve.route_format, "csv or geojson (default: from extension)");
  solve.overrides.add_to(*solve_cmd);

  SuiteArgs suite;
  auto* suite_cmd = app.add_subcommand("suite", "Run every scenario listed in a suite file");
  suite_cmd->add_option("--suite", suite.suite, "Suite JSON")->required();
  suite_cmd->add_option("--out", suite.out, "Output directory")->required();
  suite_cmd->add_option("--route-format", suite.route_format, "csv or geojson");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-terrain", "Write a synthetic RCI grid as ESRI ASCII");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--rows", gen.rows);
  gen_cmd->add_option("--cols", gen.cols);
  gen_cmd->add_option("--cell-size", gen.cell_size, "Metres");
  gen_cmd->add_option("--base-rci", gen.params.base_rci);
  gen_cmd->add_option("--valley-depth", gen.params.valley_depth);
  gen_cmd->add_option("--valley-count", gen.params.valley_count);
  gen_cmd->add_option("--smoothness", gen.params.smoothness);
  gen_cmd->add_option("--rci-scale", gen.rci_scale);
  gen_cmd->add_option("--out", gen.out, "Output .asc path")->required();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check a route file against a scenario's network");
  verify_cmd->add_option("--scenario", verify.scenario, "Scenario JSON")->required();
  verify_cmd->add_option("--route", verify.route, "Route CSV")->required();
  verify_cmd->add_option("--phase", verify.phase, "Phase the route was planned in")->check(CLI::IsMember({1, 2}));
  verify.overrides.add_to(*verify_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*suite_cmd) return cmd_suite(suite, out, err);
    if (*gen_cmd) return cmd_gen_terrain(gen);
    if (*verify_cmd) return cmd_verify(verify, out);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitVerification;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace terraroute::cli
