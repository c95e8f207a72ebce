#include "terraroute/terrain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "terraroute/errors.hpp"
#include "terraroute/text.hpp"

namespace terraroute {

std::string to_string(CellIndex cell) {
  return "(" + std::to_string(cell.row) + "," + std::to_string(cell.col) + ")";
}

TerrainGrid::TerrainGrid(int n_rows, int n_cols, double cell_size, MapPoint origin, std::vector<double> rci,
                         std::vector<std::uint8_t> nodata, std::optional<double> nodata_value)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      cell_size_(cell_size),
      origin_(origin),
      rci_(std::move(rci)),
      nodata_(std::move(nodata)),
      nodata_value_(nodata_value) {
  if (n_rows_ < 1) throw ValidationError("must be positive", "nrows");
  if (n_cols_ < 1) throw ValidationError("must be positive", "ncols");
  if (!std::isfinite(cell_size_) || cell_size_ <= 0.0) throw ValidationError("must be finite and > 0", "cellsize");
  if (!std::isfinite(origin_.easting) || !std::isfinite(origin_.northing)) {
    throw ValidationError("must be finite", "origin");
  }
  const auto expected = static_cast<std::size_t>(n_rows_) * static_cast<std::size_t>(n_cols_);
  if (rci_.size() != expected) {
    throw ValidationError("expected " + std::to_string(expected) + " values, got " + std::to_string(rci_.size()),
                          "rci");
  }
  if (nodata_.empty()) nodata_.assign(expected, 0);
  if (nodata_.size() != expected) throw ValidationError("mask size does not match grid", "nodata_mask");
  for (std::size_t i = 0; i < expected; ++i) {
    if (nodata_[i] != 0) {
      nodata_[i] = 1;
      rci_[i] = 0.0;
      continue;
    }
    if (!std::isfinite(rci_[i]) || rci_[i] < 0.0) {
      throw ValidationError("cell " + to_string(cell_at(i)) + " has invalid value " + format_double(rci_[i]),
                            "rci");
    }
  }
}

std::size_t TerrainGrid::nodata_count() const {
  return static_cast<std::size_t>(std::count(nodata_.begin(), nodata_.end(), std::uint8_t{1}));
}

MapPoint TerrainGrid::cell_center(CellIndex cell) const {
  return {origin_.easting + (cell.col + 0.5) * cell_size_,
          origin_.northing + (n_rows_ - cell.row - 0.5) * cell_size_};
}

void TerrainGrid::require_traversable(CellIndex cell, const std::string& field) const {
  if (!in_bounds(cell)) {
    throw ValidationError("cell " + to_string(cell) + " is outside the " + std::to_string(n_rows_) + "x" +
                              std::to_string(n_cols_) + " grid",
                          field);
  }
  if (is_nodata(cell)) throw ValidationError("cell " + to_string(cell) + " is nodata", field);
}

// ---------------------------------------------------------------------------
// ESRI ASCII grid

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct HeaderLine {
  std::string key;
  std::string value;
};

// Splits "key value" into two tokens; false if the line has another shape.
bool split_header(std::string_view line, HeaderLine& out) {
  line = trim(line);
  const auto gap = line.find_first_of(" \t");
  if (gap == std::string_view::npos) return false;
  auto value = trim(line.substr(gap));
  if (value.empty() || value.find_first_of(" \t") != std::string_view::npos) return false;
  out.key = lower(line.substr(0, gap));
  out.value = std::string(value);
  return true;
}

bool starts_numeric(std::string_view line) {
  line = trim(line);
  if (line.empty()) return false;
  const char c = line.front();
  return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

TerrainGrid parse_ascii_grid(std::string_view text) {
  std::optional<long long> ncols, nrows;
  std::optional<double> xll, yll, cellsize, nodata;
  bool x_center = false;
  bool y_center = false;

  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::string_view line;
  bool have_body_line = false;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    ++line_no;
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    if (trim(line).empty()) continue;
    if (starts_numeric(line)) {
      have_body_line = true;
      break;
    }
    HeaderLine h;
    if (!split_header(line, h)) fail_line(line_no, "malformed header line '" + std::string(trim(line)) + "'");
    auto need_double = [&](std::optional<double>& slot) {
      if (slot) fail_line(line_no, "duplicate header key '" + h.key + "'");
      slot = parse_double(h.value);
      if (!slot) fail_line(line_no, "header '" + h.key + "' has non-numeric value '" + h.value + "'");
    };
    auto need_int = [&](std::optional<long long>& slot) {
      if (slot) fail_line(line_no, "duplicate header key '" + h.key + "'");
      slot = parse_integer(h.value);
      if (!slot) fail_line(line_no, "header '" + h.key + "' must be an integer, got '" + h.value + "'");
    };
    if (h.key == "ncols") {
      need_int(ncols);
    } else if (h.key == "nrows") {
      need_int(nrows);
    } else if (h.key == "xllcorner" || h.key == "xllcenter") {
      x_center = h.key == "xllcenter";
      need_double(xll);
    } else if (h.key == "yllcorner" || h.key == "yllcenter") {
      y_center = h.key == "yllcenter";
      need_double(yll);
    } else if (h.key == "cellsize") {
      need_double(cellsize);
    } else if (h.key == "nodata_value") {
      need_double(nodata);
    } else {
      fail_line(line_no, "unknown header key '" + h.key + "'");
    }
  }

  const auto header_end_line = have_body_line ? line_no : line_no + 1;
  if (!ncols) fail_line(header_end_line, "missing header 'ncols'");
  if (!nrows) fail_line(header_end_line, "missing header 'nrows'");
  if (!xll) fail_line(header_end_line, "missing header 'xllcorner'");
  if (!yll) fail_line(header_end_line, "missing header 'yllcorner'");
  if (!cellsize) fail_line(header_end_line, "missing header 'cellsize'");
  if (*ncols < 1) throw ValidationError("must be positive, got " + std::to_string(*ncols), "ncols");
  if (*nrows < 1) throw ValidationError("must be positive, got " + std::to_string(*nrows), "nrows");
  if (!(*cellsize > 0.0)) throw ValidationError("must be > 0, got " + format_double(*cellsize), "cellsize");
  if (*ncols > (1LL << 24) || *nrows > (1LL << 24)) throw ValidationError("grid too large", "ncols");

  const auto expected = static_cast<std::size_t>(*ncols) * static_cast<std::size_t>(*nrows);
  std::vector<double> values;
  values.reserve(expected);
  std::vector<std::uint8_t> mask(expected, 0);

  auto consume = [&](std::string_view body_line, std::size_t at_line) {
    std::size_t p = 0;
    while (p < body_line.size()) {
      while (p < body_line.size() && std::isspace(static_cast<unsigned char>(body_line[p]))) ++p;
      if (p >= body_line.size()) break;
      auto q = p;
      while (q < body_line.size() && !std::isspace(static_cast<unsigned char>(body_line[q]))) ++q;
      const auto token = body_line.substr(p, q - p);
      const auto v = parse_double(token);
      if (!v) fail_line(at_line, "non-numeric value '" + std::string(token) + "'");
      // Extra values are still counted so the mismatch error reports them.
      if (values.size() < expected && nodata && *v == *nodata) mask[values.size()] = 1;
      values.push_back(*v);
      p = q;
    }
  };
  if (have_body_line) consume(line, line_no);
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    ++line_no;
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    consume(line, line_no);
  }
  if (values.size() != expected) {
    throw ParseError("value count mismatch: expected " + std::to_string(expected) + " (" + std::to_string(*nrows) +
                     "x" + std::to_string(*ncols) + "), found " + std::to_string(values.size()));
  }

  const double cs = *cellsize;
  const MapPoint origin{x_center ? *xll - cs / 2.0 : *xll, y_center ? *yll - cs / 2.0 : *yll};
  return TerrainGrid(static_cast<int>(*nrows), static_cast<int>(*ncols), cs, origin, std::move(values),
                     std::move(mask), nodata);
}

TerrainGrid parse_ascii_grid(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_ascii_grid(std::string_view(text));
}

TerrainGrid read_ascii_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open grid file '" + path + "'");
  return parse_ascii_grid(in);
}

void write_ascii_grid(const TerrainGrid& grid, std::ostream& out) {
  const bool has_mask = grid.nodata_count() > 0;
  const double sentinel = grid.nodata_value().value_or(-9999.0);
  out << "ncols " << grid.n_cols() << '\n';
  out << "nrows " << grid.n_rows() << '\n';
  out << "xllcorner " << format_double(grid.origin().easting) << '\n';
  out << "yllcorner " << format_double(grid.origin().northing) << '\n';
  out << "cellsize " << format_double(grid.cell_size()) << '\n';
  if (has_mask || grid.nodata_value()) out << "NODATA_value " << format_double(sentinel) << '\n';
  for (int r = 0; r < grid.n_rows(); ++r) {
    for (int c = 0; c < grid.n_cols(); ++c) {
      if (c > 0) out << ' ';
      const CellIndex cell{r, c};
      out << format_double(grid.is_nodata(cell) ? sentinel : grid.rci(cell));
    }
    out << '\n';
  }
}

std::string write_ascii_grid(const TerrainGrid& grid) {
  std::ostringstream out;
  write_ascii_grid(grid, out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Synthetic terrain

namespace {

// mt19937_64's output sequence is fixed by the standard; the <random>
// distributions are not, so uniforms are derived from raw draws.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(unit() * (hi - lo + 1)); }

 private:
  std::mt19937_64 engine_;
};

struct Crossing {
  double at;     // position along the valley axis
  double width;  // half-width along the axis
};

struct Valley {
  double cos_a, sin_a;
  double offset;
  double amp1, freq1, phase1;
  double amp2, freq2, phase2;
  double width;
  double depth_freq, depth_phase;
  std::vector<Crossing> crossings;

  // Drop in RCI at normalized, centered coordinates (x, y), as a fraction of
  // the configured depth.
  double relative_drop(double x, double y) const {
    constexpr double kTau = 2.0 * std::numbers::pi;
    const double u = x * cos_a + y * sin_a;
    const double v = -x * sin_a + y * cos_a;
    const double center = offset + amp1 * std::sin(kTau * freq1 * u + phase1) + amp2 * std::sin(kTau * freq2 * u + phase2);
    const double dv = (v - center) / width;
    double along = 0.85 + 0.15 * std::sin(kTau * depth_freq * u + depth_phase);
    for (const auto& c : crossings) {
      const double du = (u - c.at) / c.width;
      along *= 1.0 - 0.9 * std::exp(-du * du);
    }
    return along * std::exp(-0.5 * dv * dv);
  }
};

Valley draw_valley(Draws& rng, double smoothness) {
  Valley v{};
  const double angle = rng.uniform(0.0, std::numbers::pi);
  v.cos_a = std::cos(angle);
  v.sin_a = std::sin(angle);
  v.offset = rng.uniform(-0.3, 0.3);
  v.amp1 = rng.uniform(0.04, 0.12);
  v.freq1 = rng.uniform(0.5, 1.5);
  v.phase1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  v.amp2 = rng.uniform(0.01, 0.04);
  v.freq2 = rng.uniform(2.0, 4.0);
  v.phase2 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  v.width = smoothness * rng.uniform(0.6, 1.4) * 0.05;
  v.depth_freq = rng.uniform(1.0, 3.0);
  v.depth_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const int n_crossings = rng.integer(1, 2);
  for (int i = 0; i < n_crossings; ++i) {
    v.crossings.push_back({rng.uniform(-0.4, 0.4), rng.uniform(0.01, 0.025)});
  }
  return v;
}

}  // namespace

TerrainGrid generate_synthetic_terrain(std::uint64_t seed, int n_rows, int n_cols, double cell_size,
                                       const SyntheticTerrainParams& params) {
  if (n_rows < 2) throw ValidationError("must be >= 2", "rows");
  if (n_cols < 2) throw ValidationError("must be >= 2", "cols");
  if (!std::isfinite(cell_size) || cell_size <= 0.0) throw ValidationError("must be finite and > 0", "cell_size");
  if (!std::isfinite(params.base_rci) || params.base_rci < 0.0) throw ValidationError("must be >= 0", "base_rci");
  if (!std::isfinite(params.valley_depth) || params.valley_depth < 0.0) {
    throw ValidationError("must be >= 0", "valley_depth");
  }
  if (params.valley_depth > params.base_rci) throw ValidationError("must not exceed base_rci", "valley_depth");
  if (params.valley_count < 0) throw ValidationError("must be >= 0", "valley_count");
  if (!std::isfinite(params.smoothness) || params.smoothness <= 0.0) {
    throw ValidationError("must be finite and > 0", "smoothness");
  }

  Draws rng(seed);
  std::vector<Valley> valleys;
  valleys.reserve(static_cast<std::size_t>(params.valley_count));
  for (int i = 0; i < params.valley_count; ++i) valleys.push_back(draw_valley(rng, params.smoothness));

  // Normalize by the shorter side so valleys keep their shape on non-square grids.
  const double span = static_cast<double>(std::min(n_rows, n_cols));
  std::vector<double> rci(static_cast<std::size_t>(n_rows) * static_cast<std::size_t>(n_cols), params.base_rci);
  for (int r = 0; r < n_rows; ++r) {
    const double y = ((r + 0.5) - n_rows / 2.0) / span;
    for (int c = 0; c < n_cols; ++c) {
      const double x = ((c + 0.5) - n_cols / 2.0) / span;
      double drop = 0.0;
      for (const auto& v : valleys) drop = std::max(drop, v.relative_drop(x, y));
      const double value = params.base_rci - params.valley_depth * std::min(drop, 1.0);
      rci[static_cast<std::size_t>(r) * static_cast<std::size_t>(n_cols) + static_cast<std::size_t>(c)] =
          std::max(0.0, value);
    }
  }
  return TerrainGrid(n_rows, n_cols, cell_size, MapPoint{0.0, 0.0}, std::move(rci));
}

TerrainGrid scale_rci(const TerrainGrid& grid, double factor) {
  if (!std::isfinite(factor) || factor <= 0.0) {
    throw ValidationError("must be finite and > 0, got " + format_double(factor), "rci_scale");
  }
  std::vector<double> values(grid.rci_values().begin(), grid.rci_values().end());
  for (auto& v : values) v *= factor;
  return TerrainGrid(grid.n_rows(), grid.n_cols(), grid.cell_size(), grid.origin(), std::move(values),
                     std::vector<std::uint8_t>(grid.nodata_mask().begin(), grid.nodata_mask().end()),
                     grid.nodata_value());
}

}  // namespace terraroute
