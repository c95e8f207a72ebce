#include "terraroute/risk.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "terraroute/errors.hpp"
#include "terraroute/text.hpp"

namespace terraroute {

RiskWeights nominal_weights() {
  RiskWeights w;
  w.P = 5.0;
  w.H = 20.0;
  w.k_h = 15.0;
  w.R = 20.0;
  w.k_r = 30.0;
  w.mu = kDefaultMu;
  return w;
}

Vehicle nominal_vehicle() { return Vehicle{"tracked combat engineer vehicle", 54.0}; }

namespace {

void require_nonnegative(double v, const char* field) {
  if (!std::isfinite(v) || v < 0.0) throw ValidationError("must be finite and >= 0, got " + format_double(v), field);
}

void require_positive(double v, const char* field) {
  if (!std::isfinite(v) || v <= 0.0) throw ValidationError("must be finite and > 0, got " + format_double(v), field);
}

}  // namespace

void validate(const RiskWeights& w) {
  require_nonnegative(w.P, "weights.P");
  require_nonnegative(w.H, "weights.H");
  require_nonnegative(w.R, "weights.R");
  require_positive(w.k_h, "weights.k_h");
  require_positive(w.k_r, "weights.k_r");
  require_positive(w.mu, "weights.mu");
}

void validate(const Vehicle& v) { require_positive(v.vci50, "vehicle.vci50"); }

double soil_penalty(double P, double vci50, double rci) {
  if (!std::isfinite(P) || !std::isfinite(vci50) || !std::isfinite(rci)) {
    throw ValidationError("soil penalty inputs must be finite");
  }
  if (vci50 >= rci) return P * (vci50 - rci);
  return 0.0;
}

double proximity_penalty(double coef, double distance, double decay) {
  if (!std::isfinite(decay) || decay <= 0.0) throw ValidationError("decay constant must be > 0");
  if (!std::isfinite(coef) || std::isnan(distance)) throw ValidationError("proximity penalty inputs must be finite");
  if (std::isinf(distance)) return 0.0;
  return coef * std::exp(-distance / decay);
}

namespace {

// Floor division for a positive divisor.
std::int64_t floor_div(std::int64_t num, std::int64_t den) {
  auto q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

}  // namespace

// Meijster, Roerdink & Hesselink two-pass transform. All arithmetic is on
// integer squared distances, so the result is the exact minimum over sources
// before the final square root.
std::vector<double> distance_to_nearest(int n_rows, int n_cols, std::span<const CellIndex> sources) {
  if (n_rows < 1 || n_cols < 1) throw ValidationError("grid dimensions must be positive");
  const auto rows = static_cast<std::size_t>(n_rows);
  const auto cols = static_cast<std::size_t>(n_cols);
  std::vector<double> out(rows * cols, std::numeric_limits<double>::infinity());
  if (sources.empty()) return out;

  std::vector<std::uint8_t> is_source(rows * cols, 0);
  for (const auto& s : sources) {
    if (s.row < 0 || s.row >= n_rows || s.col < 0 || s.col >= n_cols) {
      throw ValidationError("source cell " + to_string(s) + " is outside the grid");
    }
    is_source[static_cast<std::size_t>(s.row) * cols + static_cast<std::size_t>(s.col)] = 1;
  }

  // Any real distance is below rows + cols, so that value stands in for infinity.
  const std::int64_t inf = static_cast<std::int64_t>(n_rows) + n_cols;

  // Column pass: g = vertical distance to the nearest source in the same column.
  std::vector<std::int64_t> g(rows * cols);
  for (std::size_t c = 0; c < cols; ++c) {
    g[c] = is_source[c] ? 0 : inf;
    for (std::size_t r = 1; r < rows; ++r) {
      const auto i = r * cols + c;
      g[i] = is_source[i] ? 0 : std::min(inf, g[i - cols] + 1);
    }
    for (std::size_t r = rows - 1; r-- > 0;) {
      const auto i = r * cols + c;
      if (g[i + cols] < g[i]) g[i] = g[i + cols] + 1;
    }
  }

  // Row pass: lower envelope of parabolas (x - i)^2 + g(i)^2.
  std::vector<std::int64_t> s(cols), t(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::int64_t* row_g = g.data() + r * cols;
    auto f = [&](std::int64_t x, std::int64_t i) { return (x - i) * (x - i) + row_g[i] * row_g[i]; };
    auto sep = [&](std::int64_t i, std::int64_t u) {
      return floor_div(u * u - i * i + row_g[u] * row_g[u] - row_g[i] * row_g[i], 2 * (u - i));
    };
    const auto m = static_cast<std::int64_t>(cols);
    std::int64_t q = 0;
    s[0] = 0;
    t[0] = 0;
    for (std::int64_t u = 1; u < m; ++u) {
      while (q >= 0 && f(t[q], s[q]) > f(t[q], u)) --q;
      if (q < 0) {
        q = 0;
        s[0] = u;
      } else {
        const auto w = 1 + sep(s[q], u);
        if (w < m) {
          ++q;
          s[q] = u;
          t[q] = w;
        }
      }
    }
    for (std::int64_t u = m - 1; u >= 0; --u) {
      const auto d2 = f(u, s[q]);
      out[r * cols + static_cast<std::size_t>(u)] = std::sqrt(static_cast<double>(d2));
      if (u == t[q]) --q;
    }
  }
  return out;
}

CostField build_cost_field(const TerrainGrid& grid, const Vehicle& vehicle, const RiskWeights& weights,
                           const TacticalPicture& picture) {
  validate(vehicle);
  validate(weights);
  for (const auto& c : picture.enemy_cells) grid.require_traversable(c, "enemy_cells");
  for (const auto& c : picture.history_cells) grid.require_traversable(c, "history_cells");

  CostField field;
  field.n_rows = grid.n_rows();
  field.n_cols = grid.n_cols();
  field.mu = weights.mu;
  field.dist_history = distance_to_nearest(grid.n_rows(), grid.n_cols(), picture.history_cells);
  field.dist_enemy = distance_to_nearest(grid.n_rows(), grid.n_cols(), picture.enemy_cells);

  const auto n = grid.cell_count();
  field.total.resize(n);
  field.soil.resize(n);
  field.history.resize(n);
  field.enemy.resize(n);
  const auto rci = grid.rci_values();
  const auto mask = grid.nodata_mask();
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i] != 0) {
      field.soil[i] = field.history[i] = field.enemy[i] = 0.0;
      field.total[i] = weights.mu;
      continue;
    }
    const double p = soil_penalty(weights.P, vehicle.vci50, rci[i]);
    const double h = proximity_penalty(weights.H, field.dist_history[i], weights.k_h);
    const double r = proximity_penalty(weights.R, field.dist_enemy[i], weights.k_r);
    field.soil[i] = p;
    field.history[i] = h;
    field.enemy[i] = r;
    field.total[i] = p + h + r + weights.mu;
  }
  return field;
}

}  // namespace terraroute
