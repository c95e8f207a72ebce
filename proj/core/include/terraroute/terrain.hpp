#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace terraroute {

// 0-based raster cell address. Row 0 is the northern edge, col 0 the western.
struct CellIndex {
  int row = 0;
  int col = 0;

  friend constexpr auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

std::string to_string(CellIndex cell);

// Map coordinates in grid units (meters for the bundled data).
struct MapPoint {
  double easting = 0.0;
  double northing = 0.0;

  friend constexpr bool operator==(const MapPoint&, const MapPoint&) = default;
};

// Raster of Rating Cone Index (RCI, psi) values. Immutable once built.
//
// Cells are stored row-major with the north row first. `origin` is the
// lower-left (south-west) corner of the raster in map units, matching the
// ESRI `xllcorner`/`yllcorner` convention. Masked (nodata) cells hold an rci
// of 0 and are not traversable.
class TerrainGrid {
 public:
  // Throws ValidationError if dimensions, cell size, or any unmasked value is
  // invalid (non-finite or negative). An empty `nodata` means nothing is masked.
  TerrainGrid(int n_rows, int n_cols, double cell_size, MapPoint origin, std::vector<double> rci,
              std::vector<std::uint8_t> nodata = {}, std::optional<double> nodata_value = std::nullopt);

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  std::size_t cell_count() const { return rci_.size(); }
  double cell_size() const { return cell_size_; }
  MapPoint origin() const { return origin_; }
  // The sentinel used when the grid was read or should be written.
  std::optional<double> nodata_value() const { return nodata_value_; }

  bool in_bounds(CellIndex cell) const {
    return cell.row >= 0 && cell.row < n_rows_ && cell.col >= 0 && cell.col < n_cols_;
  }
  std::size_t linear(CellIndex cell) const {
    return static_cast<std::size_t>(cell.row) * static_cast<std::size_t>(n_cols_) +
           static_cast<std::size_t>(cell.col);
  }
  CellIndex cell_at(std::size_t index) const {
    return {static_cast<int>(index / static_cast<std::size_t>(n_cols_)),
            static_cast<int>(index % static_cast<std::size_t>(n_cols_))};
  }

  bool is_nodata(CellIndex cell) const { return nodata_[linear(cell)] != 0; }
  double rci(CellIndex cell) const { return rci_[linear(cell)]; }

  std::span<const double> rci_values() const { return rci_; }
  std::span<const std::uint8_t> nodata_mask() const { return nodata_; }
  std::size_t nodata_count() const;

  // Center of `cell` in map coordinates.
  MapPoint cell_center(CellIndex cell) const;

  // Throws ValidationError if `cell` is outside the grid or masked.
  void require_traversable(CellIndex cell, const std::string& field) const;

  friend bool operator==(const TerrainGrid&, const TerrainGrid&) = default;

 private:
  int n_rows_;
  int n_cols_;
  double cell_size_;
  MapPoint origin_;
  std::vector<double> rci_;
  std::vector<std::uint8_t> nodata_;
  std::optional<double> nodata_value_;
};

// Reads an ESRI ASCII grid. Header keys (ncols, nrows, xllcorner|xllcenter,
// yllcorner|yllcenter, cellsize, optional NODATA_value) are case-insensitive
// and may appear in any order; values follow row-major, north row first.
TerrainGrid parse_ascii_grid(std::istream& in);
TerrainGrid parse_ascii_grid(std::string_view text);
TerrainGrid read_ascii_grid(const std::string& path);

// Writes an ESRI ASCII grid using shortest round-trip number formatting, so
// parse_ascii_grid(write_ascii_grid(g)) == g.
std::string write_ascii_grid(const TerrainGrid& grid);
void write_ascii_grid(const TerrainGrid& grid, std::ostream& out);

struct SyntheticTerrainParams {
  double base_rci = 80.0;      // psi, value away from valleys
  double valley_depth = 70.0;  // psi, deepest drop at a valley floor; <= base_rci
  int valley_count = 3;
  // Valley width relative to the shorter grid side; larger is broader and smoother.
  double smoothness = 1.0;
};

// Deterministic stand-in for a soil-strength map: a flat field of `base_rci`
// cut by `valley_count` meandering low-strength bands, each with a couple of
// narrow firm crossings. Bit-identical output for identical arguments.
TerrainGrid generate_synthetic_terrain(std::uint64_t seed, int n_rows, int n_cols, double cell_size,
                                       const SyntheticTerrainParams& params);

// Multiplies every unmasked RCI value by `factor` (> 0). Geometry is unchanged.
TerrainGrid scale_rci(const TerrainGrid& grid, double factor);

}  // namespace terraroute
