// Occupancy bitmaps, goal-cell sets and complete-map generation (buffer region
// by brushfire expansion from the obstacles).

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "fmplan/grid.hpp"

namespace fmplan {

/// Binary workspace raster: 0 = free, 1 = obstacle.
class OccupancyBitmap {
 public:
  OccupancyBitmap(Grid<std::uint8_t> cells, double resolution);

  int width() const { return cells_.width(); }
  int height() const { return cells_.height(); }
  double resolution() const { return resolution_; }
  bool occupied(int i, int j) const { return cells_(i, j) != 0; }
  bool occupied(Cell c) const { return cells_(c) != 0; }
  const Grid<std::uint8_t>& cells() const { return cells_; }

  friend bool operator==(const OccupancyBitmap&, const OccupancyBitmap&) = default;

 private:
  Grid<std::uint8_t> cells_;
  double resolution_;
};

enum class BitmapFormat { Pgm, Csv };

/// File row r maps to grid row j = r. PGM pixels >= 128 are obstacles.
OccupancyBitmap load_bitmap(std::istream& in, BitmapFormat format, double resolution);
OccupancyBitmap load_bitmap_file(const std::filesystem::path& path, double resolution);
BitmapFormat bitmap_format_for(const std::filesystem::path& path);

/// Writes P5 (binary) or P2 (plain) with obstacles as 255.
void write_pgm(std::ostream& out, const OccupancyBitmap& bm, bool binary = true);

/// Re-rasterizes onto a grid of `resolution` covering the same extent. A target
/// cell is an obstacle if any source cell overlapping it is one.
OccupancyBitmap resample(const OccupancyBitmap& bm, double resolution);

/// Integer codes of the complete-map classes (as written to complete_map.csv).
enum class CellClass : std::int8_t { Free = 0, Obstacle = 1, Buffer = -1, Goal = 2 };

enum class GoalKind { SingleGoal, Path };

/// Ordered goal cells. Path cells must be pairwise 8-adjacent in sequence.
struct GoalCells {
  GoalKind kind = GoalKind::SingleGoal;
  std::vector<Cell> cells;

  /// Throws InputError for out-of-bounds cells or a broken path.
  void validate(int width, int height) const;
};

/// 8-connected rasterization of the polyline through `waypoints`
/// (Bresenham per segment, shared endpoints emitted once).
GoalCells rasterize_path(const std::vector<Cell>& waypoints);

/// ceil(alpha * r_min / res). Throws ConstraintError for alpha < 2 or
/// non-positive r_min / res.
int buffer_width_cells(double alpha, double r_min, double res);

class CompleteMap {
 public:
  CompleteMap(Grid<CellClass> cells, double resolution, double alpha, double r_min);

  int width() const { return cells_.width(); }
  int height() const { return cells_.height(); }
  double resolution() const { return resolution_; }
  double alpha() const { return alpha_; }
  double r_min() const { return r_min_; }
  int buffer_cells() const { return buffer_width_cells(alpha_, r_min_, resolution_); }

  CellClass at(int i, int j) const { return cells_(i, j); }
  CellClass at(Cell c) const { return cells_(c); }
  const Grid<CellClass>& cells() const { return cells_; }

  /// Free or Goal: the region of safe start.
  bool safe_start(Cell c) const {
    const CellClass k = cells_(c);
    return k == CellClass::Free || k == CellClass::Goal;
  }
  bool contains_point(double x, double y) const;
  /// Containing cell of a workspace point; throws OutOfBoundsError outside.
  Cell cell_at(double x, double y) const;

  friend bool operator==(const CompleteMap&, const CompleteMap&) = default;

 private:
  Grid<CellClass> cells_;
  double resolution_;
  double alpha_;
  double r_min_;
};

/// Synchronous brushfire from the obstacle cells. Returns the expansion values:
/// 0 for unreached free cells, 1 for obstacles, > 1 for cells reached within
/// `waves` waves (vertical/horizontal +1 taking precedence over diagonal +1.41).
Grid<double> brushfire(const Grid<std::uint8_t>& occupancy, int waves, Exec exec = Exec::Parallel);

/// Obstacles, buffer band of buffer_width_cells waves, goals. Throws
/// AssumptionViolation naming the first goal cell that is not in free space
/// outside the buffer.
CompleteMap generate_complete_map(const OccupancyBitmap& bm, const GoalCells& goals, double alpha,
                                  double r_min, Exec exec = Exec::Parallel);

}  // namespace fmplan
