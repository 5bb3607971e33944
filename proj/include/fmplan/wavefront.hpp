// Cost map by 8-connected wavefront expansion from the goal cells.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmplan/gridmap.hpp"

namespace fmplan {

enum class CostKind : std::uint8_t { Finite, Obstacle, Buffer, Unreachable };

/// Goal cells cost exactly 2. Non-finite cells hold +inf in cost().
class CostMap {
 public:
  CostMap(Grid<double> costs, Grid<CostKind> kinds, double resolution,
          std::vector<std::string> warnings = {});

  int width() const { return costs_.width(); }
  int height() const { return costs_.height(); }
  double resolution() const { return resolution_; }

  double cost(int i, int j) const { return costs_(i, j); }
  double cost(Cell c) const { return costs_(c); }
  CostKind kind(int i, int j) const { return kinds_(i, j); }
  CostKind kind(Cell c) const { return kinds_(c); }
  bool finite(Cell c) const { return kinds_(c) == CostKind::Finite; }

  const Grid<double>& costs() const { return costs_; }
  const Grid<CostKind>& kinds() const { return kinds_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Equality on the grids and resolution; warnings are diagnostics only.
  friend bool operator==(const CostMap& a, const CostMap& b) {
    return a.resolution_ == b.resolution_ && a.kinds_ == b.kinds_ && a.costs_ == b.costs_;
  }

 private:
  Grid<double> costs_;
  Grid<CostKind> kinds_;
  double resolution_;
  std::vector<std::string> warnings_;
};

/// Synchronous waves seeded at the goal cells (cost 2). A free cell takes the
/// minimum vertical/horizontal costed neighbour + 1, otherwise the minimum
/// diagonal costed neighbour + 1.41. Buffer and obstacle cells are walls.
/// Stops when a wave assigns nothing; free cells left over are Unreachable.
/// Throws InputError when the map holds no goal cell.
CostMap expand_wavefront(const CompleteMap& m, Exec exec = Exec::Parallel);

}  // namespace fmplan
