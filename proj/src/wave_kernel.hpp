// One synchronous expansion wave shared by the brushfire and wavefront passes.
#pragma once

#include <cstddef>
#include <limits>

#include "fmplan/grid.hpp"

namespace fmplan::detail {

// Reads `cur`, writes `next` (which must hold a copy of `cur`). Every cell equal
// to 0 with a vertical/horizontal neighbour >= seed_floor takes the smallest
// such value + 1; failing that, a diagonal neighbour >= seed_floor gives the
// smallest such value + 1.41. Returns the number of cells assigned.
inline std::size_t expand_cell(const Grid<double>& cur, Grid<double>& next, int i, int j,
                               double seed_floor) {
  if (cur(i, j) != 0.0) return 0;
  const int w = cur.width();
  const int h = cur.height();
  double best = std::numeric_limits<double>::infinity();
  for (const Offset& o : kVHNeighbours) {
    const int ni = i + o.di;
    const int nj = j + o.dj;
    if (ni < 0 || nj < 0 || ni >= w || nj >= h) continue;
    const double n = cur(ni, nj);
    if (n >= seed_floor && n < best) best = n;
  }
  if (best != std::numeric_limits<double>::infinity()) {
    next(i, j) = best + 1.0;
    return 1;
  }
  for (const Offset& o : kDiagNeighbours) {
    const int ni = i + o.di;
    const int nj = j + o.dj;
    if (ni < 0 || nj < 0 || ni >= w || nj >= h) continue;
    const double n = cur(ni, nj);
    if (n >= seed_floor && n < best) best = n;
  }
  if (best != std::numeric_limits<double>::infinity()) {
    next(i, j) = best + kDiagonalStep;
    return 1;
  }
  return 0;
}

inline std::size_t expand_wave_serial(const Grid<double>& cur, Grid<double>& next, double seed_floor) {
  std::size_t assigned = 0;
  for (int j = 0; j < cur.height(); ++j) {
    for (int i = 0; i < cur.width(); ++i) assigned += expand_cell(cur, next, i, j, seed_floor);
  }
  return assigned;
}

inline std::size_t expand_wave_parallel(const Grid<double>& cur, Grid<double>& next,
                                        double seed_floor) {
  std::size_t assigned = 0;
  const int h = cur.height();
  const int w = cur.width();
#pragma omp parallel for reduction(+ : assigned) schedule(static)
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) assigned += expand_cell(cur, next, i, j, seed_floor);
  }
  return assigned;
}

inline std::size_t expand_wave(const Grid<double>& cur, Grid<double>& next, double seed_floor,
                               Exec exec) {
  return exec == Exec::Parallel ? expand_wave_parallel(cur, next, seed_floor)
                                : expand_wave_serial(cur, next, seed_floor);
}

// Runs waves until `max_waves` is reached or a wave assigns nothing. Returns
// the number of waves that assigned at least one cell.
inline int run_waves(Grid<double>& values, double seed_floor, int max_waves, Exec exec) {
  Grid<double> next = values;
  int productive = 0;
  for (int wave = 0; wave < max_waves; ++wave) {
    const std::size_t assigned = expand_wave(values, next, seed_floor, exec);
    if (assigned == 0) break;
    ++productive;
    values = next;
  }
  return productive;
}

}  // namespace fmplan::detail
