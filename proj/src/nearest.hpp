// Exact nearest-target lookup on a grid by Chebyshev ring search.
//
// Distances are squared cell offsets (integers), so results are identical to
// a brute-force scan that breaks ties by the lowest target cell index.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "fmplan/grid.hpp"

namespace fmplan::detail {

class NearestCells {
 public:
  struct Hit {
    int id;  // position in the target list
    std::int64_t d2;
  };

  // When a cell appears more than once in `targets` its first occurrence wins.
  NearestCells(int width, int height, const std::vector<Cell>& targets)
      : ids_(width, height, -1), count_(static_cast<int>(targets.size())) {
    for (int k = 0; k < count_; ++k) {
      int& slot = ids_(targets[k]);
      if (slot < 0) slot = k;
    }
  }

  bool empty() const { return count_ == 0; }

  // Nearest target with squared offset <= max_d2.
  std::optional<Hit> nearest(Cell from,
                             std::int64_t max_d2 = std::numeric_limits<std::int64_t>::max()) const {
    if (count_ == 0) return std::nullopt;
    const int w = ids_.width();
    const int h = ids_.height();
    const int max_r = std::max(w, h);
    std::optional<Hit> best;
    std::size_t best_index = 0;
    auto consider = [&](int i, int j) {
      if (i < 0 || j < 0 || i >= w || j >= h) return;
      const int id = ids_(i, j);
      if (id < 0) return;
      const std::int64_t di = i - from.i;
      const std::int64_t dj = j - from.j;
      const std::int64_t d2 = di * di + dj * dj;
      if (d2 > max_d2) return;
      const std::size_t index = ids_.index(i, j);
      if (!best || d2 < best->d2 || (d2 == best->d2 && index < best_index)) {
        best = Hit{id, d2};
        best_index = index;
      }
    };
    for (int r = 0; r <= max_r; ++r) {
      const std::int64_t ring_floor = static_cast<std::int64_t>(r) * r;
      if (ring_floor > max_d2) break;
      if (best && ring_floor > best->d2) break;
      if (r == 0) {
        consider(from.i, from.j);
        continue;
      }
      for (int d = -r; d <= r; ++d) {
        consider(from.i + d, from.j - r);
        consider(from.i + d, from.j + r);
      }
      for (int d = -r + 1; d <= r - 1; ++d) {
        consider(from.i - r, from.j + d);
        consider(from.i + r, from.j + d);
      }
    }
    return best;
  }

 private:
  Grid<int> ids_;
  int count_;
};

}  // namespace fmplan::detail
