// Row-major 2-D grid container and the cell/neighbourhood conventions shared by
// every planning stage.
//
// Cell (i, j) covers [i*res, (i+1)*res) x [j*res, (j+1)*res) in the workspace;
// i runs along x (columns), j along y (rows). Storage index is j * width + i.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace fmplan {

/// Chamfer increment for a diagonal step. Kept as the literal 1.41, not sqrt(2).
inline constexpr double kDiagonalStep = 1.41;

/// Selects the serial reference kernel or the OpenMP kernel.
enum class Exec { Serial, Parallel };

struct Cell {
  int i = 0;
  int j = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct Offset {
  int di;
  int dj;
};

// Vertical/horizontal and diagonal neighbour sets, in the order the expansion
// algorithms enumerate them.
inline constexpr std::array<Offset, 4> kVHNeighbours{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
inline constexpr std::array<Offset, 4> kDiagNeighbours{{{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}};

// Counter-clockwise from east. Also the tie-break order for gradient descent.
inline constexpr std::array<Offset, 8> kCompassNeighbours{
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw std::invalid_argument("grid dimensions must be positive");
    }
    cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  bool contains(int i, int j) const { return i >= 0 && j >= 0 && i < width_ && j < height_; }
  bool contains(Cell c) const { return contains(c.i, c.j); }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(i);
  }
  std::size_t index(Cell c) const { return index(c.i, c.j); }
  Cell cell(std::size_t k) const {
    return {static_cast<int>(k % static_cast<std::size_t>(width_)),
            static_cast<int>(k / static_cast<std::size_t>(width_))};
  }

  T& operator()(int i, int j) { return cells_[index(i, j)]; }
  const T& operator()(int i, int j) const { return cells_[index(i, j)]; }
  T& operator()(Cell c) { return cells_[index(c)]; }
  const T& operator()(Cell c) const { return cells_[index(c)]; }
  T& operator[](std::size_t k) { return cells_[k]; }
  const T& operator[](std::size_t k) const { return cells_[k]; }

  std::span<T> data() { return cells_; }
  std::span<const T> data() const { return cells_; }

  bool same_shape(int width, int height) const { return width_ == width && height_ == height; }
  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return same_shape(other.width(), other.height());
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> cells_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline Point cell_center(Cell c, double resolution) {
  return {(c.i + 0.5) * resolution, (c.j + 0.5) * resolution};
}

}  // namespace fmplan
