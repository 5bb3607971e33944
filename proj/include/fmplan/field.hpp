// Vector-field synthesis: raw field from the cost map, transition-region
// rotation near path and border edges, Gaussian smoothing.
//
// A field stores one heading per cell in [0, 2*pi); the implied vector
// (cos, sin) is unit length by construction.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmplan/gridmap.hpp"
#include "fmplan/wavefront.hpp"

namespace fmplan {

enum class FieldStage { Raw, Transition, Smoothed };

class VectorField {
 public:
  /// Angles are wrapped into [0, 2*pi). `flagged` marks cells with no descent
  /// (unreachable or with no border to point at); empty means none flagged.
  VectorField(Grid<double> angles, double resolution, Grid<std::uint8_t> flagged = {},
              std::vector<std::string> warnings = {});

  int width() const { return angles_.width(); }
  int height() const { return angles_.height(); }
  double resolution() const { return resolution_; }

  double angle(int i, int j) const { return angles_(i, j); }
  double angle(Cell c) const { return angles_(c); }
  bool flagged(Cell c) const { return flags_(c) != 0; }

  const Grid<double>& angles() const { return angles_; }
  const Grid<std::uint8_t>& flags() const { return flags_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  friend bool operator==(const VectorField& a, const VectorField& b) {
    return a.resolution_ == b.resolution_ && a.angles_ == b.angles_ && a.flags_ == b.flags_;
  }

 private:
  Grid<double> angles_;
  double resolution_;
  Grid<std::uint8_t> flags_;
  std::vector<std::string> warnings_;
};

struct TransitionParams {
  double mu_p = 0.5;
  double sigma_p = 1.5;
  double mu_b = 0.5;
  double sigma_b = 1.5;
  double r_min = 20.0;

  /// mu in (0, 1], sigma in [1, 2], r_min > 0; throws ConstraintError.
  void validate() const;
};

enum class EdgeKind { Path, Border };

struct Edge {
  Cell cell;
  double angle;
};

struct EdgeSet {
  EdgeKind kind = EdgeKind::Path;
  std::vector<Edge> edges;
};

/// Safe-start cells that touch a Buffer cell, reachable or not.
std::vector<Cell> border_cells(const CompleteMap& m, const CostMap& cm);

/// Path tangents: direction from each path cell centre to the next; the last
/// cell reuses the preceding direction. Throws InputError for a non-path goal
/// set or fewer than two cells.
EdgeSet path_edges(const GoalCells& goals);

/// Border cells carrying the raw-field direction found there.
EdgeSet border_edges(const CompleteMap& m, const CostMap& cm, const VectorField& raw);

/// Edges of the requested kind. Border edges need the raw field.
EdgeSet edge_directions(EdgeKind kind, const GoalCells& goals, const CompleteMap& m,
                        const CostMap& cm, const VectorField& raw);

/// Gradient descent on free cells (argmin-cost 8-neighbour, ties broken
/// E, NE, N, NW, W, SW, S, SE), nearest-border pointing on obstacle and buffer
/// cells, path tangents on goal cells of a path mission (heading 0 on a single
/// goal cell), and nearest-finite-cell pointing on flagged unreachable cells.
VectorField raw_field(const CostMap& cm, const CompleteMap& m, const GoalCells& goals,
                      Exec exec = Exec::Parallel);

/// Rotates each vector within sigma*r_min of its nearest edge toward that
/// edge's direction by (1 - a) of the angle between them, with
/// a = mu * (d / (sigma * r_min)) * (angle / pi). Cells outside the band are
/// copied unchanged. An empty edge set returns the input with a warning.
VectorField apply_transition(const VectorField& field, const EdgeSet& edges,
                             const TransitionParams& params, Exec exec = Exec::Parallel);

/// Path transition (when `path` has edges) followed by the border transition.
VectorField transition_field(const VectorField& raw, const EdgeSet& path, const EdgeSet& border,
                             const TransitionParams& params, Exec exec = Exec::Parallel);

/// Side n = 2*ceil(2*sigma) + 1, sampled at integer offsets, sums to 1.
/// Throws ConstraintError for sigma <= 0.
Grid<double> gaussian_kernel(double sigma);

/// Convolution with gaussian_kernel(sigma), replicate-edge padding. The serial
/// path is the direct 2-D sum; the parallel path runs the separable form.
Grid<double> gaussian_convolve(const Grid<double>& values, double sigma, Exec exec = Exec::Parallel);

struct ComponentGrids {
  Grid<double> cos;
  Grid<double> sin;
};

/// Smoothed cos/sin component grids before renormalization.
ComponentGrids smooth_components(const VectorField& field, double sigma, Exec exec = Exec::Parallel);

/// Below this smoothed magnitude a cell keeps its incoming heading.
inline constexpr double kSmoothingMagnitudeFloor = 1e-6;

VectorField smooth_field(const VectorField& field, double sigma, Exec exec = Exec::Parallel);

}  // namespace fmplan
