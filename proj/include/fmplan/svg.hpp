// Self-contained SVG plots: trajectories over the complete map, the field as
// arrows, and line charts of time series.

#pragma once

#include <string>
#include <vector>

#include "fmplan/field.hpp"
#include "fmplan/gridmap.hpp"
#include "fmplan/sim.hpp"

namespace fmplan::svg {

struct Series {
  std::string label;
  std::vector<Point> points;
};

struct Overlay {
  std::string label;
  const Trajectory* trajectory = nullptr;
};

/// Map cells (obstacle, buffer, free, goal), an optional reference path and
/// trajectory polylines. `field` adds one arrow per `arrow_stride` cells.
std::string map_plot(const CompleteMap& m, const std::vector<Overlay>& overlays,
                     const std::vector<PathState>& reference = {}, const VectorField* field = nullptr,
                     int arrow_stride = 2);

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series);

}  // namespace fmplan::svg
