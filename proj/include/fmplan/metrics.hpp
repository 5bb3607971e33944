// Trajectory quality measures: heading smoothness (total variation and a
// hysteretic oscillation count) and cross-track error against a path polyline.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fmplan/gridmap.hpp"
#include "fmplan/sim.hpp"

namespace fmplan {

struct HeadingMetrics {
  double total_variation = 0.0;
  int oscillation_count = 0;
};

inline constexpr double kOscillationHysteresis = 0.01;  // rad

/// total_variation = sum |wrap(theta[k+1] - theta[k])|. A turn-direction
/// reversal counts once the turning accumulated in the new direction reaches
/// `hysteresis` radians. Throws InputError below two samples.
HeadingMetrics heading_metrics(const Trajectory& traj, double hysteresis = kOscillationHysteresis);

struct CrossTrack {
  double mean = 0.0;
  double max = 0.0;
  std::vector<double> series;  // one distance per sample
  bool approached = false;     // false: the window fell back to the whole run
  std::size_t window_start = 0;
};

/// Distance from each sample to the polyline through the path states. Mean
/// and max cover samples from the first one closer than `approach_distance`.
/// Throws InputError for an empty path.
CrossTrack cross_track(const Trajectory& traj, std::span<const PathState> path,
                       double approach_distance);

double distance_to_polyline(Point p, std::span<const PathState> path);

struct MetricsReport {
  double heading_total_variation = 0.0;
  int oscillation_count = 0;
  std::optional<double> mean_cross_track;
  std::optional<double> max_cross_track;
  std::optional<double> time_to_goal;  // set iff the outcome is GoalReached
  double path_length = 0.0;
  double buffer_dwell_fraction = 0.0;
};

/// Fraction of elapsed time spent in Buffer cells.
double buffer_dwell_fraction(const Trajectory& traj, const CompleteMap& m);

double path_length(const Trajectory& traj);

/// All measures for one run. Cross-track fields are filled for path goals.
MetricsReport evaluate(const Trajectory& traj, const CompleteMap& m, const GoalSpec& goal);

}  // namespace fmplan
