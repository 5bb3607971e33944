#include "fmplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmplan/angles.hpp"
#include "fmplan/error.hpp"

namespace fmplan {

HeadingMetrics heading_metrics(const Trajectory& traj, double hysteresis) {
  const auto& s = traj.samples;
  if (s.size() < 2) throw InputError("heading metrics need at least two samples");
  HeadingMetrics out;
  int confirmed = 0;  // current turn direction, 0 before the first confirmed turn
  int pending = 0;
  double pending_turn = 0.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double turn = std::abs(signed_difference(s[k].theta, s[k + 1].theta));
    out.total_variation += turn;

    const double omega = k < traj.commands.size() ? traj.commands[k] : s[k + 1].theta - s[k].theta;
    const int sign = omega > 0.0 ? 1 : (omega < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (sign == confirmed) {
      pending = 0;
      pending_turn = 0.0;
      continue;
    }
    if (sign != pending) {
      pending = sign;
      pending_turn = 0.0;
    }
    pending_turn += turn;
    if (pending_turn >= hysteresis) {
      if (confirmed != 0) ++out.oscillation_count;
      confirmed = sign;
      pending = 0;
      pending_turn = 0.0;
    }
  }
  return out;
}

namespace {

double point_segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

}  // namespace

double distance_to_polyline(Point p, std::span<const PathState> path) {
  if (path.empty()) throw InputError("cross-track error needs a non-empty path");
  if (path.size() == 1) return std::hypot(p.x - path[0].x, p.y - path[0].y);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    best = std::min(best, point_segment_distance(p, {path[k].x, path[k].y},
                                                 {path[k + 1].x, path[k + 1].y}));
  }
  return best;
}

CrossTrack cross_track(const Trajectory& traj, std::span<const PathState> path,
                       double approach_distance) {
  if (path.empty()) throw InputError("cross-track error needs a non-empty path");
  CrossTrack out;
  out.series.reserve(traj.samples.size());
  for (const VehicleState& s : traj.samples) out.series.push_back(distance_to_polyline({s.x, s.y}, path));
  if (out.series.empty()) return out;

  const auto first = std::find_if(out.series.begin(), out.series.end(),
                                  [approach_distance](double d) { return d < approach_distance; });
  out.approached = first != out.series.end();
  out.window_start = out.approached ? static_cast<std::size_t>(first - out.series.begin()) : 0;
  double sum = 0.0;
  for (std::size_t k = out.window_start; k < out.series.size(); ++k) {
    sum += out.series[k];
    out.max = std::max(out.max, out.series[k]);
  }
  out.mean = sum / static_cast<double>(out.series.size() - out.window_start);
  return out;
}

double buffer_dwell_fraction(const Trajectory& traj, const CompleteMap& m) {
  const auto& s = traj.samples;
  if (s.size() < 2) return 0.0;
  double in_buffer = 0.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    if (!m.contains_point(s[k].x, s[k].y)) continue;
    if (m.at(m.cell_at(s[k].x, s[k].y)) == CellClass::Buffer) in_buffer += s[k + 1].t - s[k].t;
  }
  const double elapsed = s.back().t - s.front().t;
  return elapsed > 0.0 ? in_buffer / elapsed : 0.0;
}

double path_length(const Trajectory& traj) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
    total += std::hypot(traj.samples[k + 1].x - traj.samples[k].x, traj.samples[k + 1].y - traj.samples[k].y);
  }
  return total;
}

MetricsReport evaluate(const Trajectory& traj, const CompleteMap& m, const GoalSpec& goal) {
  MetricsReport r;
  if (traj.samples.size() >= 2) {
    const HeadingMetrics h = heading_metrics(traj);
    r.heading_total_variation = h.total_variation;
    r.oscillation_count = h.oscillation_count;
  }
  if (const auto* path = std::get_if<PathGoal>(&goal)) {
    const CrossTrack ct = cross_track(traj, path->states, 2.0 * m.resolution());
    r.mean_cross_track = ct.mean;
    r.max_cross_track = ct.max;
  }
  if (traj.outcome == Outcome::GoalReached && !traj.samples.empty()) {
    r.time_to_goal = traj.samples.back().t - traj.samples.front().t;
  }
  r.path_length = path_length(traj);
  r.buffer_dwell_fraction = buffer_dwell_fraction(traj, m);
  return r;
}

}  // namespace fmplan
