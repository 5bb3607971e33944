#include "fmplan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "fmplan/angles.hpp"
#include "fmplan/error.hpp"

namespace fmplan {

VehicleState step(const VehicleState& s, double omega, double v, double dt, Integrator integrator) {
  VehicleState out;
  if (integrator == Integrator::Euler) {
    out.x = s.x + dt * v * std::cos(s.theta);
    out.y = s.y + dt * v * std::sin(s.theta);
    out.theta = s.theta + dt * omega;
  } else {
    // the heading rate is constant over the step, so only theta moves the stages
    const double th1 = s.theta;
    const double th2 = s.theta + 0.5 * dt * omega;
    const double th3 = s.theta + 0.5 * dt * omega;
    const double th4 = s.theta + dt * omega;
    const double kx = std::cos(th1) + 2.0 * std::cos(th2) + 2.0 * std::cos(th3) + std::cos(th4);
    const double ky = std::sin(th1) + 2.0 * std::sin(th2) + 2.0 * std::sin(th3) + std::sin(th4);
    out.x = s.x + dt / 6.0 * v * kx;
    out.y = s.y + dt / 6.0 * v * ky;
    out.theta = s.theta + dt * omega;
  }
  out.theta = wrap_two_pi(out.theta);
  out.t = s.t + dt;
  return out;
}

void validate_goal(const GoalSpec& goal) {
  if (const auto* single = std::get_if<SingleGoal>(&goal)) {
    if (!(single->beta >= 2.0)) throw ConstraintError("beta must be >= 2");
    return;
  }
  const auto& path = std::get<PathGoal>(goal);
  if (path.states.empty()) throw InputError("path goal has no states");
  if (!(path.delta_x > 0.0 && path.delta_y > 0.0 && path.delta_theta > 0.0)) {
    throw ConstraintError("path tolerances must be positive");
  }
}

namespace {

bool near_state(const VehicleState& s, const PathState& p, const PathGoal& g) {
  return std::abs(s.x - p.x) < g.delta_x && std::abs(s.y - p.y) < g.delta_y &&
         std::abs(signed_difference(p.theta, s.theta)) < g.delta_theta;
}

bool in_single_goal(const VehicleState& s, const SingleGoal& g, double r_min, GoalRadius radius) {
  const double dx = s.x - g.position.x;
  const double dy = s.y - g.position.y;
  const double d2 = dx * dx + dy * dy;
  const double limit = g.beta * r_min;
  return radius == GoalRadius::AsPrinted ? d2 <= limit : d2 <= limit * limit;
}

}  // namespace

bool in_goal(const VehicleState& s, const GoalSpec& goal, double r_min, GoalRadius radius) {
  if (const auto* single = std::get_if<SingleGoal>(&goal)) {
    return in_single_goal(s, *single, r_min, radius);
  }
  const auto& path = std::get<PathGoal>(goal);
  for (const PathState& p : path.states) {
    if (near_state(s, p, path)) return true;
  }
  return false;
}

bool at_mission_end(const VehicleState& s, const GoalSpec& goal, double r_min, GoalRadius radius) {
  if (const auto* single = std::get_if<SingleGoal>(&goal)) {
    return in_single_goal(s, *single, r_min, radius);
  }
  const auto& path = std::get<PathGoal>(goal);
  return !path.states.empty() && near_state(s, path.states.back(), path);
}

PathGoal path_goal_from(const EdgeSet& path, double resolution, double delta_x, double delta_y,
                        double delta_theta) {
  PathGoal goal;
  goal.delta_x = delta_x;
  goal.delta_y = delta_y;
  goal.delta_theta = delta_theta;
  goal.states.reserve(path.edges.size());
  for (const Edge& e : path.edges) {
    const Point p = cell_center(e.cell, resolution);
    goal.states.push_back({p.x, p.y, e.angle});
  }
  return goal;
}

void SimOptions::validate() const {
  if (!(dt > 0.0)) throw ConstraintError("dt must be positive");
  if (!(t_max >= 0.0)) throw ConstraintError("t_max must be non-negative");
}

namespace {

void check_start(const VehicleState& start, const CompleteMap& m) {
  if (!m.contains_point(start.x, start.y)) {
    throw InputError("start (" + std::to_string(start.x) + ", " + std::to_string(start.y) +
                     ") is outside the workspace");
  }
  if (m.at(m.cell_at(start.x, start.y)) == CellClass::Obstacle) {
    throw InputError("start (" + std::to_string(start.x) + ", " + std::to_string(start.y) +
                     ") lies in an obstacle cell");
  }
}

Trajectory run(const VehicleState& start, const CompleteMap& m, const VectorField& field,
               const PlanParams& params, const GoalSpec& goal, const SimOptions& options) {
  Trajectory traj;
  traj.dt = options.dt;
  traj.integrator = options.integrator;
  traj.v = params.v;

  VehicleState s = start;
  s.theta = wrap_two_pi(s.theta);
  traj.samples.push_back(s);
  if (field.flagged(m.cell_at(s.x, s.y))) traj.entered_flagged = true;
  if (at_mission_end(s, goal, params.r_min, options.goal_radius)) {
    traj.outcome = Outcome::GoalReached;
    return traj;
  }
  const auto expected = static_cast<std::size_t>(options.t_max / options.dt) + 2;
  traj.samples.reserve(std::min<std::size_t>(expected, 1u << 20));
  traj.commands.reserve(traj.samples.capacity());

  for (;;) {
    const double omega = plan_action(s.pose(), m, field, params);
    s = step(s, omega, params.v, options.dt, options.integrator);
    traj.commands.push_back(omega);
    traj.samples.push_back(s);
    if (!m.contains_point(s.x, s.y)) {
      traj.outcome = Outcome::OutOfBounds;
      break;
    }
    const Cell c = m.cell_at(s.x, s.y);
    if (field.flagged(c)) traj.entered_flagged = true;
    if (m.at(c) == CellClass::Obstacle) {
      traj.outcome = Outcome::Collision;
      break;
    }
    if (at_mission_end(s, goal, params.r_min, options.goal_radius)) {
      traj.outcome = Outcome::GoalReached;
      break;
    }
    if (s.t > options.t_max) {
      traj.outcome = Outcome::Timeout;
      break;
    }
  }
  return traj;
}

}  // namespace

Trajectory simulate(const VehicleState& start, const CompleteMap& m, const VectorField& field,
                    const PlanParams& params, const GoalSpec& goal, const SimOptions& options) {
  params.validate();
  options.validate();
  validate_goal(goal);
  if (field.width() != m.width() || field.height() != m.height()) {
    throw InputError("field and complete map differ in dimensions");
  }
  check_start(start, m);
  return run(start, m, field, params, goal, options);
}

std::vector<Trajectory> simulate_batch(const std::vector<VehicleState>& starts, const CompleteMap& m,
                                       const VectorField& field, const PlanParams& params,
                                       const GoalSpec& goal, const SimOptions& options, Exec exec) {
  params.validate();
  options.validate();
  validate_goal(goal);
  if (field.width() != m.width() || field.height() != m.height()) {
    throw InputError("field and complete map differ in dimensions");
  }
  for (const VehicleState& s : starts) check_start(s, m);

  std::vector<Trajectory> out(starts.size());
  const auto n = static_cast<long>(starts.size());
  if (exec == Exec::Parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < n; ++k) {
      try {
        out[static_cast<std::size_t>(k)] = run(starts[static_cast<std::size_t>(k)], m, field, params, goal, options);
      } catch (...) {
#pragma omp critical(fmplan_batch_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (long k = 0; k < n; ++k) {
      out[static_cast<std::size_t>(k)] = run(starts[static_cast<std::size_t>(k)], m, field, params, goal, options);
    }
  }
  return out;
}

std::vector<VehicleState> replay(const Trajectory& traj) {
  std::vector<VehicleState> out;
  if (traj.samples.empty()) return out;
  out.push_back(traj.samples.front());
  for (double omega : traj.commands) {
    out.push_back(step(out.back(), omega, traj.v, traj.dt, traj.integrator));
  }
  return out;
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::GoalReached:
      return "GoalReached";
    case Outcome::Timeout:
      return "Timeout";
    case Outcome::Collision:
      return "Collision";
    case Outcome::OutOfBounds:
      return "OutOfBounds";
  }
  return "Unknown";
}

}  // namespace fmplan
