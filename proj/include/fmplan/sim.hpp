// Closed-loop kinematic simulation of a constant-speed, bounded-turn-rate
// vehicle under the feedback plan.

#pragma once

#include <variant>
#include <vector>

#include "fmplan/field.hpp"
#include "fmplan/gridmap.hpp"
#include "fmplan/plan.hpp"

namespace fmplan {

struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // [0, 2*pi)
  double t = 0.0;

  Pose pose() const { return {x, y, theta}; }
  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

enum class Integrator { Euler, RK4 };

/// One fixed step of x' = v cos(theta), y' = v sin(theta), theta' = omega.
VehicleState step(const VehicleState& s, double omega, double v, double dt, Integrator integrator);

struct SingleGoal {
  Point position;
  double beta = 2.0;
};

struct PathState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

struct PathGoal {
  std::vector<PathState> states;
  double delta_x = 10.0;
  double delta_y = 10.0;
  double delta_theta = 0.5;
};

using GoalSpec = std::variant<SingleGoal, PathGoal>;

/// How the single-goal set compares distance with beta * r_min.
enum class GoalRadius {
  AsPrinted,  // (x - xg)^2 + (y - yg)^2 <= beta * r_min
  Radius,     // distance <= beta * r_min
};

/// Throws ConstraintError for beta < 2 or non-positive path tolerances.
void validate_goal(const GoalSpec& goal);

/// Single goal: inside the goal disc. Path: within all three tolerances of
/// some path state (headings compared modulo 2*pi).
bool in_goal(const VehicleState& s, const GoalSpec& goal, double r_min,
             GoalRadius radius = GoalRadius::Radius);

/// Termination test used by simulate(): single goal as in_goal(), path goals
/// only at the final path state.
bool at_mission_end(const VehicleState& s, const GoalSpec& goal, double r_min, GoalRadius radius);

/// Path states at path cell centres with tangent headings.
PathGoal path_goal_from(const EdgeSet& path, double resolution, double delta_x, double delta_y,
                        double delta_theta);

enum class Outcome { GoalReached, Timeout, Collision, OutOfBounds };

struct Trajectory {
  std::vector<VehicleState> samples;
  std::vector<double> commands;  // commands[k] drives samples[k] -> samples[k + 1]
  Outcome outcome = Outcome::Timeout;
  double dt = 0.0;
  Integrator integrator = Integrator::RK4;
  double v = 0.0;
  bool entered_flagged = false;  // visited a flagged (unreachable) field cell
};

struct SimOptions {
  double dt = 0.05;
  double t_max = 600.0;
  Integrator integrator = Integrator::RK4;
  GoalRadius goal_radius = GoalRadius::Radius;

  void validate() const;
};

/// Plan-then-step loop until the mission end, t > t_max, an obstacle cell or
/// leaving the workspace. Throws InputError for a start outside the workspace
/// or in an obstacle cell.
Trajectory simulate(const VehicleState& start, const CompleteMap& m, const VectorField& field,
                    const PlanParams& params, const GoalSpec& goal, const SimOptions& options);

/// Independent runs, one per start, OpenMP-parallel when requested.
std::vector<Trajectory> simulate_batch(const std::vector<VehicleState>& starts, const CompleteMap& m,
                                       const VectorField& field, const PlanParams& params,
                                       const GoalSpec& goal, const SimOptions& options,
                                       Exec exec = Exec::Parallel);

/// Re-integrates the recorded commands from the first sample.
std::vector<VehicleState> replay(const Trajectory& traj);

const char* to_string(Outcome outcome);

}  // namespace fmplan
