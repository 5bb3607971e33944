// Run configuration: one JSON document, individual keys overridable from the
// command line as dotted paths (transition.sigma_p=1.2).

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fmplan/error.hpp"
#include "fmplan/field.hpp"
#include "fmplan/gridmap.hpp"
#include "fmplan/io.hpp"
#include "fmplan/plan.hpp"
#include "fmplan/sim.hpp"

namespace fmplan {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct MapSource {
  std::filesystem::path path;
  double resolution = 2.0;  // of the file's pixels, m
};

struct SingleGoalMission {
  Point goal;  // m
  double beta = 2.0;
};

/// Waypoints in metres; rasterized into an 8-connected cell path at the
/// planning resolution.
struct PathMission {
  std::vector<Point> waypoints;
  double delta_x = 10.0;
  double delta_y = 10.0;
  double delta_theta = 0.5;
};

using Mission = std::variant<SingleGoalMission, PathMission>;

struct RunConfig {
  MapSource map;
  double resolution = 8.0;  // planning grid, m
  Mission mission;
  double alpha = 2.0;
  double v = 10.0;
  double r_min = 20.0;
  TransitionParams transition;  // r_min mirrors the top-level value
  double gaussian_sigma = 4.0;  // cells
  double k_gain = 2.0;
  double dt = 0.05;
  double t_max = 600.0;
  Integrator integrator = Integrator::RK4;
  LookupMode lookup = LookupMode::Bilinear;
  GoalRadius goal_radius = GoalRadius::Radius;
  std::vector<VehicleState> starts;
  std::filesystem::path output_dir = "out";

  PlanParams plan_params() const;
  SimOptions sim_options() const;
  bool is_path() const { return std::holds_alternative<PathMission>(mission); }

  /// Re-checks every parameter domain; throws ConfigError.
  void validate() const;
};

/// Relative map paths resolve against `base_dir`.
RunConfig parse_config(const Json& doc, const std::filesystem::path& base_dir = {});

/// Applies "dotted.key=value" overrides; values parse as JSON, else as strings.
void apply_overrides(Json& doc, const std::vector<std::string>& overrides);

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

Json to_json(const RunConfig& cfg);

/// Start states from CSV rows x,y,theta (an optional header line is skipped).
std::vector<VehicleState> read_start_states(std::istream& in);

}  // namespace fmplan
