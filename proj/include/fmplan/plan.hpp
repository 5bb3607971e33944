// The feedback plan: heading error against the field and the region-dependent
// turn-rate command.

#pragma once

#include "fmplan/field.hpp"
#include "fmplan/gridmap.hpp"

namespace fmplan {

enum class LookupMode { NearestCell, Bilinear };

struct PlanParams {
  double v = 10.0;
  double r_min = 20.0;
  double k_gain = 2.0;  // 1/s
  LookupMode lookup = LookupMode::Bilinear;

  double omega_max() const { return v / r_min; }
  /// v, r_min, k_gain > 0; throws ConstraintError.
  void validate() const;
};

/// Field heading at a workspace point. NearestCell uses the containing cell;
/// Bilinear blends the cos/sin components of the four surrounding cell centres
/// (clamped to edge cells in the outer half-cell ring) and renormalizes.
/// Throws OutOfBoundsError outside [0, w*res) x [0, h*res).
double field_direction(const VectorField& field, double x, double y, LookupMode mode);

/// Signed error from vehicle heading to field heading, in (-pi, pi]. Its
/// magnitude is acos(v_hat . F_hat); positive turns counter-clockwise.
double heading_error(double theta_v, double theta_f);

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

/// Buffer or obstacle cell: omega_max * sign(error). Free or goal cell:
/// clamp(k_gain * error, -omega_max, omega_max).
double plan_action(const Pose& pose, const CompleteMap& m, const VectorField& field,
                   const PlanParams& params);

}  // namespace fmplan
