#include "fmplan/plan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmplan/angles.hpp"
#include "fmplan/error.hpp"

namespace fmplan {

void PlanParams::validate() const {
  if (!(v > 0.0)) throw ConstraintError("v must be positive");
  if (!(r_min > 0.0)) throw ConstraintError("r_min must be positive");
  if (!(k_gain > 0.0)) throw ConstraintError("k_gain must be positive");
}

double field_direction(const VectorField& field, double x, double y, LookupMode mode) {
  const double res = field.resolution();
  const int w = field.width();
  const int h = field.height();
  if (!(x >= 0.0 && y >= 0.0 && x < w * res && y < h * res)) {
    throw OutOfBoundsError("position (" + std::to_string(x) + ", " + std::to_string(y) +
                           ") is outside the field");
  }
  const int ci = std::min(static_cast<int>(x / res), w - 1);
  const int cj = std::min(static_cast<int>(y / res), h - 1);
  if (mode == LookupMode::NearestCell) return field.angle(ci, cj);

  // continuous cell coordinates with centres on integers
  const double fx = std::clamp(x / res - 0.5, 0.0, static_cast<double>(w - 1));
  const double fy = std::clamp(y / res - 0.5, 0.0, static_cast<double>(h - 1));
  const int i0 = std::min(static_cast<int>(fx), std::max(w - 2, 0));
  const int j0 = std::min(static_cast<int>(fy), std::max(h - 2, 0));
  const int i1 = std::min(i0 + 1, w - 1);
  const int j1 = std::min(j0 + 1, h - 1);
  const double tx = fx - i0;
  const double ty = fy - j0;

  const double a00 = field.angle(i0, j0);
  const double a10 = field.angle(i1, j0);
  const double a01 = field.angle(i0, j1);
  const double a11 = field.angle(i1, j1);
  const double w00 = (1.0 - tx) * (1.0 - ty);
  const double w10 = tx * (1.0 - ty);
  const double w01 = (1.0 - tx) * ty;
  const double w11 = tx * ty;
  const double c = w00 * std::cos(a00) + w10 * std::cos(a10) + w01 * std::cos(a01) + w11 * std::cos(a11);
  const double s = w00 * std::sin(a00) + w10 * std::sin(a10) + w01 * std::sin(a01) + w11 * std::sin(a11);
  if (std::hypot(c, s) < 1e-12) return field.angle(ci, cj);
  return wrap_two_pi(std::atan2(s, c));
}

double heading_error(double theta_v, double theta_f) { return wrap_pi(theta_f - theta_v); }

double plan_action(const Pose& pose, const CompleteMap& m, const VectorField& field,
                   const PlanParams& params) {
  const Cell c = m.cell_at(pose.x, pose.y);
  const double error = heading_error(pose.theta, field_direction(field, pose.x, pose.y, params.lookup));
  const double omega_max = params.omega_max();
  const CellClass region = m.at(c);
  if (region == CellClass::Buffer || region == CellClass::Obstacle) {
    if (error > 0.0) return omega_max;
    if (error < 0.0) return -omega_max;
    return 0.0;
  }
  return std::clamp(params.k_gain * error, -omega_max, omega_max);
}

}  // namespace fmplan
