#pragma once

#include <numbers>

namespace fmplan {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2*pi).
double wrap_two_pi(double angle);

/// Wraps an angle into (-pi, pi].
double wrap_pi(double angle);

/// Shortest signed rotation taking `from` onto `to`, in (-pi, pi].
inline double signed_difference(double from, double to) { return wrap_pi(to - from); }

}  // namespace fmplan
