#include "fmplan/angles.hpp"

#include <cmath>

namespace fmplan {

double wrap_two_pi(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  // -tiny + 2pi rounds to 2pi
  if (a >= kTwoPi) a = 0.0;
  return a;
}

double wrap_pi(double angle) {
  double a = std::fmod(angle + kPi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - kPi;
}

}  // namespace fmplan
