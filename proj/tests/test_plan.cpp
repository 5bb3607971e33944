#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fmplan/angles.hpp"
#include "fmplan/error.hpp"
#include "fmplan/plan.hpp"

using namespace fmplan;

namespace {

CompleteMap uniform_map(int w, int h, CellClass k, double res = 8.0) {
  Grid<CellClass> g(w, h, k);
  return CompleteMap(std::move(g), res, 2.0, 20.0);
}

}  // namespace

TEST(Plan, OmegaMaxFromSpeedAndRadius) {
  PlanParams p;
  EXPECT_EQ(p.v, 10.0);
  EXPECT_EQ(p.r_min, 20.0);
  EXPECT_EQ(p.omega_max(), 0.5);
  p.k_gain = 0.0;
  EXPECT_THROW(p.validate(), ConstraintError);
  p = {};
  p.v = -1.0;
  EXPECT_THROW(p.validate(), ConstraintError);
}

TEST(FieldDirection, CellCentresReturnTheCellAngle) {
  std::mt19937 rng(51);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  Grid<double> g(6, 4, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = u(rng);
  const VectorField f(g, 2.0);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 6; ++i) {
      const Point c = cell_center({i, j}, 2.0);
      EXPECT_EQ(field_direction(f, c.x, c.y, LookupMode::NearestCell), f.angle(i, j));
      EXPECT_NEAR(std::abs(wrap_pi(field_direction(f, c.x, c.y, LookupMode::Bilinear) - f.angle(i, j))), 0.0,
                  1e-12);
    }
  }
}

TEST(FieldDirection, MidpointBlendsComponents) {
  Grid<double> g(2, 1, 0.0);
  g(1, 0) = 0.5 * kPi;
  const VectorField f(g, 1.0);
  EXPECT_NEAR(field_direction(f, 1.0, 0.5, LookupMode::Bilinear), 0.25 * kPi, 1e-12);
  EXPECT_EQ(field_direction(f, 1.0, 0.5, LookupMode::NearestCell), 0.5 * kPi);
  // the outer half-cell ring clamps to the edge cells
  EXPECT_NEAR(field_direction(f, 0.1, 0.1, LookupMode::Bilinear), 0.0, 1e-12);
  EXPECT_NEAR(field_direction(f, 1.9, 0.9, LookupMode::Bilinear), 0.5 * kPi, 1e-12);
}

TEST(FieldDirection, UniformFieldAndBounds) {
  const VectorField f(Grid<double>(5, 5, 2.3), 4.0);
  std::mt19937 rng(52);
  std::uniform_real_distribution<double> u(0.0, 19.999);
  for (int k = 0; k < 200; ++k) {
    EXPECT_NEAR(field_direction(f, u(rng), u(rng), LookupMode::Bilinear), 2.3, 1e-12);
  }
  EXPECT_THROW(field_direction(f, 20.0, 1.0, LookupMode::Bilinear), OutOfBoundsError);
  EXPECT_THROW(field_direction(f, 1.0, -0.1, LookupMode::NearestCell), OutOfBoundsError);
}

TEST(HeadingError, Examples) {
  EXPECT_NEAR(heading_error(0.0, 0.5 * kPi), 0.5 * kPi, 1e-15);
  EXPECT_EQ(heading_error(1.3, 1.3), 0.0);
  const double e = heading_error(0.1, kTwoPi - 0.1);
  EXPECT_NEAR(e, -0.2, 1e-12);
  EXPECT_NEAR(std::abs(e), std::acos(std::cos(0.1) * std::cos(kTwoPi - 0.1) + std::sin(0.1) * std::sin(kTwoPi - 0.1)),
              1e-7);
  EXPECT_EQ(heading_error(0.0, kPi), kPi);
}

TEST(HeadingError, AntisymmetricAndMatchesDotProduct) {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int k = 0; k < 1000; ++k) {
    const double a = u(rng);
    const double b = u(rng);
    const double e = heading_error(a, b);
    EXPECT_GT(e, -kPi);
    EXPECT_LE(e, kPi);
    if (std::abs(std::abs(e) - kPi) > 1e-9) {
      EXPECT_NEAR(e, -heading_error(b, a), 1e-12);
    }
    const double dot = std::clamp(std::cos(a) * std::cos(b) + std::sin(a) * std::sin(b), -1.0, 1.0);
    EXPECT_NEAR(std::abs(e), std::acos(dot), 1e-6);
    // positive means turning counter-clockwise brings the heading onto the field
    const double cross = std::cos(a) * std::sin(b) - std::sin(a) * std::cos(b);
    if (std::abs(cross) > 1e-9) {
      EXPECT_EQ(e > 0.0, cross > 0.0);
    }
  }
}

TEST(PlanAction, BufferIsBangBang) {
  const CompleteMap m = uniform_map(4, 4, CellClass::Buffer);
  PlanParams p;
  p.lookup = LookupMode::NearestCell;
  const VectorField f(Grid<double>(4, 4, 0.01), 8.0);
  EXPECT_EQ(plan_action({10.0, 10.0, 0.0}, m, f, p), 0.5);
  EXPECT_EQ(plan_action({10.0, 10.0, 0.02}, m, f, p), -0.5);
  EXPECT_EQ(plan_action({10.0, 10.0, 0.01}, m, f, p), 0.0);
  // obstacle cells use the same branch
  const CompleteMap o = uniform_map(4, 4, CellClass::Obstacle);
  EXPECT_EQ(plan_action({10.0, 10.0, 0.0}, o, f, p), 0.5);
}

TEST(PlanAction, SafeStartUsesSaturatedGain) {
  const CompleteMap m = uniform_map(4, 4, CellClass::Free);
  PlanParams p;
  const VectorField zero(Grid<double>(4, 4, 0.0), 8.0);
  EXPECT_EQ(plan_action({10.0, 10.0, 0.0}, m, zero, p), 0.0);
  const VectorField back(Grid<double>(4, 4, kPi), 8.0);
  EXPECT_EQ(plan_action({10.0, 10.0, 0.0}, m, back, p), 0.5);
  const VectorField small(Grid<double>(4, 4, 0.1), 8.0);
  EXPECT_NEAR(plan_action({10.0, 10.0, 0.0}, m, small, p), 0.2, 1e-12);
  EXPECT_THROW(plan_action({-1.0, 10.0, 0.0}, m, small, p), OutOfBoundsError);
}

TEST(PlanAction, BoundedEverywhereAndPure) {
  std::mt19937 rng(54);
  std::uniform_real_distribution<double> ua(0.0, kTwoPi);
  std::uniform_real_distribution<double> ux(0.0, 79.999);
  Grid<CellClass> g(10, 10, CellClass::Free);
  Grid<double> angles(10, 10, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    g[k] = (k % 7 == 0) ? CellClass::Buffer : (k % 11 == 0 ? CellClass::Obstacle : CellClass::Free);
    angles[k] = ua(rng);
  }
  const CompleteMap m(g, 8.0, 2.0, 20.0);
  const VectorField f(angles, 8.0);
  PlanParams p;
  for (int k = 0; k < 2000; ++k) {
    const Pose pose{ux(rng), ux(rng), ua(rng)};
    const double w = plan_action(pose, m, f, p);
    EXPECT_LE(std::abs(w), p.omega_max());
    EXPECT_EQ(w, plan_action(pose, m, f, p));
    const CellClass c = m.at(m.cell_at(pose.x, pose.y));
    if (c == CellClass::Buffer || c == CellClass::Obstacle) {
      EXPECT_TRUE(w == 0.5 || w == -0.5 || w == 0.0);
    }
  }
}
