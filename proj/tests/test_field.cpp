#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fmplan/angles.hpp"
#include "fmplan/error.hpp"
#include "fmplan/field.hpp"
#include "oracles.hpp"

using namespace fmplan;

namespace {

constexpr double kTol = 1e-12;

CompleteMap from_classes(Grid<CellClass> cells, double res = 1.0) {
  return CompleteMap(std::move(cells), res, 2.0, 1.0);
}

GoalCells single(Cell c) { return {GoalKind::SingleGoal, {c}}; }

double angle_gap(double a, double b) { return std::abs(wrap_pi(a - b)); }

struct Scene {
  CompleteMap map;
  CostMap cost;
  GoalCells goals;
};

// Random obstacles with a two-wave buffer and a single goal on the first cell
// that lies in free space.
Scene random_scene(std::mt19937& rng, int w, int h, double density) {
  for (;;) {
    const OccupancyBitmap bm(oracle::random_occupancy(rng, w, h, density), 1.0);
    const Grid<double> fire = brushfire(bm.cells(), buffer_width_cells(2.0, 1.0, 1.0));
    std::vector<Cell> free_cells;
    for (std::size_t k = 0; k < fire.size(); ++k) {
      if (fire[k] == 0.0) free_cells.push_back(fire.cell(k));
    }
    if (free_cells.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, free_cells.size() - 1);
    GoalCells goals = single(free_cells[pick(rng)]);
    CompleteMap m = generate_complete_map(bm, goals, 2.0, 1.0);
    CostMap cm = expand_wavefront(m);
    return {std::move(m), std::move(cm), std::move(goals)};
  }
}

Grid<double> random_angles(std::mt19937& rng, int w, int h) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  Grid<double> g(w, h, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = u(rng);
  return g;
}

// Direct 2-D convolution with replicate padding, independent of the library.
Grid<double> reference_convolve(const Grid<double>& in, double sigma) {
  const int r = static_cast<int>(std::ceil(2.0 * sigma));
  Grid<double> out(in.width(), in.height(), 0.0);
  double norm = 0.0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) norm += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
  }
  for (int j = 0; j < in.height(); ++j) {
    for (int i = 0; i < in.width(); ++i) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int si = std::clamp(i + dx, 0, in.width() - 1);
          const int sj = std::clamp(j + dy, 0, in.height() - 1);
          acc += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma)) / norm * in(si, sj);
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace

TEST(RawField, ThreeByThreeCentreGoal) {
  Grid<CellClass> g(3, 3, CellClass::Free);
  g(1, 1) = CellClass::Goal;
  const CompleteMap m = from_classes(g);
  const VectorField f = raw_field(expand_wavefront(m), m, single({1, 1}));
  EXPECT_NEAR(f.angle(2, 1), kPi, kTol);
  EXPECT_NEAR(f.angle(1, 2), 1.5 * kPi, kTol);
  EXPECT_NEAR(f.angle(2, 2), 1.25 * kPi, kTol);
  EXPECT_NEAR(f.angle(0, 0), 0.25 * kPi, kTol);
  EXPECT_EQ(f.angle(1, 1), 0.0);
}

TEST(RawField, BufferCellPointsAtNearestBorder) {
  Grid<CellClass> g(5, 5, CellClass::Free);
  for (int i = 0; i < 5; ++i) {
    g(i, 0) = CellClass::Obstacle;
    g(i, 1) = CellClass::Buffer;
  }
  g(2, 4) = CellClass::Goal;
  const CompleteMap m = from_classes(g);
  const VectorField f = raw_field(expand_wavefront(m), m, single({2, 4}));
  EXPECT_NEAR(f.angle(2, 1), 0.5 * kPi, kTol);
  EXPECT_NEAR(f.angle(2, 0), 0.5 * kPi, kTol);
  EXPECT_FALSE(f.flagged({2, 1}));
}

TEST(RawField, NearestBorderTiesGoToTheLowestIndex) {
  Grid<CellClass> g(5, 5, CellClass::Free);
  g(2, 0) = CellClass::Obstacle;
  g(1, 0) = CellClass::Buffer;
  g(3, 0) = CellClass::Buffer;
  g(2, 1) = CellClass::Buffer;
  g(4, 4) = CellClass::Goal;
  const CompleteMap m = from_classes(g);
  const VectorField f = raw_field(expand_wavefront(m), m, single({4, 4}));
  // (1,1), (3,1) and (2,2) are all one cell from (2,1); (1,1) has the lowest index
  EXPECT_NEAR(f.angle(2, 1), kPi, kTol);
  // from (2,0), (1,1) and (3,1) tie on a diagonal
  EXPECT_NEAR(f.angle(2, 0), 0.75 * kPi, kTol);
}

TEST(RawField, FreeCellsDescendToTheCheapestNeighbour) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Scene s = random_scene(rng, 24, 18, 0.03);
    const VectorField f = raw_field(s.cost, s.map, s.goals);
    // border: safe cells with a Buffer cell among their 8 neighbours
    Grid<std::uint8_t> border(s.map.width(), s.map.height(), 0);
    for (int j = 0; j < s.map.height(); ++j) {
      for (int i = 0; i < s.map.width(); ++i) {
        if (!s.map.safe_start({i, j})) continue;
        for (int dj = -1; dj <= 1; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            if (s.map.cells().contains(i + di, j + dj) && s.map.at({i + di, j + dj}) == CellClass::Buffer) {
              border(i, j) = 1;
            }
          }
        }
      }
    }
    std::size_t listed = 0;
    for (const Cell& c : border_cells(s.map, s.cost)) {
      EXPECT_EQ(border(c), 1);
      ++listed;
    }
    EXPECT_EQ(listed, static_cast<std::size_t>(std::count(border.data().begin(), border.data().end(), 1)));

    for (std::size_t k = 0; k < f.angles().size(); ++k) {
      const Cell c = f.angles().cell(k);
      const double a = f.angle(c);
      ASSERT_GE(a, 0.0);
      ASSERT_LT(a, kTwoPi);
      switch (s.cost.kind(c)) {
        case CostKind::Finite: {
          if (s.map.at(c) == CellClass::Goal) break;
          double best = s.cost.cost(c);
          for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
              const Cell n{c.i + di, c.j + dj};
              if (s.cost.costs().contains(n) && s.cost.finite(n)) best = std::min(best, s.cost.cost(n));
            }
          }
          const Cell n{c.i + static_cast<int>(std::lround(std::cos(a) * 1.2)),
                       c.j + static_cast<int>(std::lround(std::sin(a) * 1.2))};
          ASSERT_TRUE(s.cost.costs().contains(n));
          EXPECT_EQ(s.cost.cost(n), best);
          EXPECT_LT(best, s.cost.cost(c));
          break;
        }
        case CostKind::Obstacle:
        case CostKind::Buffer: {
          const auto target = oracle::nearest(border, c);
          ASSERT_TRUE(target.has_value());
          EXPECT_NEAR(a, wrap_two_pi(std::atan2(target->j - c.j, target->i - c.i)), kTol);
          break;
        }
        case CostKind::Unreachable:
          EXPECT_TRUE(f.flagged(c));
          break;
      }
    }
  }
}

TEST(RawField, UnreachableCellsAreFlaggedAndPointAtFiniteCells) {
  Grid<CellClass> g(6, 3, CellClass::Free);
  for (int j = 0; j < 3; ++j) g(3, j) = CellClass::Buffer;
  g(0, 1) = CellClass::Goal;
  const CompleteMap m = from_classes(g);
  const VectorField f = raw_field(expand_wavefront(m), m, single({0, 1}));
  for (int i = 4; i < 6; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_TRUE(f.flagged({i, j}));
  }
  EXPECT_NEAR(f.angle(4, 1), kPi, kTol);
  EXPECT_FALSE(f.flagged({1, 1}));
}

TEST(RawField, PathGoalCellsCarryTangents) {
  Grid<CellClass> g(5, 5, CellClass::Free);
  const GoalCells path{GoalKind::Path, {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}}};
  for (const Cell& c : path.cells) g(c) = CellClass::Goal;
  const CompleteMap m = from_classes(g);
  const VectorField f = raw_field(expand_wavefront(m), m, path);
  EXPECT_NEAR(f.angle(0, 0), 0.0, kTol);
  EXPECT_NEAR(f.angle(1, 0), 0.0, kTol);
  EXPECT_NEAR(f.angle(2, 0), 0.5 * kPi, kTol);
  EXPECT_NEAR(f.angle(2, 2), 0.5 * kPi, kTol);
}

TEST(Edges, PathDirections) {
  const EdgeSet straight = path_edges({GoalKind::Path, {{0, 0}, {1, 0}, {2, 0}}});
  ASSERT_EQ(straight.edges.size(), 3u);
  for (const Edge& e : straight.edges) EXPECT_EQ(e.angle, 0.0);

  const EdgeSet ell = path_edges({GoalKind::Path, {{0, 0}, {1, 0}, {1, 1}}});
  ASSERT_EQ(ell.edges.size(), 3u);
  EXPECT_NEAR(ell.edges[0].angle, 0.0, kTol);
  EXPECT_NEAR(ell.edges[1].angle, 0.5 * kPi, kTol);
  EXPECT_NEAR(ell.edges[2].angle, 0.5 * kPi, kTol);

  EXPECT_THROW(path_edges({GoalKind::Path, {{0, 0}}}), InputError);
  EXPECT_THROW(path_edges({GoalKind::SingleGoal, {{0, 0}, {1, 0}}}), InputError);
}

TEST(Edges, BorderEdgesCopyTheRawDirection) {
  Grid<CellClass> g(5, 5, CellClass::Free);
  g(2, 4) = CellClass::Buffer;
  g(2, 0) = CellClass::Goal;
  const CompleteMap m = from_classes(g);
  const CostMap cm = expand_wavefront(m);
  const VectorField raw = raw_field(cm, m, single({2, 0}));
  const EdgeSet border = edge_directions(EdgeKind::Border, single({2, 0}), m, cm, raw);
  ASSERT_EQ(border.edges.size(), 5u);
  for (const Edge& e : border.edges) {
    EXPECT_EQ(m.at(e.cell), CellClass::Free);
    EXPECT_EQ(e.angle, raw.angle(e.cell));
  }
  // (2,3) sits right above the goal column: its raw vector is (0, -1)
  const auto it = std::find_if(border.edges.begin(), border.edges.end(),
                               [](const Edge& e) { return e.cell == Cell{2, 3}; });
  ASSERT_NE(it, border.edges.end());
  EXPECT_NEAR(it->angle, 1.5 * kPi, kTol);
}

TEST(Transition, ParamsValidate) {
  TransitionParams p;
  EXPECT_NO_THROW(p.validate());
  p.mu_b = 0.0;
  EXPECT_THROW(p.validate(), ConstraintError);
  p = {};
  p.sigma_p = 2.5;
  EXPECT_THROW(p.validate(), ConstraintError);
  p = {};
  p.r_min = 0.0;
  EXPECT_THROW(p.validate(), ConstraintError);
}

TEST(Transition, HandComputedCells) {
  // res 1, r_min 2, sigma 1.5: band 3 m. Edge at (0,0) pointing west.
  const VectorField raw(Grid<double>(8, 3, 0.0), 1.0);
  TransitionParams p;
  p.r_min = 2.0;
  const EdgeSet edges{EdgeKind::Border, {{{0, 0}, kPi}}};
  const VectorField t = apply_transition(raw, edges, p, Exec::Serial);
  // d = 0: aligned with the edge exactly
  EXPECT_NEAR(t.angle(0, 0), kPi, 1e-6);
  // d = band, delta = pi: a = mu, rotation (1 - mu) * pi, positive sense
  EXPECT_NEAR(t.angle(3, 0), 0.5 * kPi, kTol);
  // d = 1, delta = pi: a = 0.5 / 3, rotation (1 - 1/6) * pi
  EXPECT_NEAR(t.angle(1, 0), (1.0 - 0.5 / 3.0) * kPi, kTol);
  // just outside the band
  EXPECT_EQ(t.angle(4, 0), 0.0);
  EXPECT_EQ(t.angle(3, 1), 0.0);
}

TEST(Transition, RotatesTheShortWay) {
  const VectorField raw(Grid<double>(3, 1, 0.2), 1.0);
  TransitionParams p;
  p.r_min = 2.0;
  const EdgeSet edges{EdgeKind::Path, {{{0, 0}, kTwoPi - 0.2}}};
  const VectorField t = apply_transition(raw, edges, p, Exec::Serial);
  // delta = 0.4 clockwise; d = 1: a = 0.5 * (1/3) * (0.4 / pi)
  const double a = 0.5 / 3.0 * 0.4 / kPi;
  EXPECT_NEAR(t.angle(1, 0), 0.2 - (1.0 - a) * 0.4 + kTwoPi, kTol);
}

TEST(Transition, EmptyEdgeSetIsIdentityWithWarning) {
  std::mt19937 rng(4);
  const VectorField raw(random_angles(rng, 5, 5), 1.0);
  const VectorField t = apply_transition(raw, EdgeSet{EdgeKind::Border, {}}, TransitionParams{});
  EXPECT_EQ(t, raw);
  ASSERT_EQ(t.warnings().size(), 1u);
  EXPECT_NE(t.warnings()[0].find("border"), std::string::npos);
}

TEST(Transition, LocalityAlignmentAndBound) {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 30;
    const int h = 25;
    const VectorField raw(random_angles(rng, w, h), 2.0);
    std::uniform_int_distribution<int> ci(0, w - 1);
    std::uniform_int_distribution<int> cj(0, h - 1);
    std::uniform_real_distribution<double> ua(0.0, kTwoPi);
    EdgeSet edges{trial % 2 ? EdgeKind::Path : EdgeKind::Border, {}};
    Grid<std::uint8_t> is_edge(w, h, 0);
    for (int k = 0; k < 6; ++k) {
      const Cell c{ci(rng), cj(rng)};
      if (is_edge(c)) continue;
      is_edge(c) = 1;
      edges.edges.push_back({c, ua(rng)});
    }
    TransitionParams p;
    p.r_min = 5.0;
    p.sigma_p = 1.0 + 0.1 * (trial % 10);
    p.sigma_b = 2.0 - 0.1 * (trial % 10);
    p.mu_p = 0.3;
    p.mu_b = 0.9;
    const double band = (edges.kind == EdgeKind::Path ? p.sigma_p : p.sigma_b) * p.r_min;
    const VectorField t = apply_transition(raw, edges, p, Exec::Serial);
    EXPECT_EQ(t, apply_transition(raw, edges, p, Exec::Parallel));

    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) {
        const Cell c{i, j};
        const auto e = oracle::nearest(is_edge, c);
        const double d = 2.0 * std::hypot(e->i - i, e->j - j);
        const double edge_angle =
            std::find_if(edges.edges.begin(), edges.edges.end(), [&](const Edge& x) { return x.cell == *e; })->angle;
        const double delta = angle_gap(raw.angle(c), edge_angle);
        if (d > band) {
          EXPECT_EQ(t.angle(c), raw.angle(c));
        } else {
          EXPECT_LE(angle_gap(t.angle(c), raw.angle(c)), delta + 1e-12);
          // the rotated vector never overshoots the edge direction
          EXPECT_LE(angle_gap(t.angle(c), edge_angle), delta + 1e-12);
        }
        if (is_edge(c)) {
          EXPECT_LE(angle_gap(t.angle(c), edge_angle), 1e-6);
        }
        EXPECT_NEAR(std::hypot(std::cos(t.angle(c)), std::sin(t.angle(c))), 1.0, 1e-9);
      }
    }
  }
}

TEST(Transition, PathThenBorder) {
  std::mt19937 rng(44);
  const VectorField raw(random_angles(rng, 12, 12), 1.0);
  const EdgeSet path{EdgeKind::Path, {{{3, 3}, 0.3}, {{4, 3}, 0.3}}};
  const EdgeSet border{EdgeKind::Border, {{{5, 3}, 2.0}}};
  TransitionParams p;
  p.r_min = 2.0;
  const VectorField both = transition_field(raw, path, border, p);
  EXPECT_EQ(both, apply_transition(apply_transition(raw, path, p), border, p));
  // an edge cell of both kinds ends on the border direction
  EXPECT_NEAR(both.angle(5, 3), 2.0, 1e-12);
  EXPECT_EQ(transition_field(raw, EdgeSet{}, border, p), apply_transition(raw, border, p));
}

TEST(Gaussian, KernelShape) {
  EXPECT_EQ(gaussian_kernel(2.0).width(), 9);
  EXPECT_EQ(gaussian_kernel(1.2).width(), 7);
  EXPECT_EQ(gaussian_kernel(0.2).width(), 3);
  for (double sigma : {0.5, 1.0, 2.0, 4.0, 6.0, 16.0}) {
    const Grid<double> k = gaussian_kernel(sigma);
    const int n = 2 * static_cast<int>(std::ceil(2.0 * sigma)) + 1;
    ASSERT_EQ(k.width(), n);
    ASSERT_EQ(k.height(), n);
    double sum = 0.0;
    for (std::size_t q = 0; q < k.size(); ++q) sum += k[q];
    EXPECT_NEAR(sum, 1.0, 1e-12) << sigma;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        EXPECT_NEAR(k(i, j), k(n - 1 - j, i), 1e-15);
        EXPECT_NEAR(k(i, j), k(i, n - 1 - j), 1e-15);
      }
    }
  }
  EXPECT_THROW(gaussian_kernel(0.0), ConstraintError);
  EXPECT_THROW(gaussian_kernel(-1.0), ConstraintError);
}

TEST(Gaussian, ConvolutionMatchesReference) {
  std::mt19937 rng(45);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double sigma : {0.5, 1.0, 2.5}) {
    Grid<double> g(11, 7, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = u(rng);
    const Grid<double> expect = reference_convolve(g, sigma);
    const Grid<double> serial = gaussian_convolve(g, sigma, Exec::Serial);
    const Grid<double> parallel = gaussian_convolve(g, sigma, Exec::Parallel);
    for (std::size_t k = 0; k < g.size(); ++k) {
      EXPECT_NEAR(serial[k], expect[k], 1e-12);
      EXPECT_NEAR(parallel[k], expect[k], 1e-12);
    }
  }
}

TEST(Smoothing, UniformFieldIsFixed) {
  for (double sigma : {0.2, 1.0, 4.0}) {
    const VectorField f(Grid<double>(9, 6, 1.1), 3.0);
    const VectorField s = smooth_field(f, sigma);
    for (std::size_t k = 0; k < s.angles().size(); ++k) EXPECT_NEAR(s.angles()[k], 1.1, 1e-12);
  }
  const VectorField one(Grid<double>(1, 1, 4.0), 1.0);
  EXPECT_NEAR(smooth_field(one, 0.2).angle(0, 0), 4.0, 1e-12);
}

TEST(Smoothing, ComponentsAreLinear) {
  std::mt19937 rng(46);
  const VectorField a(random_angles(rng, 10, 8), 1.0);
  const VectorField b(random_angles(rng, 10, 8), 1.0);
  const double c1 = 0.7;
  const double c2 = -1.3;
  Grid<double> mix(10, 8, 0.0);
  for (std::size_t k = 0; k < mix.size(); ++k) {
    mix[k] = c1 * std::cos(a.angles()[k]) + c2 * std::cos(b.angles()[k]);
  }
  const Grid<double> lhs = gaussian_convolve(mix, 1.5);
  const ComponentGrids sa = smooth_components(a, 1.5);
  const ComponentGrids sb = smooth_components(b, 1.5);
  for (std::size_t k = 0; k < mix.size(); ++k) EXPECT_NEAR(lhs[k], c1 * sa.cos[k] + c2 * sb.cos[k], 1e-12);
}

TEST(Smoothing, SeamKeepsIncomingAngle) {
  // With 2 sigma^2 = 1 / ln 2 the taps are 2^-x^2, so the centre weights
  // (1/16, 1/2, 1, 1/2, 1/16) cancel both components of this row exactly.
  const double sigma = 1.0 / std::sqrt(2.0 * std::log(2.0));
  Grid<double> row(5, 1, 0.0);
  const double angles[] = {0.5 * kPi, kPi, 0.0, kPi, 1.5 * kPi};
  for (int i = 0; i < 5; ++i) row(i, 0) = angles[i];
  const VectorField f(row, 1.0);
  for (Exec exec : {Exec::Serial, Exec::Parallel}) {
    const ComponentGrids comp = smooth_components(f, sigma, exec);
    EXPECT_LT(std::hypot(comp.cos(2, 0), comp.sin(2, 0)), kSmoothingMagnitudeFloor);
    const VectorField s = smooth_field(f, sigma, exec);
    EXPECT_EQ(s.angle(2, 0), 0.0);
    EXPECT_NE(s.angle(1, 0), kPi);
  }
}

TEST(Smoothing, OpposingHalfPlanesStayUnitAndSerialMatchesParallel) {
  Grid<double> g(12, 6, 0.0);
  for (int j = 0; j < 6; ++j) {
    for (int i = 6; i < 12; ++i) g(i, j) = kPi;
  }
  const VectorField f(g, 1.0);
  const VectorField s = smooth_field(f, 2.0, Exec::Serial);
  const VectorField p = smooth_field(f, 2.0, Exec::Parallel);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_LE(angle_gap(s.angles()[k], p.angles()[k]), 1e-9);
    EXPECT_GE(s.angles()[k], 0.0);
    EXPECT_LT(s.angles()[k], kTwoPi);
  }
}

TEST(FieldStages, RandomScenesSerialMatchesParallel) {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 8; ++trial) {
    const Scene s = random_scene(rng, 32, 26, 0.02);
    const VectorField raw = raw_field(s.cost, s.map, s.goals, Exec::Serial);
    EXPECT_EQ(raw, raw_field(s.cost, s.map, s.goals, Exec::Parallel));
    TransitionParams p;
    p.r_min = 1.5;
    const EdgeSet border = border_edges(s.map, s.cost, raw);
    const VectorField t = transition_field(raw, EdgeSet{}, border, p, Exec::Serial);
    EXPECT_EQ(t, transition_field(raw, EdgeSet{}, border, p, Exec::Parallel));
    const VectorField a = smooth_field(t, 2.0, Exec::Serial);
    const VectorField b = smooth_field(t, 2.0, Exec::Parallel);
    for (std::size_t k = 0; k < a.angles().size(); ++k) EXPECT_LE(angle_gap(a.angles()[k], b.angles()[k]), 1e-9);
  }
}
