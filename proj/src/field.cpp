#include "fmplan/field.hpp"

#include <algorithm>
#include <cmath>

#include "fmplan/angles.hpp"
#include "fmplan/error.hpp"
#include "nearest.hpp"

namespace fmplan {

VectorField::VectorField(Grid<double> angles, double resolution, Grid<std::uint8_t> flagged,
                         std::vector<std::string> warnings)
    : angles_(std::move(angles)),
      resolution_(resolution),
      flags_(std::move(flagged)),
      warnings_(std::move(warnings)) {
  if (!(resolution_ > 0.0)) throw ConstraintError("field resolution must be positive");
  if (angles_.empty()) throw InputError("field has no cells");
  if (flags_.empty()) flags_ = Grid<std::uint8_t>(angles_.width(), angles_.height(), 0);
  if (!flags_.same_shape(angles_)) throw InputError("field flag grid differs in shape");
  for (double& a : angles_.data()) {
    if (!std::isfinite(a)) throw InputError("field angles must be finite");
    a = wrap_two_pi(a);
  }
}

void TransitionParams::validate() const {
  auto check_mu = [](double mu, const char* name) {
    if (!(mu > 0.0 && mu <= 1.0)) throw ConstraintError(std::string(name) + " must lie in (0, 1]");
  };
  auto check_sigma = [](double sigma, const char* name) {
    if (!(sigma >= 1.0 && sigma <= 2.0)) throw ConstraintError(std::string(name) + " must lie in [1, 2]");
  };
  check_mu(mu_p, "mu_p");
  check_mu(mu_b, "mu_b");
  check_sigma(sigma_p, "sigma_p");
  check_sigma(sigma_b, "sigma_b");
  if (!(r_min > 0.0)) throw ConstraintError("r_min must be positive");
}

namespace {

// Exact multiples of pi/4 for unit compass steps.
double compass_angle(int di, int dj) {
  for (std::size_t k = 0; k < kCompassNeighbours.size(); ++k) {
    if (kCompassNeighbours[k].di == di && kCompassNeighbours[k].dj == dj) {
      return static_cast<double>(k) * (kPi / 4.0);
    }
  }
  return wrap_two_pi(std::atan2(static_cast<double>(dj), static_cast<double>(di)));
}

double direction_to(Cell from, Cell to) {
  return compass_angle(to.i - from.i, to.j - from.j);
}

void require_same_shape(const CostMap& cm, const CompleteMap& m) {
  if (cm.width() != m.width() || cm.height() != m.height()) {
    throw InputError("cost map and complete map differ in dimensions");
  }
}

}  // namespace

std::vector<Cell> border_cells(const CompleteMap& m, const CostMap& cm) {
  require_same_shape(cm, m);
  std::vector<Cell> out;
  for (int j = 0; j < m.height(); ++j) {
    for (int i = 0; i < m.width(); ++i) {
      const Cell c{i, j};
      if (!m.safe_start(c)) continue;
      for (const Offset& o : kCompassNeighbours) {
        const Cell n{i + o.di, j + o.dj};
        if (m.cells().contains(n) && m.at(n) == CellClass::Buffer) {
          out.push_back(c);
          break;
        }
      }
    }
  }
  return out;
}

EdgeSet path_edges(const GoalCells& goals) {
  if (goals.kind != GoalKind::Path) throw InputError("path edges need a path goal set");
  if (goals.cells.size() < 2) throw InputError("a path mission needs at least two path cells");
  EdgeSet out;
  out.kind = EdgeKind::Path;
  out.edges.reserve(goals.cells.size());
  for (std::size_t k = 0; k + 1 < goals.cells.size(); ++k) {
    out.edges.push_back({goals.cells[k], direction_to(goals.cells[k], goals.cells[k + 1])});
  }
  out.edges.push_back({goals.cells.back(), out.edges.back().angle});
  return out;
}

EdgeSet border_edges(const CompleteMap& m, const CostMap& cm, const VectorField& raw) {
  EdgeSet out;
  out.kind = EdgeKind::Border;
  for (const Cell& c : border_cells(m, cm)) out.edges.push_back({c, raw.angle(c)});
  return out;
}

EdgeSet edge_directions(EdgeKind kind, const GoalCells& goals, const CompleteMap& m,
                        const CostMap& cm, const VectorField& raw) {
  return kind == EdgeKind::Path ? path_edges(goals) : border_edges(m, cm, raw);
}

VectorField raw_field(const CostMap& cm, const CompleteMap& m, const GoalCells& goals, Exec exec) {
  require_same_shape(cm, m);
  const int w = m.width();
  const int h = m.height();

  Grid<double> goal_heading(w, h, 0.0);
  if (goals.kind == GoalKind::Path) {
    const EdgeSet tangents = path_edges(goals);
    // first visit wins where a path crosses itself
    for (auto it = tangents.edges.rbegin(); it != tangents.edges.rend(); ++it) {
      goal_heading(it->cell) = it->angle;
    }
  }

  const std::vector<Cell> border = border_cells(m, cm);
  const detail::NearestCells border_index(w, h, border);
  std::vector<Cell> finite;
  bool any_unreachable = false;
  for (std::size_t k = 0; k < cm.costs().size(); ++k) {
    const CostKind kind = cm.kinds()[k];
    if (kind == CostKind::Finite) finite.push_back(cm.costs().cell(k));
    if (kind == CostKind::Unreachable) any_unreachable = true;
  }
  const detail::NearestCells finite_index(w, h, any_unreachable ? finite : std::vector<Cell>{});

  Grid<double> angles(w, h, 0.0);
  Grid<std::uint8_t> flags(w, h, 0);

  auto fill = [&](int i, int j) {
    const Cell c{i, j};
    if (m.at(c) == CellClass::Goal) {
      angles(c) = goal_heading(c);
      return;
    }
    switch (cm.kind(c)) {
      case CostKind::Finite: {
        double best = cm.cost(c);
        const Offset* pick = nullptr;
        for (const Offset& o : kCompassNeighbours) {
          const Cell n{i + o.di, j + o.dj};
          if (!cm.costs().contains(n) || !cm.finite(n)) continue;
          if (cm.cost(n) < best) {
            best = cm.cost(n);
            pick = &o;
          }
        }
        if (pick) {
          angles(c) = compass_angle(pick->di, pick->dj);
        } else {
          flags(c) = 1;
        }
        break;
      }
      case CostKind::Unreachable: {
        flags(c) = 1;
        if (const auto hit = finite_index.nearest(c)) angles(c) = direction_to(c, finite[hit->id]);
        break;
      }
      case CostKind::Obstacle:
      case CostKind::Buffer: {
        if (const auto hit = border_index.nearest(c)) {
          angles(c) = direction_to(c, border[hit->id]);
        } else {
          flags(c) = 1;
        }
        break;
      }
    }
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) fill(i, j);
    }
  } else {
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) fill(i, j);
    }
  }
  return VectorField(std::move(angles), m.resolution(), std::move(flags));
}

VectorField apply_transition(const VectorField& field, const EdgeSet& edges,
                             const TransitionParams& params, Exec exec) {
  params.validate();
  if (edges.edges.empty()) {
    std::vector<std::string> warnings = field.warnings();
    warnings.emplace_back(edges.kind == EdgeKind::Path ? "empty path edge set: transition skipped"
                                                       : "empty border edge set: transition skipped");
    return VectorField(field.angles(), field.resolution(), field.flags(), std::move(warnings));
  }
  const int w = field.width();
  const int h = field.height();
  std::vector<Cell> cells;
  cells.reserve(edges.edges.size());
  for (const Edge& e : edges.edges) {
    if (!field.angles().contains(e.cell)) throw InputError("edge cell outside the field");
    cells.push_back(e.cell);
  }
  const detail::NearestCells index(w, h, cells);

  const bool path = edges.kind == EdgeKind::Path;
  const double mu = path ? params.mu_p : params.mu_b;
  const double band = (path ? params.sigma_p : params.sigma_b) * params.r_min;
  const double res = field.resolution();
  const double band_cells = band / res;
  const auto max_d2 = static_cast<std::int64_t>(std::ceil(band_cells * band_cells)) + 1;

  Grid<double> out = field.angles();
  auto rotate = [&](int i, int j) {
    const Cell c{i, j};
    const auto hit = index.nearest(c, max_d2);
    if (!hit) return;
    const double d = res * std::sqrt(static_cast<double>(hit->d2));
    if (d > band) return;
    const double theta_c = field.angle(c);
    const double theta_e = edges.edges[static_cast<std::size_t>(hit->id)].angle;
    const double diff = signed_difference(theta_c, theta_e);
    // |diff| equals acos(F(p_c) . F(p_e)) for unit vectors, without acos's
    // loss of precision near 0 and pi
    const double delta = std::abs(diff);
    const double s = diff >= 0.0 ? 1.0 : -1.0;
    const double a = mu * (d / band) * (delta / kPi);
    out(c) = wrap_two_pi(theta_c + s * (1.0 - a) * delta);
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) rotate(i, j);
    }
  } else {
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) rotate(i, j);
    }
  }
  return VectorField(std::move(out), res, field.flags(), field.warnings());
}

VectorField transition_field(const VectorField& raw, const EdgeSet& path, const EdgeSet& border,
                             const TransitionParams& params, Exec exec) {
  if (path.edges.empty()) return apply_transition(raw, border, params, exec);
  return apply_transition(apply_transition(raw, path, params, exec), border, params, exec);
}

namespace {

int kernel_half_width(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConstraintError("gaussian sigma must be positive");
  return static_cast<int>(std::ceil(2.0 * sigma));
}

std::vector<double> gaussian_taps(double sigma) {
  const int half = kernel_half_width(sigma);
  std::vector<double> taps(static_cast<std::size_t>(2 * half + 1));
  double sum = 0.0;
  for (int d = -half; d <= half; ++d) {
    taps[static_cast<std::size_t>(d + half)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += taps[static_cast<std::size_t>(d + half)];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

Grid<double> convolve_direct(const Grid<double>& in, const Grid<double>& kernel) {
  const int w = in.width();
  const int h = in.height();
  const int half = kernel.width() / 2;
  Grid<double> out(w, h, 0.0);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      double acc = 0.0;
      for (int dj = -half; dj <= half; ++dj) {
        const int sj = std::clamp(j + dj, 0, h - 1);
        for (int di = -half; di <= half; ++di) {
          const int si = std::clamp(i + di, 0, w - 1);
          acc += kernel(di + half, dj + half) * in(si, sj);
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

Grid<double> convolve_separable(const Grid<double>& in, const std::vector<double>& taps) {
  const int w = in.width();
  const int h = in.height();
  const int half = static_cast<int>(taps.size()) / 2;
  Grid<double> rows(w, h, 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      double acc = 0.0;
      for (int d = -half; d <= half; ++d) {
        acc += taps[static_cast<std::size_t>(d + half)] * in(std::clamp(i + d, 0, w - 1), j);
      }
      rows(i, j) = acc;
    }
  }
  Grid<double> out(w, h, 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      double acc = 0.0;
      for (int d = -half; d <= half; ++d) {
        acc += taps[static_cast<std::size_t>(d + half)] * rows(i, std::clamp(j + d, 0, h - 1));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace

Grid<double> gaussian_kernel(double sigma) {
  const int half = kernel_half_width(sigma);
  const int n = 2 * half + 1;
  Grid<double> kernel(n, n, 0.0);
  double sum = 0.0;
  for (int dj = -half; dj <= half; ++dj) {
    for (int di = -half; di <= half; ++di) {
      const double v = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
      kernel(di + half, dj + half) = v;
      sum += v;
    }
  }
  for (double& v : kernel.data()) v /= sum;
  return kernel;
}

Grid<double> gaussian_convolve(const Grid<double>& values, double sigma, Exec exec) {
  if (exec == Exec::Serial) return convolve_direct(values, gaussian_kernel(sigma));
  return convolve_separable(values, gaussian_taps(sigma));
}

ComponentGrids smooth_components(const VectorField& field, double sigma, Exec exec) {
  Grid<double> c(field.width(), field.height(), 0.0);
  Grid<double> s(field.width(), field.height(), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = std::cos(field.angles()[k]);
    s[k] = std::sin(field.angles()[k]);
  }
  return {gaussian_convolve(c, sigma, exec), gaussian_convolve(s, sigma, exec)};
}

VectorField smooth_field(const VectorField& field, double sigma, Exec exec) {
  const ComponentGrids comp = smooth_components(field, sigma, exec);
  Grid<double> out = field.angles();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double mag = std::hypot(comp.cos[k], comp.sin[k]);
    if (mag >= kSmoothingMagnitudeFloor) out[k] = std::atan2(comp.sin[k], comp.cos[k]);
  }
  return VectorField(std::move(out), field.resolution(), field.flags(), field.warnings());
}

}  // namespace fmplan
