#include "fmplan/wavefront.hpp"

#include <limits>

#include "fmplan/error.hpp"
#include "wave_kernel.hpp"

namespace fmplan {

CostMap::CostMap(Grid<double> costs, Grid<CostKind> kinds, double resolution,
                 std::vector<std::string> warnings)
    : costs_(std::move(costs)),
      kinds_(std::move(kinds)),
      resolution_(resolution),
      warnings_(std::move(warnings)) {
  if (!costs_.same_shape(kinds_)) throw InputError("cost map grids differ in shape");
  if (!(resolution_ > 0.0)) throw ConstraintError("cost map resolution must be positive");
}

CostMap expand_wavefront(const CompleteMap& m, Exec exec) {
  const int w = m.width();
  const int h = m.height();
  Grid<double> values(w, h, 0.0);
  std::size_t goals = 0;
  std::size_t free_cells = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const CellClass c = m.cells()[k];
    values[k] = static_cast<double>(static_cast<int>(c));
    if (c == CellClass::Goal) ++goals;
    if (c == CellClass::Free) ++free_cells;
  }
  if (goals == 0) throw InputError("wavefront expansion needs at least one goal cell");

  // Every productive wave assigns at least one cell, so the cell count bounds it.
  detail::run_waves(values, 2.0, static_cast<int>(values.size()), exec);

  constexpr double inf = std::numeric_limits<double>::infinity();
  Grid<double> costs(w, h, inf);
  Grid<CostKind> kinds(w, h, CostKind::Unreachable);
  std::size_t reached = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    switch (m.cells()[k]) {
      case CellClass::Obstacle:
        kinds[k] = CostKind::Obstacle;
        break;
      case CellClass::Buffer:
        kinds[k] = CostKind::Buffer;
        break;
      case CellClass::Goal:
        kinds[k] = CostKind::Finite;
        costs[k] = values[k];
        break;
      case CellClass::Free:
        if (values[k] != 0.0) {
          kinds[k] = CostKind::Finite;
          costs[k] = values[k];
          ++reached;
        }
        break;
    }
  }
  std::vector<std::string> warnings;
  if (free_cells > 0 && reached == 0) {
    warnings.emplace_back("no free cell is reachable from the goal set");
  } else if (reached < free_cells) {
    warnings.emplace_back(std::to_string(free_cells - reached) + " free cells are unreachable");
  }
  return CostMap(std::move(costs), std::move(kinds), m.resolution(), std::move(warnings));
}

}  // namespace fmplan
