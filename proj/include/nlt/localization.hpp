#pragma once

#include <vector>

#include "nlt/grid_function.hpp"

namespace nlt {

/// Cutoff geometry around a base point: plateau ball B(x0, 5R), support ball
/// B(x0, 6R), form ball B(x0, 10R), and the period cell
/// T~ = x0 + 30R [-1/2, 1/2)^n. The cell side L = 30R must be a dyadic
/// fraction so the cell is grid-aligned; L = 1 is the whole torus.
struct LocalizationSpec {
  TorusGrid grid;
  Point x0 = Point::Zero();
  double R = 1.0 / 30.0;
  double L = 1.0; ///< 30 R
  int N_sub = 0;  ///< grid points per axis inside the cell

  GridFunction eta;       ///< 1 on B(5R), 0 outside B(6R), smooth bump
  GridFunction eta_tilde; ///< 1 on the cell, 0 outside the doubled cell

  std::vector<char> in_plateau; ///< |x - x0| <= 5R (wrapped)
  std::vector<char> in_support; ///< |x - x0| <  6R
  std::vector<char> in_form;    ///< |x - x0| <= 10R
  std::vector<char> in_cell;    ///< sup-norm box of side L

  /// Global flat indices of the cell points, ordered row-major in the
  /// subgrid; sub_index[global] = local position or -1.
  std::vector<std::int64_t> cell_points;
  std::vector<std::int64_t> sub_index;

  TorusGrid subgrid() const { return TorusGrid(grid.n, N_sub); }

  /// L-periodic wrap of a global flat index into the cell: local position.
  std::int64_t wrap_to_cell(std::int64_t global_flat) const;
};

/// C-infinity transition equal to 0 at t <= 0 and 1 at t >= 1.
double smooth_step(double t);

/// Builds the cutoffs and masks; throws BallTooLarge when 30R exceeds the
/// torus or the cell is not grid-aligned with at least 8 points per axis.
LocalizationSpec build_localization(const TorusGrid& grid, const Point& x0, double R);

} // namespace nlt
