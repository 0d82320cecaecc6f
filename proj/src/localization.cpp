#include "nlt/localization.hpp"

#include <cmath>

namespace nlt {

double smooth_step(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

std::int64_t LocalizationSpec::wrap_to_cell(std::int64_t global_flat) const {
  Index3 j = grid.unflat(global_flat);
  const Index3 j0 = grid.nearest(x0);
  Index3 local{0, 0, 0};
  for (int a = 0; a < grid.n; ++a) {
    std::int64_t d = j[a] - (j0[a] - N_sub / 2);
    d %= N_sub;
    if (d < 0) d += N_sub;
    local[a] = d;
  }
  std::int64_t f = 0;
  for (int a = 0; a < grid.n; ++a) f = f * N_sub + local[a];
  return f;
}

LocalizationSpec build_localization(const TorusGrid& grid, const Point& x0_in, double R) {
  LocalizationSpec loc;
  loc.grid = grid;
  loc.R = R;
  loc.L = 30.0 * R;
  if (loc.L > 1.0 + 1e-12)
    throw BallTooLarge("build_localization: 30R exceeds the period cell");
  const double cells = loc.L * grid.N;
  loc.N_sub = static_cast<int>(std::llround(cells));
  if (std::abs(cells - loc.N_sub) > 1e-9 || loc.N_sub < 8 || loc.N_sub % 2 != 0)
    throw BallTooLarge("build_localization: cell must be grid-aligned, even, >= 8 points");

  // Snap the centre to the grid.
  loc.x0 = grid.point(grid.nearest(x0_in));

  const std::int64_t m = grid.size();
  loc.eta = GridFunction(grid);
  loc.eta_tilde = GridFunction(grid);
  loc.in_plateau.assign(m, 0);
  loc.in_support.assign(m, 0);
  loc.in_form.assign(m, 0);
  loc.in_cell.assign(m, 0);
  loc.sub_index.assign(m, -1);

  for (std::int64_t f = 0; f < m; ++f) {
    const Point x = grid.point(f);
    const double d = torus_dist(x, loc.x0, grid.n);
    loc.in_plateau[f] = d <= 5 * R + 1e-12 ? 1 : 0;
    loc.in_support[f] = d < 6 * R - 1e-12 ? 1 : 0;
    loc.in_form[f] = d <= 10 * R + 1e-12 ? 1 : 0;
    // eta: radial bump, exactly 1 on the plateau, exactly 0 from 6R out.
    loc.eta.values[f] = (d <= 5 * R) ? 1.0 : smooth_step((6 * R - d) / R);

    double tilde = 1.0;
    for (int a = 0; a < grid.n; ++a) {
      const double t = std::abs(wrap_unit(x[a] - loc.x0[a]));
      if (loc.L < 1.0 - 1e-12) {
        // per-axis transition from 1 inside the cell to 0 at the doubled cell
        tilde *= (t <= loc.L / 2) ? 1.0 : smooth_step((loc.L - t) / (loc.L / 2));
      }
    }
    loc.eta_tilde.values[f] = tilde;
  }

  // Cell points ordered row-major in local coordinates.
  loc.cell_points.assign(static_cast<std::size_t>(std::pow(loc.N_sub, grid.n)), -1);
  const Index3 j0 = grid.nearest(loc.x0);
  const std::int64_t subcount = loc.subgrid().size();
  for (std::int64_t lf = 0; lf < subcount; ++lf) {
    Index3 lj{0, 0, 0};
    std::int64_t rem = lf;
    for (int a = grid.n - 1; a >= 0; --a) {
      lj[a] = rem % loc.N_sub;
      rem /= loc.N_sub;
    }
    Index3 gj{0, 0, 0};
    for (int a = 0; a < grid.n; ++a) gj[a] = j0[a] - loc.N_sub / 2 + lj[a];
    const std::int64_t gf = grid.flat(gj);
    loc.cell_points[lf] = gf;
    loc.sub_index[gf] = lf;
    loc.in_cell[gf] = 1; // T~ is exactly the half-open cell point set
  }

  // The support ball must fit strictly inside the cell for the cutoff
  // algebra (supp eta inside T~).
  for (std::int64_t f = 0; f < m; ++f)
    if (loc.in_support[f] && !loc.in_cell[f])
      throw BallTooLarge("build_localization: support ball leaks out of the cell");

  return loc;
}

} // namespace nlt
