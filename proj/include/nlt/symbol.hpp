#pragma once

#include "nlt/grid_function.hpp"
#include "nlt/periodize.hpp"

namespace nlt {

/// Nonnegative Fourier multiplier m(k) of the periodized bilinear form,
/// m(k) = int_{cell} (1 - cos(2 pi <k,h>)) mu(h) dh, over the balanced
/// frequency lattice of `grid`. Slots with |k| > kmax are left at zero.
struct Symbol {
  TorusGrid grid;
  double s = 0.5;
  double kmax = 0;        ///< euclidean radius covered
  Array values;           ///< m(k) by flat slot
  Array quad_error;       ///< estimated absolute quadrature error per slot

  Symbol() = default;
  explicit Symbol(const TorusGrid& g)
      : grid(g), values(Array::Zero(g.size())), quad_error(Array::Zero(g.size())) {}

  double at(const Index3& k) const;
  bool covers(const Index3& k) const;
  /// True when every lattice mode of the grid is covered.
  bool complete() const;
};

struct SymbolOptions {
  /// Accuracy goal per mode; <= 0 picks a per-dimension default
  /// (1e-6 for n = 1, 1e-4 for n = 2, 1e-2 for n = 3).
  double rel_target = -1;
  double rho0 = 0.25;         ///< radius of the graded central disc
  double r_min = 1e-8;        ///< innermost graded radius (analytic closure below)
  int gl_radial = 8;
  int gl_angular = 8;
  double phase_per_panel = 5.0; ///< radians of oscillation resolved per panel
  bool check_convergence = true; ///< compare against a coarser rule
};

/// Computes m(k) for all lattice modes with |k| <= kmax by graded polar
/// quadrature near h = 0, piecewise polar quadrature over the rest of the
/// cell, and an exact correction for the lattice window beyond |m|_inf <= M.
/// Throws QuadratureNotConverged when the two quadrature levels disagree by
/// more than 10x the relative target.
Symbol compute_symbol(const PeriodizedKernel& mu, const TorusGrid& grid, double kmax,
                      const SymbolOptions& opt = {});

/// Grid-consistent symbol: diagonalizes the discrete double-sum form
///   B(u, phi) = h^{2n} sum_{j != l} mu(x_j - x_l)(u_j - u_l)(phi_j - phi_l)
/// exactly: B = sum_k 2 m_grid(k) uhat(k) conj(phihat(k)).
Symbol grid_symbol(const PeriodizedKernel& mu, const TorusGrid& grid);

} // namespace nlt
