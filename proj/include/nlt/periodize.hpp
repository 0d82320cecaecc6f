#pragma once

#include "nlt/kernel.hpp"

namespace nlt {

/// Lattice periodization of a kernel frozen at (x0, r = 0):
///   mu(h) = sum_{|m|_inf <= M} K(x0, 0, (h+Lm)/|h+Lm|) / |h+Lm|^{n+2s},
/// an L-periodic function singular only at the lattice. tail_bound dominates
/// the discarded |m|_inf > M part uniformly over the cell.
struct PeriodizedKernel {
  Kernel base;       ///< full kernel; only (x0, 0, h) evaluations are used
  Point x0 = Point::Zero();
  double s = 0.5;
  int M = 50;        ///< truncation window in lattice units
  double period = 1.0;
  double tail_bound = 0.0;
  bool symmetrized = true; ///< mu(h) = mu(-h) guaranteed by the frozen kernel

  /// Frozen direction-only evaluation K(x0, 0, h/|h|).
  double frozen(const Point& h) const { return base.eval(x0, 0.0, unit_direction(h)); }

  /// The periodized sum at h (h taken mod the period cell).
  double operator()(const Point& h) const;
};

/// Builds the periodization; tail_bound is computed by integral comparison,
/// e.g. n = 1, s = 1/2, Lambda = 1, M = 50 gives <= 2/(M - 1/2) ~ 0.0404.
PeriodizedKernel periodize(const Kernel& K, const Point& x0, double s, int M,
                           double period = 1.0);

/// Bound on Lambda * sum_{|m|_inf > M} sup_{|h| <= L/2} |h + Lm|^{-n-2s}.
double periodization_tail_bound(int n, double s, double Lambda, int M, double period = 1.0);

} // namespace nlt
