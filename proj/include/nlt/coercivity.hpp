#pragma once

#include <vector>

#include "nlt/symbol.hpp"

namespace nlt {

/// The three ingredients of the explicit ellipticity constant:
/// r0 is the largest radius on which 1 - cos(2t) >= t^2/4 holds,
/// f_min = min_sigma int_Sigma |sigma . theta|^2 dtheta, and
/// c_explicit = eta r0^{2-2s} f_min / (8 (1 - s)).
struct ExplicitConstant {
  double r0 = 0;
  double f_min = 0;
  double c_explicit = 0;
};

ExplicitConstant explicit_constant(const Cone& cone, double eta, double s);

/// Scalar helper: int_Sigma |sigma . theta|^2 dtheta for a given direction.
double cone_direction_energy(const Cone& cone, const Point& sigma, int nodes = 4096);

struct ModeRatio {
  Index3 k{0, 0, 0};
  double m = 0;
  double k_pow = 0; ///< |k|^{2s}
  double ratio = 0;
  double quad_error = 0;
};

/// Per-mode certificate m(k) >= c_explicit |k|^{2s} with explicit slack.
struct CoercivityCertificate {
  double eta = 0;
  double s = 0;
  Cone cone;
  ExplicitConstant constant;
  double kmax = 0;
  double min_ratio = 0;
  Index3 argmin{0, 0, 0};
  double slack = 0;
  bool pass = false;
  std::vector<ModeRatio> table;
};

/// Checks every computed mode with 0 < |k| <= kmax against the explicit
/// constant; slack is 1e-8 plus the per-mode quadrature error. Failure is
/// recorded in `pass`, never thrown.
CoercivityCertificate verify_coercivity(const Symbol& sym, const Cone& cone,
                                        double eta, double kmax);

} // namespace nlt
