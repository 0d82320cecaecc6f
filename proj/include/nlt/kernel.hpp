#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nlt/grid.hpp"
#include "nlt/rng.hpp"

namespace nlt {

/// Spherical cap {h in S^{n-1} : angle(h, axis) < half_angle}, optionally
/// symmetrized to include -h.
struct Cone {
  int n = 2;
  Point axis = Point::UnitX();
  double half_angle = 1.5707963267948966; // pi/2 -> full sphere when symmetrized
  bool symmetrized = true;

  Cone() = default;
  Cone(int n_, const Point& axis_, double half_angle_, bool symmetrized_ = true);

  bool contains(const Point& h) const;

  /// Spherical measure |Sigma| (length on S^1, area on S^2; {2 points} -> count).
  double measure() const;

  /// Deterministic sample of directions inside the cap (i indexes the probe).
  Point sample(std::uint64_t i, const CounterRng& rng) const;
};

/// Direction-only kernel evaluations live on the unit sphere of R^n.
Point unit_direction(const Point& v);

struct HoelderData {
  double alpha = 1.0;
  double constant = 0.0;
};

/// Coefficient kernel K(x, r, h) with its structural metadata. eval must be
/// reentrant; all hypothesis checks are sampled certificates.
///
/// Direction convention: for a pair (x, y), the kernel is evaluated at
/// r = |x - y| and h = (y - x)/|x - y|, so that x + r h = y. Symmetrized
/// kernels cannot tell; the p-Laplacian linearization can.
struct Kernel {
  using Eval = std::function<double(const Point& x, double r, const Point& h)>;

  int n = 1;
  Eval eval;
  double s = 0.5;      ///< order
  double Lambda = 1.0; ///< upper bound
  double eta = 1.0;    ///< ellipticity level on the cone
  Cone cone;
  std::optional<HoelderData> hoelder;
  /// n = 2 only: polar angles where h -> K(x, r, h) jumps; quadrature rules
  /// align panel edges with these.
  std::vector<double> angular_breaks;

  double operator()(const Point& x, double r, const Point& h) const {
    return eval(x, r, h);
  }
};

/// Sampled certificate: nonnegativity and the upper bound on `bound_probes`
/// quasi-random (x, r, h) probes, and the cone lower bound eta on
/// `cone_probes` probes with h in Sigma. Throws on violation.
void certify_kernel(const Kernel& K, int bound_probes = 10000, int cone_probes = 1000,
                    std::uint64_t seed = 0x6b65726e);

/// K(x, r, h) = value everywhere.
Kernel constant_kernel(int n, double value, double s);

/// K = Lambda on the cone; `outside` (default 0, else eta scale) elsewhere.
Kernel cone_indicator_kernel(const Cone& cone, double eta, double Lambda, double s,
                             double outside = 0.0);

/// Kernel of a bi-Lipschitz change of variables phi:
/// K(x, r, h) = (r / |phi(x) - phi(x + r h)|)^{n + 2s}, with the r = 0 limit
/// taken by a centered difference quotient at r = 1e-5. Lambda and eta are
/// derived from bi-Lipschitz constants measured on a probe set.
Kernel diffeo_kernel(int n, const std::function<Point(const Point&)>& phi, double s,
                     int probes = 2000, std::uint64_t seed = 0x64666f);

/// Oscillation table sup |K(x,r,h) - K(x0,0,h)| over nested probe sets.
struct ContinuityReport {
  Point x0 = Point::Zero();
  double radius_scale = 1.0; ///< the reference radius multiplying each lambda
  std::vector<double> scales;
  std::vector<double> oscillation; ///< nonincreasing as scales decrease
};

/// Measures the continuity modulus of K around (x0, r = 0): for each lambda
/// in `scales`, sup over probes with |x - x0| < lambda * radius, r < lambda *
/// radius. Probe sets are nested across scales, so the table is monotone by
/// construction.
ContinuityReport measure_continuity(const Kernel& K, const Point& x0, double radius,
                                    std::vector<double> scales, int probes_per_scale = 2000,
                                    std::uint64_t seed = 0x636f6e74);

/// sup over probe pairs of |K(x,r,h) - K(y,r,h)| / |x-y|^alpha.
double measure_hoelder(const Kernel& K, double alpha, int probes = 4000,
                       std::uint64_t seed = 0x686f6c64);

} // namespace nlt
