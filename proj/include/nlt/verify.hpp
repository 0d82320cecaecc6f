#pragma once

#include <string>
#include <vector>

#include "nlt/kernel.hpp"
#include "nlt/grid_function.hpp"

namespace nlt {

/// One verified inequality: lhs <= (implied constant) * rhs_core, with the
/// constant factored out of the right side.
struct InequalityReport {
  std::string name;
  double lhs = 0;
  double rhs_core = 0;
  double implied_constant = 0;
  bool pass = false; ///< both sides finite, rhs_core > 0 (or both vanish)
  std::vector<std::pair<std::string, double>> terms;
  std::uint64_t inputs_digest = 0;
};

/// Wrapped ball mask |x - x0| <= radius.
std::vector<char> ball_mask(const TorusGrid& grid, const Point& x0, double radius);

/// Symmetrized kernel value on a pair, with the partner-direction convention.
double pair_kernel(const Kernel& K, const TorusGrid& grid, std::int64_t gx,
                   std::int64_t gy);

/// Energy comparison [phi]^2_{H^s} <= kappa [phi]^2_{H^s_K} over a probe
/// family; reports the largest measured kappa.
InequalityReport verify_coercivity_form(const Kernel& K,
                                        const std::vector<GridFunction>& probes);

/// Weak subsolution certificate: <L_K v - f, phi> <= tol for nonnegative
/// probe bumps phi. Throws NotSubsolution on failure.
void require_subsolution(const Kernel& K, const GridFunction& v, const GridFunction& f,
                         const Point& x0, double radius, double tol = 1e-8);

/// Energy inequality for nonnegative subsolutions with a cutoff phi_cut:
/// (1/2)[phi v]^2_{H^s} <= c { |grad phi|^2_inf R^{2-2s} ||v||^2_{L^2(B_R)}
///   + |phi|_inf [ sup_B tail(v) + |f|_inf ] ||v phi||_{L^1} }.
InequalityReport verify_caccioppoli(const GridFunction& v, const GridFunction& f,
                                    const Kernel& K, const Point& x0, double R,
                                    const GridFunction& phi_cut);

/// Local boundedness: sup_{B_r} |u| <= C { r^{-n/2} ||u||_{L^2(B_2r)}
///   + r^{2s} tail(u, r/2) + r^{2s} |f|_inf }.
InequalityReport verify_linfty_bound(const GridFunction& u, const GridFunction& f,
                                     const Kernel& K, const Point& x0, double r);

/// Logarithmic energy bound on B_r against the r^{n-2s} scale.
InequalityReport verify_log_lemma(const GridFunction& u, const GridFunction& f,
                                  const Kernel& K, const Point& x0, double r, double R,
                                  double d);

/// w = min((log(a+d) - log(u+d))_+, log b); throws BadTruncation for b <= 1.
GridFunction log_truncation(const GridFunction& u, double a, double d, double b);

/// c int_{B_r} |w - mean|^2 <= r^{2s-n} sum_{B_r x B_r} (w diff)^2 K w_s.
InequalityReport verify_poincare(const GridFunction& w, const Kernel& K,
                                 const Point& x0, double r);

} // namespace nlt
