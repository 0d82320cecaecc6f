#pragma once

#include <vector>

#include "nlt/fixed_point.hpp"
#include "nlt/kernel.hpp"

namespace nlt {

/// Experiment configuration for the degenerate p-form: requires p >= 2 and
/// s > (p-2)/p so the effective linear order stays in (0, 1).
struct PlapConfig {
  double p = 4;
  double s = 0.8;
  Point tau = Point::Zero();
  Point x0 = Point::Zero();
  double R = 1.0 / 30.0;
  double sigma_angle = 0.5; ///< inner-product floor defining the cone
  double hoelder_eps = 0.05; ///< quotient exponent is alpha_eff - eps

  double alpha_eff() const { return std::min(s * p - p + 2.0, 1.0); }
  double s_eff() const { return (s * p - p + 2.0) / 2.0; }
  void validate(int n) const;
};

/// Discrete p-form h^{2n} sum |u(x)-u(y)|^{p-2}(u(x)-u(y))(phi(x)-phi(y))
/// / dist^{n+sp} over distinct pairs; `mask` restricts both variables to a
/// subdomain (null = whole torus).
double plap_form(const GridFunction& u, const GridFunction& phi, double p, double s,
                 const std::vector<char>* mask = nullptr);

/// Riesz density of the full-torus p-form.
GridFunction plap_form_density(const GridFunction& u, double p, double s);

/// Exact shifted difference f(. + tau) - f(.); tau must be a whole number of
/// grid cells per axis (OffGridShift otherwise).
GridFunction difference_quotient(const GridFunction& f, const Point& tau);

/// The boundary-mismatch form of discrete differentiation on a subdomain:
/// pairs gained/lost when the mask is shifted by tau, with the shifted p-form
/// integrand. Vanishes identically on the full torus.
double plap_shift_mismatch(const GridFunction& u, const GridFunction& psi, double p,
                           double s, const Point& tau, const std::vector<char>& mask);

/// FTC linearization of the p-form along the shift tau:
///   eval(x, r, h) = r^{2-p} int_0^1 |t (u(x)-u(x+rh))
///                                   + (1-t)(u(x+tau)-u(x+tau+rh))|^{p-2} dt.
/// The multiplying constant c_p = p - 1 is carried separately; with it the
/// difference identity
///   delta_tau(|du|^{p-2} du) = c_p |x-y|^{p-2} eval(...) (delta_tau u(x) - delta_tau u(y))
/// holds exactly.
class EffectiveKernel {
public:
  EffectiveKernel(const GridFunction& u, const Point& tau, double p);

  double cp() const { return p_ - 1.0; }
  double p() const { return p_; }
  const Point& tau() const { return tau_; }

  /// Kernel value (without c_p); r = 0 takes the gradient limit.
  double eval(const Point& x, double r, const Point& h) const;

  /// Both sides of the difference identity at a grid pair; returns the
  /// residual |lhs - rhs|.
  double identity_residual(const Index3& jx, const Index3& jy) const;

  /// Spectral (trigonometric) evaluation of u off the grid.
  double field(const Point& x) const;
  Point gradient(const Point& x) const;

  /// t-integral of |t a + (1-t) b|^{p-2}: Gauss-Legendre with a split at the
  /// sign change of the segment.
  double segment_integral(double a, double b) const;

private:
  TorusGrid grid_;
  SpectralField uhat_;
  Array ugrid_;
  Point tau_;
  double p_;
};

EffectiveKernel effective_kernel(const GridFunction& u, const Point& tau, double p);

struct CapCertificate {
  Cone cone;
  double eta_eff = 0;   ///< measured inf of the kernel over the cap at r = 0
  double grad_norm = 0; ///< |grad u(x0)|
  ContinuityReport continuity;
};

/// Cone-ellipticity certificate of the effective kernel around the gradient
/// direction at x0. Throws DegenerateGradient below the gradient floor
/// (1e-3 of the sup gradient).
CapCertificate cone_certificate(const GridFunction& u, const Point& x0, const Point& tau,
                                double p, double sigma_angle);

struct PlapRungRow {
  double tau_len = 0;
  int rung = 0;
  double q = 2;        ///< integrability exponent at this rung
  double radius = 0;   ///< measurement ball radius
  double norm = 0;     ///< ||delta_tau u||_{L^q(B)}
  double rate = 0;     ///< contraction rate of the rung solve
};

struct PlapLadderReport {
  std::vector<PlapRungRow> rows;
  std::vector<std::pair<double, double>> quotients; ///< (|tau|, Hoelder quotient)
  double identity_residual = 0; ///< defect of the delta_tau equation on probes
  double p2_kernel_value = 1.0; ///< kernel value check for the p = 2 reduction
};

/// Difference-quotient bootstrap: for each shift in the sweep, builds the
/// effective kernel (extended beyond the certified ball by its cone value),
/// runs the frozen-coefficient solver on the delta_tau equation, and tables
/// rung norms on shrinking balls plus the final Hoelder quotient
/// [delta_tau u]_{C^{alpha-eps}} / |tau|^s.
PlapLadderReport bootstrap_hoelder(const GridFunction& u, const GridFunction& f_rhs,
                                   const PlapConfig& cfg,
                                   const std::vector<Point>& tau_sweep);

} // namespace nlt
