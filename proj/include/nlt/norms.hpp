#pragma once

#include <optional>

#include "nlt/grid_function.hpp"

namespace nlt {

/// Order bookkeeping for the estimate sweeps: base order s, split s1+s2 = 2s,
/// measurement orders (t, t_tilde) and integrability exponents (p, q).
struct RegularityOrders {
  double s = 0.5;
  double s1 = 0.5;
  double s2 = 0.5;
  double t = 0.5;
  double t_tilde = 0.25;
  double p = 2.0;
  double q = 2.0;

  double p_conj() const { return p / (p - 1.0); }
  double q_conj() const { return q / (q - 1.0); }

  /// Checks the structural constraints; `for_rewrite` additionally enforces
  /// the admissible window for t_tilde and the (t, t_tilde, q, p, n) coupling.
  void validate(int n = 1, bool for_rewrite = false) const;
};

/// (h^n sum |f|^p)^{1/p}; p = infinity gives the max norm.
double lp_norm(const GridFunction& f, double p);

/// L^p norm of the fractional Laplacian of order sigma of f.
double bessel_seminorm(const GridFunction& f, double sigma, double p);

struct GagliardoOptions {
  bool montecarlo = false;
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  bool wrap = true; ///< wrapped torus distance (default) vs plain cell distance
};

struct GagliardoResult {
  double value = 0;
  double rel_std_error = 0;     ///< Monte Carlo only
  bool variance_warning = false; ///< relative standard error > 5%
};

/// Discrete Gagliardo seminorm [f]_{W^{sigma,p}}: double sum over distinct
/// grid points with weight dist^{-(n + sigma p)}, diagonal skipped, wrapped
/// distances. Exact mode requires N^n <= 2^14.
GagliardoResult gagliardo_seminorm_ex(const GridFunction& f, double sigma, double p,
                                      const GagliardoOptions& opt = {});

inline double gagliardo_seminorm(const GridFunction& f, double sigma, double p,
                                 const GagliardoOptions& opt = {}) {
  return gagliardo_seminorm_ex(f, sigma, p, opt).value;
}

/// Diagonal factor of the p = 2 Gagliardo form: [f]^2 = sum_k c_N(k) |fhat(k)|^2.
double gagliardo_mode_factor(const TorusGrid& grid, double sigma, const Index3& k);

/// Probe-maximized lower estimate of the W^{-sigma,p} dual norm of g:
/// max over probes phi of <g,phi> / [phi]_{W^{sigma,p'}}. The probe set is
/// low-frequency trig modes followed by seeded bandlimited fields, so the
/// value is deterministic given the seed and nondecreasing in probe_count.
double dual_norm_bound(const GridFunction& g, double sigma, double p,
                       int probe_count, std::uint64_t seed = 0x6e6c74);

} // namespace nlt
