#include "nlt/verify.hpp"

#include <cmath>

#include "nlt/frozen_forms.hpp"
#include "nlt/fourier.hpp"
#include "nlt/localization.hpp"
#include "nlt/norms.hpp"
#include "nlt/periodize.hpp"

namespace nlt {

namespace {

std::uint64_t fnv64(const double* data, std::int64_t count, std::uint64_t seed = 1469598103934665603ULL) {
  std::uint64_t h = seed;
  const auto* bytes = reinterpret_cast<const unsigned char*>(data);
  for (std::int64_t i = 0; i < count * 8; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

double wrapped_w(const TorusGrid& g, std::int64_t gx, std::int64_t gy, double expo) {
  Index3 dj = g.unflat(gx);
  const Index3 jy = g.unflat(gy);
  double acc = 0;
  for (int a = 0; a < g.n; ++a) {
    const double d = wrap_unit(static_cast<double>(dj[a] - jy[a]) * g.spacing());
    acc += d * d;
  }
  return std::pow(std::sqrt(acc), -expo);
}

// Nonlocal tail sum_{y outside B(x0, radius)} field(y) * weight(x - y) h^n
// with the periodized |.|^{-n-2s} weight (images up to a modest window).
// `sup_mask` selects the base points x; null means the centre alone, which
// is the |y|^{-n-2s} convention of the local estimates.
double tail_integral(const GridFunction& field, const Kernel& K, const Point& x0,
                     double radius, const std::vector<char>* sup_mask = nullptr) {
  const TorusGrid& g = field.grid;
  const Kernel ones = constant_kernel(g.n, 1.0, K.s);
  const PeriodizedKernel mu = periodize(ones, Point::Zero(), K.s, 10);
  const double hn = std::pow(g.spacing(), g.n);
  double sup = 0;
  for (std::int64_t gx = 0; gx < g.size(); ++gx) {
    const Point x = g.point(gx);
    if (sup_mask) {
      if (!(*sup_mask)[gx]) continue;
    } else {
      if (torus_dist(x, x0, g.n) > 1e-12) continue;
    }
    double acc = 0;
    for (std::int64_t gy = 0; gy < g.size(); ++gy) {
      if (torus_dist(g.point(gy), x0, g.n) <= radius || gx == gy) continue;
      acc += field.values[gy] * mu(x - g.point(gy));
    }
    sup = std::max(sup, acc * hn);
  }
  return sup;
}

} // namespace

std::vector<char> ball_mask(const TorusGrid& grid, const Point& x0, double radius) {
  std::vector<char> mask(grid.size(), 0);
  for (std::int64_t f = 0; f < grid.size(); ++f)
    mask[f] = torus_dist(grid.point(f), x0, grid.n) <= radius + 1e-12 ? 1 : 0;
  return mask;
}

double pair_kernel(const Kernel& K, const TorusGrid& grid, std::int64_t gx,
                   std::int64_t gy) {
  Index3 dj = grid.unflat(gy);
  const Index3 jx = grid.unflat(gx);
  Point e = Point::Zero();
  for (int a = 0; a < grid.n; ++a)
    e[a] = wrap_unit(static_cast<double>(dj[a] - jx[a]) * grid.spacing());
  const double r = e.norm();
  const Point x = grid.point(gx), y = grid.point(gy);
  return 0.5 * (K.eval(x, r, e / r) + K.eval(y, r, -e / r));
}

InequalityReport verify_coercivity_form(const Kernel& K,
                                        const std::vector<GridFunction>& probes) {
  require(!probes.empty(), "verify_coercivity_form: need probes");
  InequalityReport rep;
  rep.name = "coercivity";
  double kappa = 0;
  const TorusGrid& g = probes.front().grid;
  const double expo = g.n + 2 * K.s;
  const double h2n = std::pow(g.spacing(), 2 * g.n);
  for (const GridFunction& phi : probes) {
    require(phi.grid == g, "verify_coercivity_form: probe grid mismatch");
    double plain = 0, weighted = 0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
      for (std::int64_t j = 0; j < g.size(); ++j) {
        if (i == j) continue;
        const double w = wrapped_w(g, i, j, expo);
        const double d2 = (phi.values[i] - phi.values[j]) * (phi.values[i] - phi.values[j]);
        plain += w * d2;
        weighted += pair_kernel(K, g, i, j) * w * d2;
      }
    }
    plain *= h2n;
    weighted *= h2n;
    if (weighted > 0) kappa = std::max(kappa, plain / weighted);
    rep.lhs = std::max(rep.lhs, plain);
    rep.rhs_core = std::max(rep.rhs_core, weighted);
  }
  rep.implied_constant = kappa;
  rep.pass = std::isfinite(kappa);
  rep.terms = {{"kappa_measured", kappa}};
  rep.inputs_digest = fnv64(probes.front().values.data(), probes.front().values.size());
  return rep;
}

void require_subsolution(const Kernel& K, const GridFunction& v, const GridFunction& f,
                         const Point& x0, double radius, double tol) {
  const TorusGrid& g = v.grid;
  const GridFunction Lv = kernel_form_density(K, v);
  const double hn = std::pow(g.spacing(), g.n);
  // Nonnegative probe bumps at a deterministic family of centres and widths.
  const CounterRng rng(0x73756273);
  for (int t = 0; t < 12; ++t) {
    Point c = x0;
    for (int a = 0; a < g.n; ++a)
      c[a] += rng.uniform(4 * t + a, -radius * 0.6, radius * 0.6);
    const double width = radius * rng.uniform(4 * t + 3, 0.15, 0.4);
    double pairing = 0, mass = 0;
    for (std::int64_t gf = 0; gf < g.size(); ++gf) {
      const double d = torus_dist(g.point(gf), c, g.n);
      if (d >= width) continue;
      const double bump = smooth_step(1.0 - d / width);
      pairing += (Lv.values[gf] - f.values[gf]) * bump;
      mass += bump;
    }
    if (mass == 0) continue;
    const double scale = 1.0 + f.values.abs().maxCoeff() + Lv.values.abs().maxCoeff();
    if (pairing * hn > tol * scale * mass * hn)
      throw NotSubsolution("require_subsolution: positive defect against a bump probe");
  }
}

InequalityReport verify_caccioppoli(const GridFunction& v, const GridFunction& f,
                                    const Kernel& K, const Point& x0, double R,
                                    const GridFunction& phi_cut) {
  const TorusGrid& g = v.grid;
  for (std::int64_t i = 0; i < g.size(); ++i)
    if (torus_dist(g.point(i), x0, g.n) <= R)
      require(v.values[i] >= -1e-12, "verify_caccioppoli: v must be nonnegative on B(R)");
  require_subsolution(K, v, f, x0, R);

  InequalityReport rep;
  rep.name = "caccioppoli";
  GridFunction pv(g);
  pv.values = phi_cut.values * v.values;
  const double lhs = 0.5 * std::pow(gagliardo_seminorm(pv, K.s, 2), 2);

  // sup |grad phi| over B(R) via the spectral derivative fields.
  double grad_inf = 0;
  {
    const SpectralField P = dft(phi_cut);
    for (int a = 0; a < g.n; ++a) {
      SpectralField D(g);
      for (std::int64_t fidx = 0; fidx < P.coeffs.size(); ++fidx) {
        const Index3 k = P.freq(fidx);
        D.coeffs[fidx] = P.coeffs[fidx] *
                         Complex(0, 2 * 3.14159265358979324 * static_cast<double>(k[a]));
      }
      const GridFunction da = idft(D);
      for (std::int64_t i = 0; i < g.size(); ++i)
        if (torus_dist(g.point(i), x0, g.n) <= R)
          grad_inf = std::max(grad_inf, std::abs(da.values[i]));
    }
  }

  const std::vector<char> inball = ball_mask(g, x0, R);
  const double hn = std::pow(g.spacing(), g.n);
  double v_l2_sq = 0, vphi_l1 = 0, f_inf = 0, phi_inf = 0;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    if (!inball[i]) continue;
    v_l2_sq += v.values[i] * v.values[i];
    f_inf = std::max(f_inf, std::abs(f.values[i]));
    phi_inf = std::max(phi_inf, std::abs(phi_cut.values[i]));
    vphi_l1 += std::abs(v.values[i] * phi_cut.values[i]);
  }
  v_l2_sq *= hn;
  vphi_l1 *= hn;

  // sup over the cutoff support, which sits compactly inside B(R).
  std::vector<char> supp(g.size(), 0);
  for (std::int64_t i = 0; i < g.size(); ++i)
    supp[i] = phi_cut.values[i] != 0.0 ? 1 : 0;
  const double tail = tail_integral(v, K, x0, R, &supp);
  const double term1 = grad_inf * grad_inf * std::pow(R, 2 - 2 * K.s) * v_l2_sq;
  const double term2 = phi_inf * (tail + f_inf) * vphi_l1;

  rep.lhs = lhs;
  rep.rhs_core = term1 + term2;
  rep.implied_constant = (rep.rhs_core > 0) ? lhs / rep.rhs_core : 0.0;
  rep.pass = std::isfinite(rep.implied_constant) &&
             (rep.rhs_core > 0 || lhs == 0);
  rep.terms = {{"gradient_term", term1},
               {"tail_term", tail},
               {"f_inf", f_inf},
               {"v_l2_sq", v_l2_sq},
               {"vphi_l1", vphi_l1}};
  rep.inputs_digest = fnv64(v.values.data(), v.values.size());
  return rep;
}

InequalityReport verify_linfty_bound(const GridFunction& u, const GridFunction& f,
                                     const Kernel& K, const Point& x0, double r) {
  const TorusGrid& g = u.grid;
  InequalityReport rep;
  rep.name = "linfty";
  double sup_br = 0, u_l2_2r = 0, f_inf = 0;
  const double hn = std::pow(g.spacing(), g.n);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    const double d = torus_dist(g.point(i), x0, g.n);
    if (d <= r) sup_br = std::max(sup_br, std::abs(u.values[i]));
    if (d <= 2 * r) {
      u_l2_2r += u.values[i] * u.values[i];
      f_inf = std::max(f_inf, std::abs(f.values[i]));
    }
  }
  u_l2_2r = std::sqrt(u_l2_2r * hn);

  GridFunction absu(g);
  absu.values = u.values.abs();
  const double tail = tail_integral(absu, K, x0, r / 2);
  const double s = K.s;
  const double core = std::pow(r, -g.n / 2.0) * u_l2_2r +
                      std::pow(r, 2 * s) * tail + std::pow(r, 2 * s) * f_inf;
  rep.lhs = sup_br;
  rep.rhs_core = core;
  rep.implied_constant = core > 0 ? sup_br / core : 0.0;
  rep.pass = std::isfinite(rep.implied_constant) && (core > 0 || sup_br == 0);
  rep.terms = {{"u_l2_2r", u_l2_2r}, {"tail", tail}, {"f_inf", f_inf}};
  rep.inputs_digest = fnv64(u.values.data(), u.values.size());
  return rep;
}

InequalityReport verify_log_lemma(const GridFunction& u, const GridFunction& f,
                                  const Kernel& K, const Point& x0, double r, double R,
                                  double d) {
  require(d > 0, "verify_log_lemma: d must be positive");
  require(r < R / 2 + 1e-12, "verify_log_lemma: need r < R/2");
  const TorusGrid& g = u.grid;
  for (std::int64_t i = 0; i < g.size(); ++i)
    if (torus_dist(g.point(i), x0, g.n) <= R)
      require(u.values[i] >= -1e-12, "verify_log_lemma: u must be nonnegative on B(R)");
  require_subsolution(K, u, f, x0, R);

  InequalityReport rep;
  rep.name = "log_lemma";
  const std::vector<char> inball = ball_mask(g, x0, r);
  const double expo = g.n + 2 * K.s;
  const double h2n = std::pow(g.spacing(), 2 * g.n);
  double lhs = 0;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    if (!inball[i]) continue;
    for (std::int64_t j = 0; j < g.size(); ++j) {
      if (i == j || !inball[j]) continue;
      const double q = std::log((u.values[i] + d) / (u.values[j] + d));
      lhs += pair_kernel(K, g, i, j) * wrapped_w(g, i, j, expo) * q * q;
    }
  }
  lhs *= h2n;

  GridFunction negpart(g);
  negpart.values = (-u.values).max(0.0);
  const double tail_neg = tail_integral(negpart, K, x0, R / 2);
  double f_inf = 0;
  for (std::int64_t i = 0; i < g.size(); ++i)
    if (inball[i]) f_inf = std::max(f_inf, std::abs(f.values[i]));

  const double s = K.s;
  const double bracket = std::pow(r / R, 2 * s) / d * tail_neg +
                         std::pow(r, 2 * s) / d * f_inf + 1.0;
  const double core = std::pow(r, g.n - 2 * s) * bracket;
  rep.lhs = lhs;
  rep.rhs_core = core;
  rep.implied_constant = core > 0 ? lhs / core : 0.0;
  rep.pass = std::isfinite(rep.implied_constant);
  rep.terms = {{"tail_neg", tail_neg}, {"f_inf", f_inf}, {"bracket", bracket}};
  rep.inputs_digest = fnv64(u.values.data(), u.values.size());
  return rep;
}

GridFunction log_truncation(const GridFunction& u, double a, double d, double b) {
  if (!(b > 1.0)) throw BadTruncation("log_truncation: b must exceed 1");
  require(a > 0 && d > 0, "log_truncation: a and d must be positive");
  GridFunction w(u.grid);
  for (std::int64_t i = 0; i < u.values.size(); ++i) {
    const double t = std::log(a + d) - std::log(u.values[i] + d);
    w.values[i] = std::min(std::max(t, 0.0), std::log(b));
  }
  return w;
}

InequalityReport verify_poincare(const GridFunction& w, const Kernel& K,
                                 const Point& x0, double r) {
  const TorusGrid& g = w.grid;
  InequalityReport rep;
  rep.name = "poincare";
  const std::vector<char> inball = ball_mask(g, x0, r);
  const double hn = std::pow(g.spacing(), g.n);
  double mean = 0;
  std::int64_t cnt = 0;
  for (std::int64_t i = 0; i < g.size(); ++i)
    if (inball[i]) {
      mean += w.values[i];
      ++cnt;
    }
  require(cnt > 0, "verify_poincare: empty ball");
  mean /= cnt;

  double lhs = 0;
  for (std::int64_t i = 0; i < g.size(); ++i)
    if (inball[i]) lhs += (w.values[i] - mean) * (w.values[i] - mean);
  lhs *= hn;

  const double expo = g.n + 2 * K.s;
  const double h2n = hn * hn;
  double energy = 0;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    if (!inball[i]) continue;
    for (std::int64_t j = 0; j < g.size(); ++j) {
      if (i == j || !inball[j]) continue;
      const double dw = w.values[i] - w.values[j];
      energy += pair_kernel(K, g, i, j) * wrapped_w(g, i, j, expo) * dw * dw;
    }
  }
  energy *= h2n;

  rep.lhs = lhs;
  rep.rhs_core = std::pow(r, 2 * K.s - g.n) * energy;
  rep.implied_constant = lhs > 0 ? rep.rhs_core / lhs : 0.0; // largest valid c
  rep.pass = std::isfinite(rep.implied_constant);
  rep.terms = {{"energy", energy}};
  rep.inputs_digest = fnv64(w.values.data(), w.values.size());
  return rep;
}

} // namespace nlt
