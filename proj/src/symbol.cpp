#include "nlt/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "nlt/fourier.hpp"
#include "nlt/parallel.hpp"

namespace nlt {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double two_pi = 2.0 * pi;
constexpr double z_drop = 50.0; // phase beyond which the oscillatory tail is dropped

// Gauss-Legendre nodes/weights on [-1, 1] (Newton on Legendre polynomials).
void gauss_legendre(int q, std::vector<double>& x, std::vector<double>& w) {
  x.resize(q);
  w.resize(q);
  for (int i = 0; i < q; ++i) {
    double t = std::cos(pi * (i + 0.75) / (q + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = t;
      for (int j = 2; j <= q; ++j) {
        const double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double dp = q * (t * p1 - p0) / (t * t - 1);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1, p1 = t;
    for (int j = 2; j <= q; ++j) {
      const double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    const double dp = q * (t * p1 - p0) / (t * t - 1);
    x[i] = t;
    w[i] = 2.0 / ((1 - t * t) * dp * dp);
  }
}

struct Gl {
  std::vector<double> x, w;
  explicit Gl(int q) { gauss_legendre(q, x, w); }
};

// Graded rule for int_0^rho (1 - cos(omega r)) r^{-1-2s} dr: geometric shells
// (ratio 1/2) down to r_min, subdivided so each panel sees at most
// `phase_per_panel` radians at |omega| <= omega_max; closed analytically on
// [0, r_min].
struct RadialRule {
  Array r, wgt; // wgt folds GL weight and r^{-1-2s}
  double r_min = 1e-8;
  double s = 0.5;

  RadialRule() = default;
  RadialRule(double rho, double r_min_, double s_, double omega_max,
             double phase_per_panel, int gl_order)
      : r_min(r_min_), s(s_) {
    const Gl gl(gl_order);
    std::vector<double> rv, wv;
    double hi = rho;
    while (hi > r_min * (1 + 1e-12)) {
      const double lo = std::max(r_min, hi * 0.5);
      const int sub = std::max(1, static_cast<int>(std::ceil(
                                      omega_max * (hi - lo) / phase_per_panel)));
      for (int p = 0; p < sub; ++p) {
        const double a = lo + (hi - lo) * p / sub;
        const double b = lo + (hi - lo) * (p + 1) / sub;
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
          const double rr = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q];
          rv.push_back(rr);
          wv.push_back(0.5 * (b - a) * gl.w[q] * std::pow(rr, -1.0 - 2.0 * s));
        }
      }
      hi = lo;
    }
    r = Eigen::Map<Array>(rv.data(), rv.size());
    wgt = Eigen::Map<Array>(wv.data(), wv.size());
  }

  double one_minus_cos(double omega) const {
    const double acc = (wgt * (1.0 - (omega * r).cos())).sum();
    const double w2 = omega * omega;
    return acc + w2 * std::pow(r_min, 2 - 2 * s) / (2 * (2 - 2 * s)) -
           w2 * w2 * std::pow(r_min, 4 - 2 * s) / (24 * (4 - 2 * s));
  }
};

// int_rho^inf cos(omega r) r^{-a} dr via the contour r = rho + i u / omega.
double cosine_tail_contour(double omega, double rho, double a, const Gl& gl) {
  const double cut = 45.0;
  std::complex<double> acc(0, 0);
  for (std::size_t q = 0; q < gl.x.size(); ++q) {
    const double u = 0.5 * cut * (gl.x[q] + 1.0);
    const double w = 0.5 * cut * gl.w[q];
    acc += w * std::exp(-u) * std::pow(std::complex<double>(rho, u / omega), -a);
  }
  const std::complex<double> phase(std::cos(omega * rho), std::sin(omega * rho));
  return (std::complex<double>(0, 1) * phase * acc / omega).real();
}

// J(2s) = int_0^inf (1 - cos v) v^{-1-2s} dv, numerically.
double one_minus_cos_total(double s, double phase, int gl_order) {
  const double Z0 = 50.0;
  const RadialRule head(Z0, 1e-8, s, 1.0, phase, gl_order);
  const Gl gl(64);
  return head.one_minus_cos(1.0) + std::pow(Z0, -2 * s) / (2 * s) -
         cosine_tail_contour(1.0, Z0, 1.0 + 2 * s, gl);
}

struct AngularRule {
  std::vector<Point> theta;
  std::vector<double> w;
  std::vector<double> rho_cell; // 0.5 / |theta|_inf
  std::vector<double> rho_box;  // (M + 1/2) / |theta|_inf
  std::vector<double> angle;    // n = 2 only
};

double sup_norm_dir(const Point& t, int n) {
  double m = 0;
  for (int a = 0; a < n; ++a) m = std::max(m, std::abs(t[a]));
  return std::max(m, 1e-14);
}

AngularRule build_angular_rule(int n, int M, double omega_ang, double phase,
                               int gl_order, const std::vector<double>& breaks) {
  AngularRule rule;
  const double box = M + 0.5;
  if (n == 1) {
    for (double d : {1.0, -1.0}) {
      Point t = Point::Zero();
      t[0] = d;
      rule.theta.push_back(t);
      rule.w.push_back(1.0);
      rule.rho_cell.push_back(0.5);
      rule.rho_box.push_back(box);
      rule.angle.push_back(d > 0 ? 0.0 : pi);
    }
    return rule;
  }
  const Gl gl(gl_order);
  if (n == 2) {
    std::vector<double> cuts = breaks;
    for (int j = 0; j < 4; ++j) cuts.push_back(pi / 4 + j * pi / 2); // cell corners
    for (double& c : cuts) c = c - two_pi * std::floor(c / two_pi);
    cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               cuts.end());
    const double width = std::min(two_pi / 32.0, phase / std::max(4.0, omega_ang));
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      const double a0 = cuts[c];
      const double a1 = (c + 1 < cuts.size()) ? cuts[c + 1] : cuts[0] + two_pi;
      const int panels = std::max(1, static_cast<int>(std::ceil((a1 - a0) / width)));
      for (int p = 0; p < panels; ++p) {
        const double lo = a0 + (a1 - a0) * p / panels;
        const double hi = a0 + (a1 - a0) * (p + 1) / panels;
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
          const double ang = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[q];
          const Point t(std::cos(ang), std::sin(ang), 0.0);
          rule.theta.push_back(t);
          rule.w.push_back(0.5 * (hi - lo) * gl.w[q]);
          const double sn = sup_norm_dir(t, 2);
          rule.rho_cell.push_back(0.5 / sn);
          rule.rho_box.push_back(box / sn);
          rule.angle.push_back(ang);
        }
      }
    }
    return rule;
  }
  // n = 3: composite GL in z = cos(theta) x GL panels in phi.
  const int zPanels = std::max(6, static_cast<int>(std::ceil(omega_ang / phase)));
  const int fPanels = 2 * zPanels;
  for (int zp = 0; zp < zPanels; ++zp) {
    const double z0 = -1.0 + 2.0 * zp / zPanels;
    const double z1 = -1.0 + 2.0 * (zp + 1) / zPanels;
    for (std::size_t qz = 0; qz < gl.x.size(); ++qz) {
      const double z = 0.5 * (z0 + z1) + 0.5 * (z1 - z0) * gl.x[qz];
      const double wz = 0.5 * (z1 - z0) * gl.w[qz];
      const double rz = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int fp = 0; fp < fPanels; ++fp) {
        const double f0 = two_pi * fp / fPanels;
        const double f1 = two_pi * (fp + 1) / fPanels;
        for (std::size_t qf = 0; qf < gl.x.size(); ++qf) {
          const double f = 0.5 * (f0 + f1) + 0.5 * (f1 - f0) * gl.x[qf];
          const double wf = 0.5 * (f1 - f0) * gl.w[qf];
          const Point t(rz * std::cos(f), rz * std::sin(f), z);
          rule.theta.push_back(t);
          rule.w.push_back(wz * wf);
          const double sn = sup_norm_dir(t, 3);
          rule.rho_cell.push_back(0.5 / sn);
          rule.rho_box.push_back(box / sn);
          rule.angle.push_back(0.0);
        }
      }
    }
  }
  return rule;
}

// Polar node cache for one smooth region; weights fold everything but the
// (1 - cos) factor, so one mode costs a single vectorized pass.
struct RegionCache {
  Array x, y, z, wgt;

  double apply(const Point& k, int n) const {
    if (wgt.size() == 0) return 0;
    if (n == 1) return (wgt * (1.0 - (two_pi * k[0] * x).cos())).sum();
    if (n == 2)
      return (wgt * (1.0 - (two_pi * (k[0] * x + k[1] * y)).cos())).sum();
    return (wgt * (1.0 - (two_pi * (k[0] * x + k[1] * y + k[2] * z)).cos())).sum();
  }
};

double image_sum(const PeriodizedKernel& mu, const Point& x) {
  const int n = mu.base.n;
  const double expo = n + 2 * mu.s;
  double acc = 0;
  const int M = mu.M;
  Point w = Point::Zero();
  for (int m0 = -M; m0 <= M; ++m0) {
    w[0] = x[0] + m0;
    for (int m1 = (n >= 2 ? -M : 0); m1 <= (n >= 2 ? M : 0); ++m1) {
      if (n >= 2) w[1] = x[1] + m1;
      for (int m2 = (n >= 3 ? -M : 0); m2 <= (n >= 3 ? M : 0); ++m2) {
        if (n >= 3) w[2] = x[2] + m2;
        if (m0 == 0 && m1 == 0 && m2 == 0) continue;
        const double r = w.norm();
        acc += mu.base.eval(mu.x0, 0.0, w / r) * std::pow(r, -expo);
      }
    }
  }
  return acc;
}

struct Level {
  AngularRule inner, outer;
  std::vector<double> K_inner, K_outer;
  RadialRule central;  // singular radial rule on [0, rho0]
  RadialRule box_head; // rule on [0, M + 1/2] for the tail windows
  RegionCache images, outer_cells;
  double A_tail = 0;
  double Jtot = 0;
  Gl gl_win{8};
  Gl gl_stretch{8};
  double s = 0.5;
  int M = 1;
  int n = 1;
  double rho0 = 0.25;
  double phase = 5.0;
  int gl_rad = 10;
  std::vector<double> breaks; // kernel jump angles, normalized to [0, 2pi)
};

Level build_level(const PeriodizedKernel& mu, double kmax, const SymbolOptions& opt,
                  double scale) {
  Level lv;
  const int n = mu.base.n;
  lv.n = n;
  lv.s = mu.s;
  lv.M = mu.M;
  lv.rho0 = opt.rho0;
  lv.phase = opt.phase_per_panel * scale;
  lv.gl_rad = opt.gl_radial;
  for (double b : mu.base.angular_breaks)
    lv.breaks.push_back(b - two_pi * std::floor(b / two_pi));
  std::sort(lv.breaks.begin(), lv.breaks.end());

  const double omega_max = two_pi * std::max(1.0, kmax);
  lv.inner = build_angular_rule(n, mu.M, omega_max * opt.rho0, lv.phase,
                                opt.gl_angular, mu.base.angular_breaks);
  lv.outer = build_angular_rule(n, mu.M, omega_max * 0.75, lv.phase, opt.gl_angular,
                                mu.base.angular_breaks);

  lv.K_inner.resize(lv.inner.theta.size());
  for (std::size_t a = 0; a < lv.inner.theta.size(); ++a)
    lv.K_inner[a] = mu.frozen(lv.inner.theta[a]);
  lv.K_outer.resize(lv.outer.theta.size());
  for (std::size_t a = 0; a < lv.outer.theta.size(); ++a)
    lv.K_outer[a] = mu.frozen(lv.outer.theta[a]);

  lv.central = RadialRule(opt.rho0, opt.r_min, mu.s, omega_max, lv.phase, opt.gl_radial);
  lv.box_head = RadialRule(mu.M + 0.5, opt.r_min, mu.s, 1.5 * z_drop / (mu.M + 0.5),
                           lv.phase, opt.gl_radial);
  lv.gl_stretch = Gl(opt.gl_radial);

  const Gl gl(opt.gl_radial);

  // Image part of mu over the central disc (smooth there).
  {
    const int panels = std::max(3, static_cast<int>(std::ceil(
                                     omega_max * opt.rho0 / lv.phase)));
    const std::size_t count = lv.inner.theta.size() * panels * gl.x.size();
    lv.images.x.setZero(count);
    lv.images.y.setZero(count);
    lv.images.z.setZero(count);
    lv.images.wgt.setZero(count);
    parallel_for(lv.inner.theta.size(), [&](std::size_t a) {
      std::size_t idx = a * panels * gl.x.size();
      for (int p = 0; p < panels; ++p) {
        const double lo = opt.rho0 * p / panels;
        const double hi = opt.rho0 * (p + 1) / panels;
        for (std::size_t q = 0; q < gl.x.size(); ++q, ++idx) {
          const double r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[q];
          const Point xx = r * lv.inner.theta[a];
          lv.images.x[idx] = xx[0];
          lv.images.y[idx] = xx[1];
          lv.images.z[idx] = xx[2];
          lv.images.wgt[idx] = lv.inner.w[a] * 0.5 * (hi - lo) * gl.w[q] *
                               std::pow(r, n - 1.0) * image_sum(mu, xx);
        }
      }
    });
  }

  // Full mu over the cell minus the central disc.
  {
    const double expo = n + 2 * mu.s;
    std::vector<std::vector<double>> px(lv.outer.theta.size()),
        py(lv.outer.theta.size()), pz(lv.outer.theta.size()), pw(lv.outer.theta.size());
    parallel_for(lv.outer.theta.size(), [&](std::size_t a) {
      const double lo0 = opt.rho0, hi0 = lv.outer.rho_cell[a];
      if (hi0 <= lo0) return;
      const int panels = std::max(2, static_cast<int>(std::ceil(
                                       omega_max * (hi0 - lo0) / lv.phase)));
      for (int p = 0; p < panels; ++p) {
        const double lo = lo0 + (hi0 - lo0) * p / panels;
        const double hi = lo0 + (hi0 - lo0) * (p + 1) / panels;
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
          const double r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[q];
          const Point xx = r * lv.outer.theta[a];
          const double muv = image_sum(mu, xx) + lv.K_outer[a] * std::pow(r, -expo);
          px[a].push_back(xx[0]);
          py[a].push_back(xx[1]);
          pz[a].push_back(xx[2]);
          pw[a].push_back(lv.outer.w[a] * 0.5 * (hi - lo) * gl.w[q] *
                          std::pow(r, n - 1.0) * muv);
        }
      }
    });
    std::size_t total = 0;
    for (const auto& v : px) total += v.size();
    lv.outer_cells.x.setZero(total);
    lv.outer_cells.y.setZero(total);
    lv.outer_cells.z.setZero(total);
    lv.outer_cells.wgt.setZero(total);
    std::size_t at = 0;
    for (std::size_t a = 0; a < px.size(); ++a)
      for (std::size_t i = 0; i < px[a].size(); ++i, ++at) {
        lv.outer_cells.x[at] = px[a][i];
        lv.outer_cells.y[at] = py[a][i];
        lv.outer_cells.z[at] = pz[a][i];
        lv.outer_cells.wgt[at] = pw[a][i];
      }
  }

  double A = 0;
  for (std::size_t a = 0; a < lv.outer.theta.size(); ++a)
    A += lv.outer.w[a] * lv.K_outer[a] *
         std::pow(lv.outer.rho_box[a], -2 * lv.s) / (2 * lv.s);
  lv.A_tail = A;

  lv.Jtot = one_minus_cos_total(mu.s, opt.phase_per_panel, opt.gl_radial);
  return lv;
}

// T(omega, rho_box) - rho_box^{-2s}/(2s) for a tail-window node. box_head
// covers [0, M+1/2]; the remaining [M+1/2, rho] stretch is a few GL panels.
double window_integrand(const Level& lv, const PeriodizedKernel& mu, double ang,
                        const Point& k, double* drop) {
  const Point th(std::cos(ang), std::sin(ang), 0.0);
  const double rho = (lv.M + 0.5) / sup_norm_dir(th, 2);
  const double omega = two_pi * std::abs(k.dot(th));
  const double Kv = mu.frozen(th);
  const double smooth = std::pow(rho, -2 * lv.s) / (2 * lv.s);
  if (omega * rho >= z_drop) {
    *drop += Kv * 2.0 * smooth / (omega * rho);
    return 0.0;
  }
  if (omega < 1e-12) return -Kv * smooth;
  double W = lv.box_head.one_minus_cos(omega);
  // Stretch from the box head radius out to rho along this direction.
  const double head = lv.M + 0.5;
  if (rho > head * (1 + 1e-14)) {
    const Gl& gl = lv.gl_stretch;
    const int panels =
        std::max(1, static_cast<int>(std::ceil(omega * (rho - head) / lv.phase)));
    for (int p = 0; p < panels; ++p) {
      const double lo = head + (rho - head) * p / panels;
      const double hi = head + (rho - head) * (p + 1) / panels;
      for (std::size_t q = 0; q < gl.x.size(); ++q) {
        const double r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[q];
        W += 0.5 * (hi - lo) * gl.w[q] * (1 - std::cos(omega * r)) *
             std::pow(r, -1 - 2 * lv.s);
      }
    }
  }
  const double T = lv.Jtot * std::pow(omega, 2 * lv.s) - W;
  return Kv * (T - smooth);
}

double eval_mode(const Level& lv, const PeriodizedKernel& mu, const Point& k,
                 double* err) {
  const double kn = k.norm();
  double m = 0;
  double drop = 0;

  // Central singular term: per-angle radial integrals over [0, rho0].
  for (std::size_t a = 0; a < lv.inner.theta.size(); ++a) {
    const double c = two_pi * k.dot(lv.inner.theta[a]);
    m += lv.inner.w[a] * lv.K_inner[a] * lv.central.one_minus_cos(c);
  }

  m += lv.images.apply(k, lv.n);
  m += lv.outer_cells.apply(k, lv.n);
  m += lv.A_tail;

  if (lv.n == 2) {
    const double alpha_k = std::atan2(k[1], k[0]);
    const double rho_min = lv.M + 0.5;
    const double delta0 =
        std::min(pi / 2, 1.5 * z_drop / (two_pi * std::max(kn, 1e-9) * rho_min));
    const auto in_window = [&](double ang) {
      const double d = std::remainder(ang - (alpha_k + pi / 2), pi);
      return std::abs(d) < delta0;
    };
    for (int side = 0; side < 2; ++side) {
      const double c0 = alpha_k + pi / 2 + side * pi;
      // Panel edges: uniform refinement of the window, split at kernel jumps.
      std::vector<double> edges;
      const int panels = std::max(6, static_cast<int>(std::ceil(1.5 * z_drop / lv.phase)));
      for (int p = 0; p <= panels; ++p)
        edges.push_back(c0 - delta0 + 2 * delta0 * p / panels);
      for (double b : lv.breaks)
        for (double shift : {0.0, two_pi, -two_pi}) {
          const double bb = b + shift;
          if (bb > edges.front() && bb < edges.back()) edges.push_back(bb);
        }
      std::sort(edges.begin(), edges.end());
      for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double lo = edges[p], hi = edges[p + 1];
        if (hi - lo < 1e-14) continue;
        for (std::size_t q = 0; q < lv.gl_win.x.size(); ++q) {
          const double ang = 0.5 * (lo + hi) + 0.5 * (hi - lo) * lv.gl_win.x[q];
          const double wq = 0.5 * (hi - lo) * lv.gl_win.w[q];
          double local_drop = 0;
          m += wq * window_integrand(lv, mu, ang, k, &local_drop);
          drop += wq * local_drop;
        }
      }
    }
    for (std::size_t a = 0; a < lv.outer.theta.size(); ++a) {
      if (in_window(lv.outer.angle[a])) continue;
      const double omega = two_pi * std::abs(k.dot(lv.outer.theta[a]));
      const double z = omega * lv.outer.rho_box[a];
      if (z <= 0) continue;
      drop += lv.outer.w[a] * lv.K_outer[a] * 2.0 *
              std::pow(lv.outer.rho_box[a], -2 * lv.s) / std::max(z, z_drop);
    }
  } else {
    for (std::size_t a = 0; a < lv.outer.theta.size(); ++a) {
      const double omega = two_pi * std::abs(k.dot(lv.outer.theta[a]));
      const double rho = lv.outer.rho_box[a];
      const double z = omega * rho;
      if (z >= z_drop) {
        drop += lv.outer.w[a] * lv.K_outer[a] * 2.0 * std::pow(rho, -2 * lv.s) / z;
      } else {
        drop += lv.outer.w[a] * lv.K_outer[a] * std::pow(rho, -2 * lv.s) / (2 * lv.s);
      }
    }
  }

  if (err) *err += drop;
  return m;
}

} // namespace

double Symbol::at(const Index3& k) const {
  require(covers(k), "Symbol: mode not covered");
  Index3 j{0, 0, 0};
  for (int a = 0; a < grid.n; ++a) j[a] = freq_slot(k[a], grid.N);
  return values[grid.flat(j)];
}

bool Symbol::covers(const Index3& k) const {
  double s2 = 0;
  for (int a = 0; a < grid.n; ++a) {
    if (k[a] < -grid.N / 2 || k[a] >= grid.N / 2) return false;
    s2 += static_cast<double>(k[a]) * k[a];
  }
  return std::sqrt(s2) <= kmax + 1e-9;
}

bool Symbol::complete() const {
  const double corner = std::sqrt(static_cast<double>(grid.n)) * (grid.N / 2);
  return kmax + 1e-9 >= corner;
}

Symbol compute_symbol(const PeriodizedKernel& mu, const TorusGrid& grid, double kmax,
                      const SymbolOptions& opt_in) {
  require(mu.period == 1.0, "compute_symbol: unit-period kernels only");
  require(grid.n == mu.base.n, "compute_symbol: grid/kernel dimension mismatch");
  require(kmax >= 1, "compute_symbol: kmax must be >= 1");

  SymbolOptions opt = opt_in;
  if (opt.rel_target <= 0) {
    // Realistic per-dimension defaults: angular rules for discontinuous
    // kernels in n >= 2 deliver less than the 1-D graded rules.
    opt.rel_target = grid.n == 1 ? 1e-6 : (grid.n == 2 ? 1e-4 : 1e-2);
  }

  Symbol sym(grid);
  sym.s = mu.s;
  sym.kmax = kmax;

  const Level fine = build_level(mu, kmax, opt, 1.0);
  Level coarse;
  if (opt.check_convergence) coarse = build_level(mu, kmax, opt, 1.8);

  const SpectralField freq_layout(grid);
  std::vector<std::pair<std::int64_t, Point>> todo;
  for (std::int64_t f = 0; f < grid.size(); ++f) {
    const Index3 k = freq_layout.freq(f);
    bool zero = true, canonical = false, mirror_rep = true;
    Point kv = Point::Zero();
    double eucl = 0;
    for (int a = 0; a < grid.n; ++a) {
      kv[a] = static_cast<double>(k[a]);
      eucl += kv[a] * kv[a];
      if (k[a] != 0 && zero) {
        canonical = k[a] > 0;
        zero = false;
      }
      if (-k[a] < -grid.N / 2 || -k[a] >= grid.N / 2) mirror_rep = false;
    }
    if (zero || std::sqrt(eucl) > kmax + 1e-9) continue;
    // Non-canonical modes come from symmetry, except at the Nyquist edge
    // where the mirror has no slot of its own.
    if (!canonical && mirror_rep) continue;
    todo.emplace_back(f, kv);
  }

  std::vector<double> vals(todo.size()), errs(todo.size()), refine(todo.size(), 0.0);
  parallel_for(todo.size(), [&](std::size_t i) {
    double drop = 0;
    const double v = eval_mode(fine, mu, todo[i].second, &drop);
    double e = drop;
    if (opt.check_convergence) {
      double drop2 = 0;
      const double v2 = eval_mode(coarse, mu, todo[i].second, &drop2);
      refine[i] = std::abs(v - v2);
      e = std::max(e, refine[i]);
    }
    vals[i] = v;
    errs[i] = e;
  });

  double worst_refine = 0;
  for (std::size_t i = 0; i < todo.size(); ++i) {
    const std::int64_t f = todo[i].first;
    const Index3 k = freq_layout.freq(f);
    Index3 jm{0, 0, 0};
    bool mirror_ok = true;
    for (int a = 0; a < grid.n; ++a) {
      if (-k[a] < -grid.N / 2 || -k[a] >= grid.N / 2) mirror_ok = false;
      jm[a] = freq_slot(-k[a], grid.N);
    }
    sym.values[f] = vals[i];
    sym.quad_error[f] = errs[i];
    if (mirror_ok) {
      sym.values[grid.flat(jm)] = vals[i]; // m(-k) = m(k)
      sym.quad_error[grid.flat(jm)] = errs[i];
    }
    worst_refine =
        std::max(worst_refine, refine[i] / std::max(std::abs(vals[i]), 1e-300));
  }

  if (opt.check_convergence && worst_refine > 10.0 * opt.rel_target)
    throw QuadratureNotConverged(
        "compute_symbol: refinement levels disagree beyond 10x target");
  return sym;
}

Symbol grid_symbol(const PeriodizedKernel& mu, const TorusGrid& grid) {
  require(grid.n == mu.base.n, "grid_symbol: dimension mismatch");
  GridFunction mug(grid);
  const std::int64_t m = grid.size();
  std::vector<double> buf(static_cast<std::size_t>(m), 0.0);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t f) {
    if (f == 0) return; // the diagonal never enters the double-sum form
    const Point x = grid.point(static_cast<std::int64_t>(f)) -
                    grid.point(static_cast<std::int64_t>(0));
    buf[f] = mu(x);
  });
  for (std::int64_t f = 0; f < m; ++f) mug.values[f] = buf[f];

  const double hn = std::pow(grid.spacing(), grid.n);
  const double total = hn * mug.values.sum();
  const SpectralField F = dft(mug);
  Symbol sym(grid);
  sym.s = mu.s;
  sym.kmax = grid.N; // covers the whole lattice
  // dft coefficients are taken against centered coordinates x_j = -1/2 + jh;
  // the displacement sum needs x = jh, a parity flip per frequency component.
  for (std::int64_t f = 0; f < m; ++f) {
    int parity = 0;
    std::int64_t rem = f;
    for (int a = grid.n - 1; a >= 0; --a) {
      parity += static_cast<int>(rem % grid.N);
      rem /= grid.N;
    }
    const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
    sym.values[f] = total - sign * F.coeffs[f].real();
  }
  sym.values[0] = 0.0;
  sym.quad_error.setZero();
  return sym;
}

} // namespace nlt
