#include "nlt/coercivity.hpp"

#include <cmath>

namespace nlt {

namespace {
constexpr double pi = 3.14159265358979323846;

double scalar_gap(double t) { return 1.0 - std::cos(2.0 * t) - t * t / 4.0; }

// Largest r such that 1 - cos(2t) >= t^2/4 on [0, r]: the first positive
// root of the gap, found by bracketing + bisection to 1e-12.
double largest_valid_radius() {
  double lo = 1e-3;
  double hi = lo;
  const double step = 1e-3;
  while (scalar_gap(hi) > 0) hi += step;
  lo = hi - step;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (scalar_gap(mid) > 0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13) break;
  }
  return lo;
}
} // namespace

double cone_direction_energy(const Cone& cone, const Point& sigma, int nodes) {
  const double sym = cone.symmetrized ? 2.0 : 1.0;
  if (cone.n == 1) {
    // S^0: the cap holds the axis (and -axis when symmetrized); |sigma.theta|=1.
    return sym;
  }
  if (cone.n == 2) {
    const double base = std::atan2(cone.axis[1], cone.axis[0]);
    double acc = 0;
    for (int i = 0; i < nodes; ++i) {
      const double a = base - cone.half_angle +
                       2.0 * cone.half_angle * (i + 0.5) / nodes;
      const Point th(std::cos(a), std::sin(a), 0.0);
      acc += sigma.dot(th) * sigma.dot(th);
    }
    return sym * acc * 2.0 * cone.half_angle / nodes;
  }
  // n = 3: midpoint grid over the cap around the axis (rotated frame).
  Point e3 = cone.axis;
  Point u = std::abs(e3[2]) < 0.9 ? e3.cross(Point::UnitZ()) : e3.cross(Point::UnitX());
  u.normalize();
  const Point v = e3.cross(u);
  const int nz = static_cast<int>(std::sqrt(static_cast<double>(nodes)));
  const int nf = nz;
  const double z0 = std::cos(cone.half_angle);
  double acc = 0;
  for (int i = 0; i < nz; ++i) {
    const double z = z0 + (1.0 - z0) * (i + 0.5) / nz;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < nf; ++j) {
      const double f = 2.0 * pi * (j + 0.5) / nf;
      const Point th = z * e3 + r * (std::cos(f) * u + std::sin(f) * v);
      acc += sigma.dot(th) * sigma.dot(th);
    }
  }
  return sym * acc * (1.0 - z0) * 2.0 * pi / (nz * nf);
}

ExplicitConstant explicit_constant(const Cone& cone, double eta, double s) {
  require(eta >= 0, "explicit_constant: eta must be nonnegative");
  require(s > 0 && s < 1, "explicit_constant: s must be in (0,1)");
  if (cone.measure() <= 0) throw EmptyCone("explicit_constant: empty cone");

  ExplicitConstant out;
  out.r0 = largest_valid_radius();

  if (cone.n == 1) {
    out.f_min = cone.measure();
  } else if (cone.n == 2) {
    // f(beta) = int over the cap of cos^2(beta - alpha): smooth and unimodal
    // between the axis direction and its perpendicular; golden-section there.
    const double base = std::atan2(cone.axis[1], cone.axis[0]);
    const auto f = [&](double beta) {
      return cone_direction_energy(cone, Point(std::cos(beta), std::sin(beta), 0.0));
    };
    double a = base, b = base + pi / 2;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80; ++it) {
      if (fc < fd) {
        b = d; d = c; fd = fc;
        c = b - gr * (b - a);
        fc = f(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + gr * (b - a);
        fd = f(d);
      }
    }
    out.f_min = std::min(fc, fd);
  } else {
    // Fibonacci sphere sweep of candidate directions.
    const int count = 10000;
    double best = std::numeric_limits<double>::infinity();
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double ph = golden * i;
      const Point sigma(r * std::cos(ph), r * std::sin(ph), z);
      best = std::min(best, cone_direction_energy(cone, sigma, 2048));
    }
    out.f_min = best;
  }

  out.c_explicit = eta * std::pow(out.r0, 2.0 - 2.0 * s) * out.f_min / (8.0 * (1.0 - s));
  return out;
}

CoercivityCertificate verify_coercivity(const Symbol& sym, const Cone& cone,
                                        double eta, double kmax) {
  CoercivityCertificate cert;
  cert.eta = eta;
  cert.s = sym.s;
  cert.cone = cone;
  cert.constant = explicit_constant(cone, eta, sym.s);
  cert.kmax = kmax;

  const SpectralField layout(sym.grid);
  double min_ratio = std::numeric_limits<double>::infinity();
  double err_at_min = 0;
  for (std::int64_t f = 0; f < sym.grid.size(); ++f) {
    const Index3 k = layout.freq(f);
    double eucl = 0;
    for (int a = 0; a < sym.grid.n; ++a) eucl += static_cast<double>(k[a]) * k[a];
    const double kn = std::sqrt(eucl);
    if (kn == 0 || kn > kmax + 1e-9 || !sym.covers(k)) continue;
    ModeRatio row;
    row.k = k;
    row.m = sym.values[f];
    row.k_pow = std::pow(kn, 2.0 * sym.s);
    row.ratio = row.m / row.k_pow;
    row.quad_error = sym.quad_error[f];
    cert.table.push_back(row);
    if (row.ratio < min_ratio) {
      min_ratio = row.ratio;
      cert.argmin = k;
      err_at_min = row.quad_error / row.k_pow;
    }
  }
  require(!cert.table.empty(), "verify_coercivity: no computed modes within kmax");
  cert.min_ratio = min_ratio;
  cert.slack = 1e-8 + err_at_min;
  cert.pass = min_ratio >= cert.constant.c_explicit - cert.slack;
  return cert;
}

} // namespace nlt
