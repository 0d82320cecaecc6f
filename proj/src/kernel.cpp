#include "nlt/kernel.hpp"

#include <cmath>

#include "nlt/errors.hpp"

namespace nlt {

namespace {
constexpr double two_pi = 6.283185307179586;

// Deterministic quasi-uniform direction on S^{n-1}.
Point sphere_point(int n, std::uint64_t i, const CounterRng& rng) {
  Point h = Point::Zero();
  if (n == 1) {
    h[0] = (rng.word(i) & 1) ? 1.0 : -1.0;
    return h;
  }
  double norm2 = 0;
  for (int a = 0; a < n; ++a) {
    h[a] = rng.normal(16 * i + a);
    norm2 += h[a] * h[a];
  }
  if (norm2 < 1e-20) { h.setZero(); h[0] = 1.0; return h; }
  return h / std::sqrt(norm2);
}
} // namespace

Point unit_direction(const Point& v) {
  const double nv = v.norm();
  require(nv > 0, "unit_direction: zero vector");
  return v / nv;
}

Cone::Cone(int n_, const Point& axis_, double half_angle_, bool symmetrized_)
    : n(n_), axis(unit_direction(axis_)), half_angle(half_angle_),
      symmetrized(symmetrized_) {
  require(n >= 1 && n <= 3, "Cone: dimension must be 1..3");
  require(half_angle > 0 && half_angle <= 1.5707963267948966 + 1e-12,
          "Cone: half_angle must be in (0, pi/2]");
  if (measure() <= 0) throw EmptyCone("Cone: zero spherical measure");
}

bool Cone::contains(const Point& h) const {
  const double c = axis.dot(h) / h.norm();
  const double cos_half = std::cos(half_angle);
  if (c >= cos_half - 1e-15) return true;
  if (symmetrized && -c >= cos_half - 1e-15) return true;
  return false;
}

double Cone::measure() const {
  const double sym = symmetrized ? 2.0 : 1.0;
  switch (n) {
    case 1:
      // S^0 = {+1,-1} with counting measure; the cap holds the axis point.
      return sym;
    case 2:
      return sym * 2.0 * half_angle; // arc length of the cap
    default:
      return sym * two_pi * (1.0 - std::cos(half_angle)); // cap area on S^2
  }
}

Point Cone::sample(std::uint64_t i, const CounterRng& rng) const {
  Point h = axis;
  if (n == 1) {
    // axis or its mirror when symmetrized
  } else if (n == 2) {
    const double th = rng.uniform(3 * i, -half_angle, half_angle);
    const double base = std::atan2(axis[1], axis[0]);
    h = Point::Zero();
    h[0] = std::cos(base + th);
    h[1] = std::sin(base + th);
  } else {
    // Uniform on the cap around e3, then rotate e3 onto the axis.
    const double u = rng.uniform(3 * i);
    const double cos_th = 1.0 - u * (1.0 - std::cos(half_angle));
    const double sin_th = std::sqrt(std::max(0.0, 1.0 - cos_th * cos_th));
    const double ph = rng.uniform(3 * i + 1, 0.0, two_pi);
    Point local(sin_th * std::cos(ph), sin_th * std::sin(ph), cos_th);
    Point e3 = Point::UnitZ();
    Point v = e3.cross(axis);
    const double c = e3.dot(axis);
    if (v.norm() < 1e-14) {
      h = (c > 0) ? local : Point(-local[0], local[1], -local[2]);
    } else {
      // Rodrigues rotation taking e3 to axis.
      const Point k = v / v.norm();
      const double st = v.norm();
      h = local * c + k.cross(local) * st + k * (k.dot(local)) * (1.0 - c);
    }
  }
  if (symmetrized && (rng.word(3 * i + 2) & 1)) h = -h;
  return h;
}

void certify_kernel(const Kernel& K, int bound_probes, int cone_probes,
                    std::uint64_t seed) {
  require(K.n >= 1 && K.n <= 3, "Kernel: dimension must be 1..3");
  require(K.s > 0 && K.s < 1, "Kernel: order s must be in (0,1)");
  if (K.eta > K.Lambda + 1e-12)
    throw BadEllipticity("Kernel: eta exceeds Lambda");
  const CounterRng rng(seed);
  for (int i = 0; i < bound_probes; ++i) {
    Point x = Point::Zero();
    for (int a = 0; a < K.n; ++a) x[a] = rng.uniform(8 * i + a, -0.5, 0.5);
    const double r = rng.uniform(8 * i + 4, 0.0, 1.0);
    const Point h = sphere_point(K.n, 3 * i + 1, rng.fork(1));
    const double v = K.eval(x, r, h);
    if (!(v >= -1e-12))
      throw BadEllipticity("Kernel: negative value at a probe");
    if (v > K.Lambda * (1 + 1e-9) + 1e-12)
      throw BadEllipticity("Kernel: probe value exceeds Lambda");
  }
  const CounterRng crng = rng.fork(2);
  for (int i = 0; i < cone_probes; ++i) {
    Point x = Point::Zero();
    for (int a = 0; a < K.n; ++a) x[a] = crng.uniform(8 * i + a, -0.5, 0.5);
    const Point h = K.cone.sample(i, crng.fork(3));
    const double v = K.eval(x, 0.0, h);
    if (v < K.eta * (1 - 1e-9) - 1e-12)
      throw BadEllipticity("Kernel: cone lower bound eta fails at a probe");
  }
}

Kernel constant_kernel(int n, double value, double s) {
  require(value >= 0, "constant_kernel: value must be nonnegative");
  Kernel K;
  K.n = n;
  K.s = s;
  K.Lambda = value;
  K.eta = value;
  K.cone = Cone(n, Point::UnitX(), 1.5707963267948966, true);
  K.eval = [value](const Point&, double, const Point&) { return value; };
  K.hoelder = HoelderData{1.0, 0.0};
  certify_kernel(K);
  return K;
}

Kernel cone_indicator_kernel(const Cone& cone, double eta, double Lambda, double s,
                             double outside) {
  if (!(eta > 0) || eta > Lambda)
    throw BadEllipticity("cone_indicator_kernel: need 0 < eta <= Lambda");
  require(outside >= 0 && outside <= Lambda,
          "cone_indicator_kernel: outside level must be in [0, Lambda]");
  Kernel K;
  K.n = cone.n;
  K.s = s;
  K.Lambda = Lambda;
  K.eta = eta;
  K.cone = cone;
  K.eval = [cone, Lambda, outside](const Point&, double, const Point& h) {
    return cone.contains(h) ? Lambda : outside;
  };
  if (cone.n == 2 && Lambda != outside && cone.half_angle < 1.5707963267948966 - 1e-12) {
    const double base = std::atan2(cone.axis[1], cone.axis[0]);
    K.angular_breaks = {base - cone.half_angle, base + cone.half_angle};
    if (cone.symmetrized) {
      K.angular_breaks.push_back(base - cone.half_angle + 3.14159265358979324);
      K.angular_breaks.push_back(base + cone.half_angle + 3.14159265358979324);
    }
  }
  certify_kernel(K);
  return K;
}

Kernel diffeo_kernel(int n, const std::function<Point(const Point&)>& phi, double s,
                     int probes, std::uint64_t seed) {
  const double r0 = 1e-5; // difference-quotient radius for the r = 0 limit
  auto stretch = [phi, r0](const Point& x, double r, const Point& h) {
    if (r < r0) {
      const Point d = phi(x + r0 * h) - phi(x - r0 * h);
      return d.norm() / (2.0 * r0);
    }
    const Point d = phi(x + r * h) - phi(x);
    return d.norm() / r;
  };

  // Measure bi-Lipschitz bounds on a deterministic probe set.
  const CounterRng rng(seed);
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (int i = 0; i < probes; ++i) {
    Point x = Point::Zero();
    for (int a = 0; a < n; ++a) x[a] = rng.uniform(8 * i + a, -0.5, 0.5);
    const double r = rng.uniform(8 * i + 4, 0.0, 0.5);
    const Point h = sphere_point(n, 2 * i + 1, rng.fork(1));
    const double q = stretch(x, r, h);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  if (!(lo > 1e-2 * hi))
    throw DegenerateJacobian("diffeo_kernel: lower bi-Lipschitz bound below tolerance");

  Kernel K;
  K.n = n;
  K.s = s;
  const double expo = n + 2 * s;
  // Probe-measured extrema; widen by 5% so fresh certification probes fit.
  K.Lambda = std::pow(lo, -expo) * 1.05;
  K.eta = std::pow(hi, -expo) * 0.95;
  K.cone = Cone(n, Point::UnitX(), 1.5707963267948966, true);
  K.eval = [stretch, expo](const Point& x, double r, const Point& h) {
    return std::pow(stretch(x, r, h), -expo);
  };
  K.hoelder = HoelderData{1.0, 0.0};
  certify_kernel(K);
  return K;
}

ContinuityReport measure_continuity(const Kernel& K, const Point& x0, double radius,
                                    std::vector<double> scales, int probes_per_scale,
                                    std::uint64_t seed) {
  std::sort(scales.begin(), scales.end()); // ascending
  ContinuityReport rep;
  rep.x0 = x0;
  rep.radius_scale = radius;
  rep.scales = scales;
  rep.oscillation.assign(scales.size(), 0.0);

  const CounterRng rng(seed);
  // Canonical probes per scale slice; the probe set at scale lambda_j is the
  // union of slices <= j, so suprema are nested (exactly monotone).
  double running = 0;
  for (std::size_t sc = 0; sc < scales.size(); ++sc) {
    const double lam = scales[sc];
    const double lam_prev = (sc == 0) ? 0.0 : scales[sc - 1];
    const CounterRng srng = rng.fork(sc);
    for (int i = 0; i < probes_per_scale; ++i) {
      // Probe radius in the annulus (lam_prev, lam]*radius: the union over
      // slices fills the whole ball.
      const double rho = radius * (lam_prev + (lam - lam_prev) * srng.uniform(8 * i));
      Point dx = sphere_point(K.n, 2 * i, srng.fork(1));
      const double rr = rho * srng.uniform(8 * i + 1);
      const Point h = sphere_point(K.n, 2 * i + 1, srng.fork(2));
      const Point x = x0 + rho * dx;
      const double dev = std::abs(K.eval(x, rr, h) - K.eval(x0, 0.0, h));
      running = std::max(running, dev);
    }
    rep.oscillation[sc] = running;
  }
  return rep;
}

double measure_hoelder(const Kernel& K, double alpha, int probes, std::uint64_t seed) {
  require(alpha > 0 && alpha <= 1, "measure_hoelder: alpha must be in (0,1]");
  const CounterRng rng(seed);
  double sup = 0;
  for (int i = 0; i < probes; ++i) {
    Point x = Point::Zero(), y = Point::Zero();
    for (int a = 0; a < K.n; ++a) {
      x[a] = rng.uniform(16 * i + a, -0.5, 0.5);
      y[a] = rng.uniform(16 * i + 4 + a, -0.5, 0.5);
    }
    const double d = (x - y).norm();
    if (d < 1e-9) continue;
    const double r = rng.uniform(16 * i + 8, 0.0, 1.0);
    const Point h = sphere_point(K.n, 2 * i + 1, rng.fork(1));
    sup = std::max(sup, std::abs(K.eval(x, r, h) - K.eval(y, r, h)) / std::pow(d, alpha));
  }
  return sup;
}

} // namespace nlt
