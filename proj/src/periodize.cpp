#include "nlt/periodize.hpp"

#include <cmath>

namespace nlt {

double PeriodizedKernel::operator()(const Point& h) const {
  const int n = base.n;
  const double L = period;
  Point hw = Point::Zero();
  for (int a = 0; a < n; ++a) hw[a] = wrap_unit(h[a] / L) * L;

  const double expo = n + 2 * s;
  double acc = 0;
  const int lo = -M, hi = M;
  Point w = Point::Zero();
  for (int m0 = lo; m0 <= hi; ++m0) {
    w[0] = hw[0] + L * m0;
    for (int m1 = (n >= 2 ? lo : 0); m1 <= (n >= 2 ? hi : 0); ++m1) {
      if (n >= 2) w[1] = hw[1] + L * m1;
      for (int m2 = (n >= 3 ? lo : 0); m2 <= (n >= 3 ? hi : 0); ++m2) {
        if (n >= 3) w[2] = hw[2] + L * m2;
        const double r = w.norm();
        if (r < 1e-300) continue; // the h = 0 singular point itself
        acc += base.eval(x0, 0.0, w / r) * std::pow(r, -expo);
      }
    }
  }
  return acc;
}

double periodization_tail_bound(int n, double s, double Lambda, int M, double period) {
  // Count lattice shells |m|_inf = j and bound each point's contribution by
  // the nearest possible distance L (j - 1/2).
  const double expo = n + 2 * s;
  double acc = 0;
  const int jmax = 64 * M;
  for (int j = M + 1; j <= jmax; ++j) {
    double count = 1;
    switch (n) {
      case 1: count = 2; break;
      case 2: count = 8.0 * j; break;
      default: count = std::pow(2.0 * j + 1, 3) - std::pow(2.0 * j - 1, 3); break;
    }
    acc += count * std::pow(j - 0.5, -expo);
  }
  // Integral remainder beyond jmax: count(j) <= c_n j^{n-1}.
  const double cn = (n == 1) ? 2.0 : (n == 2 ? 8.0 : 26.0);
  acc += cn * std::pow(static_cast<double>(jmax), n - 1.0) *
         std::pow(jmax - 0.5, -expo) * (jmax / (expo - n));
  return Lambda * acc * std::pow(period, -expo);
}

PeriodizedKernel periodize(const Kernel& K, const Point& x0, double s, int M,
                           double period) {
  require(M >= 1, "periodize: M must be >= 1");
  require(period > 0 && period <= 1.0, "periodize: period must lie in (0, 1]");
  PeriodizedKernel mu;
  mu.base = K;
  mu.x0 = x0;
  mu.s = s;
  mu.M = M;
  mu.period = period;
  mu.tail_bound = periodization_tail_bound(K.n, s, K.Lambda, M, period);
  return mu;
}

} // namespace nlt
