#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>

#include "nlt/errors.hpp"

namespace nlt {

/// Points and directions live in a fixed 3-slot vector; coordinates beyond
/// the active dimension are zero.
using Point = Eigen::Vector3d;
using Index3 = std::array<std::int64_t, 3>;

/// Wrap a coordinate into the fundamental cell [-1/2, 1/2).
inline double wrap_unit(double x) {
  const double y = x - std::floor(x + 0.5);
  return (y >= 0.5) ? y - 1.0 : y; // guard against floor rounding at +1/2
}

/// Componentwise-wrapped displacement of the unit torus.
inline Point wrap_unit(const Point& d, int n) {
  Point w = Point::Zero();
  for (int a = 0; a < n; ++a) w[a] = wrap_unit(d[a]);
  return w;
}

/// Wrapped (torus) Euclidean distance on the unit cell.
inline double torus_dist(const Point& x, const Point& y, int n) {
  double s = 0;
  for (int a = 0; a < n; ++a) {
    const double d = wrap_unit(x[a] - y[a]);
    s += d * d;
  }
  return std::sqrt(s);
}

/// Uniform grid on the n-torus [-1/2,1/2)^n, N points per axis.
/// Grid points x_j = -1/2 + j*h, h = 1/N; indices are periodic mod N.
struct TorusGrid {
  int n = 1;          ///< spatial dimension, 1..3
  int N = 16;         ///< points per axis (even, >= 4; powers of two in practice)

  TorusGrid() = default;
  TorusGrid(int n_, int N_) : n(n_), N(N_) {
    require(n >= 1 && n <= 3, "TorusGrid: dimension must be 1, 2 or 3");
    require(N >= 4 && N % 2 == 0, "TorusGrid: N must be even and >= 4");
  }

  double spacing() const { return 1.0 / N; }
  std::int64_t size() const {
    std::int64_t s = 1;
    for (int a = 0; a < n; ++a) s *= N;
    return s;
  }

  /// Row-major flat index from per-axis indices (wrapped mod N).
  std::int64_t flat(const Index3& j) const {
    std::int64_t f = 0;
    for (int a = 0; a < n; ++a) {
      std::int64_t ja = j[a] % N;
      if (ja < 0) ja += N;
      f = f * N + ja;
    }
    return f;
  }

  Index3 unflat(std::int64_t f) const {
    Index3 j{0, 0, 0};
    for (int a = n - 1; a >= 0; --a) {
      j[a] = f % N;
      f /= N;
    }
    return j;
  }

  Point point(const Index3& j) const {
    Point x = Point::Zero();
    for (int a = 0; a < n; ++a) {
      std::int64_t ja = j[a] % N;
      if (ja < 0) ja += N;
      x[a] = -0.5 + static_cast<double>(ja) * spacing();
    }
    return x;
  }

  Point point(std::int64_t f) const { return point(unflat(f)); }

  /// Nearest grid index to a point (coordinates wrapped first).
  Index3 nearest(const Point& x) const {
    Index3 j{0, 0, 0};
    for (int a = 0; a < n; ++a) {
      const double t = (wrap_unit(x[a]) + 0.5) * N;
      std::int64_t ja = static_cast<std::int64_t>(std::llround(t)) % N;
      if (ja < 0) ja += N;
      j[a] = ja;
    }
    return j;
  }

  bool operator==(const TorusGrid& o) const { return n == o.n && N == o.N; }
  bool operator!=(const TorusGrid& o) const { return !(*this == o); }
};

/// Balanced frequency for axis index j in 0..N-1: k in {-N/2, ..., N/2-1}.
inline std::int64_t balanced_freq(std::int64_t j, int N) {
  return (j < N / 2) ? j : j - N;
}

/// Inverse of balanced_freq.
inline std::int64_t freq_slot(std::int64_t k, int N) {
  std::int64_t j = k % N;
  if (j < 0) j += N;
  return j;
}

} // namespace nlt
