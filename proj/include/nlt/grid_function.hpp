#pragma once

#include <Eigen/Dense>
#include <complex>

#include "nlt/grid.hpp"
#include "nlt/rng.hpp"

namespace nlt {

using Array = Eigen::ArrayXd;
using CArray = Eigen::ArrayXcd;
using Complex = std::complex<double>;

/// Real periodic function sampled on a TorusGrid, row-major axis order.
struct GridFunction {
  TorusGrid grid;
  Array values;

  GridFunction() = default;
  explicit GridFunction(const TorusGrid& g) : grid(g), values(Array::Zero(g.size())) {}
  GridFunction(const TorusGrid& g, Array v) : grid(g), values(std::move(v)) {
    require(values.size() == grid.size(), "GridFunction: value count != grid size");
  }

  double operator()(const Index3& j) const { return values[grid.flat(j)]; }
  double& operator()(const Index3& j) { return values[grid.flat(j)]; }

  double mean() const { return values.mean(); }

  bool finite() const { return values.isFinite().all(); }

  /// Shift by whole grid cells (periodic): result(x) = f(x + shift*h).
  GridFunction shifted(const Index3& cells) const {
    GridFunction out(grid);
    const std::int64_t m = grid.size();
    for (std::int64_t f = 0; f < m; ++f) {
      Index3 j = grid.unflat(f);
      for (int a = 0; a < grid.n; ++a) j[a] += cells[a];
      out.values[f] = values[grid.flat(j)];
    }
    return out;
  }
};

/// Complex Fourier coefficients over the balanced lattice {-N/2,...,N/2-1}^n.
/// Storage is FFT slot order; access by integer frequency via coeff().
struct SpectralField {
  TorusGrid grid;
  CArray coeffs;

  SpectralField() = default;
  explicit SpectralField(const TorusGrid& g) : grid(g), coeffs(CArray::Zero(g.size())) {}

  Complex coeff(const Index3& k) const {
    Index3 j{0, 0, 0};
    for (int a = 0; a < grid.n; ++a) j[a] = freq_slot(k[a], grid.N);
    return coeffs[grid.flat(j)];
  }
  Complex& coeff(const Index3& k) {
    Index3 j{0, 0, 0};
    for (int a = 0; a < grid.n; ++a) j[a] = freq_slot(k[a], grid.N);
    return coeffs[grid.flat(j)];
  }

  /// Balanced frequency vector of flat slot f.
  Index3 freq(std::int64_t f) const {
    Index3 j = grid.unflat(f);
    Index3 k{0, 0, 0};
    for (int a = 0; a < grid.n; ++a) k[a] = balanced_freq(j[a], grid.N);
    return k;
  }

  double freq_norm(std::int64_t f) const {
    const Index3 k = freq(f);
    double s = 0;
    for (int a = 0; a < grid.n; ++a) s += static_cast<double>(k[a]) * k[a];
    return std::sqrt(s);
  }
};

/// Field with iid standard-normal coefficients on modes |k|_inf <= band,
/// mean zero, conjugate-symmetric (hence real).
GridFunction random_bandlimited(const TorusGrid& grid, int band, const CounterRng& rng);

/// f(x) = cos(2 pi <k, x>).
GridFunction cosine_mode(const TorusGrid& grid, const Index3& k);

/// f(x) = sin(2 pi <k, x>).
GridFunction sine_mode(const TorusGrid& grid, const Index3& k);

} // namespace nlt
