#include "nlt/fourier.hpp"

#include <unsupported/Eigen/FFT>
#include <vector>

namespace nlt {

namespace {

// In-place 1-D transforms along each axis of the row-major cube.
void fft_all_axes(CArray& data, const TorusGrid& g, bool inverse) {
  Eigen::FFT<double> fft;
  const int N = g.N;
  std::vector<Complex> line(N), out(N);
  std::int64_t stride = 1; // stride of the last axis is 1 in row-major order
  for (int axis = g.n - 1; axis >= 0; --axis) {
    const std::int64_t nlines = g.size() / N;
    for (std::int64_t l = 0; l < nlines; ++l) {
      // Decompose the line id into (block before axis, offset after axis).
      const std::int64_t inner = l % stride;
      const std::int64_t outer = l / stride;
      const std::int64_t base = outer * stride * N + inner;
      for (int j = 0; j < N; ++j) line[j] = data[base + j * stride];
      if (inverse)
        fft.inv(out, line);
      else
        fft.fwd(out, line);
      for (int j = 0; j < N; ++j) data[base + j * stride] = out[j];
    }
    stride *= N;
  }
}

// Phase factor (-1)^(k_1+...+k_n) accounting for the -1/2 grid offset.
inline double center_phase(const TorusGrid& g, std::int64_t flat) {
  int sum = 0;
  for (int a = g.n - 1; a >= 0; --a) {
    sum += static_cast<int>(flat % g.N);
    flat /= g.N;
  }
  return (sum % 2 == 0) ? 1.0 : -1.0;
}

} // namespace

SpectralField dft(const GridFunction& f) {
  SpectralField F(f.grid);
  F.coeffs = f.values.cast<Complex>();
  fft_all_axes(F.coeffs, f.grid, /*inverse=*/false);
  const double scale = 1.0 / static_cast<double>(f.grid.size());
  for (std::int64_t i = 0; i < F.coeffs.size(); ++i)
    F.coeffs[i] *= scale * center_phase(f.grid, i);
  return F;
}

GridFunction idft(const SpectralField& F) {
  CArray buf = F.coeffs;
  for (std::int64_t i = 0; i < buf.size(); ++i) buf[i] *= center_phase(F.grid, i);
  // Eigen's inv includes a 1/N factor per axis; undo it to invert our forward.
  fft_all_axes(buf, F.grid, /*inverse=*/true);
  buf *= static_cast<double>(F.grid.size());
  GridFunction f(F.grid);
  f.values = buf.real();
  return f;
}

SpectralField frac_laplacian(const SpectralField& F, double sigma) {
  require(sigma > -2.0 && sigma <= 2.0, "frac_laplacian: order must be in (-2, 2]");
  SpectralField G(F.grid);
  for (std::int64_t i = 0; i < F.coeffs.size(); ++i) {
    const double kn = F.freq_norm(i);
    G.coeffs[i] = (kn == 0.0) ? Complex(0, 0) : F.coeffs[i] * std::pow(kn, sigma);
  }
  return G;
}

GridFunction frac_laplacian(const GridFunction& f, double sigma) {
  require(sigma > -2.0 && sigma <= 2.0, "frac_laplacian: order must be in (-2, 2]");
  if (sigma < 0) {
    const double scale = 1.0 + f.values.abs().maxCoeff();
    if (std::abs(f.mean()) > 1e-10 * scale)
      throw NegativeOrderNonzeroMean(
          "frac_laplacian: negative order requires a mean-zero field");
  }
  return idft(frac_laplacian(dft(f), sigma));
}

Point spectral_gradient(const GridFunction& f, const Point& x) {
  const SpectralField F = dft(f);
  Point grad = Point::Zero();
  const double two_pi = 6.283185307179586;
  for (std::int64_t i = 0; i < F.coeffs.size(); ++i) {
    const Index3 k = F.freq(i);
    double kx = 0;
    for (int a = 0; a < f.grid.n; ++a) kx += static_cast<double>(k[a]) * x[a];
    // d/dx_a of c e^{2 pi i <k,x>} summed over modes; result is real.
    const Complex ph = F.coeffs[i] * Complex(std::cos(two_pi * kx), std::sin(two_pi * kx));
    for (int a = 0; a < f.grid.n; ++a)
      grad[a] += -two_pi * static_cast<double>(k[a]) * ph.imag();
  }
  return grad;
}

GridFunction random_bandlimited(const TorusGrid& grid, int band, const CounterRng& rng) {
  SpectralField F(grid);
  std::uint64_t ctr = 0;
  // Fill each conjugate pair once; k = 0 stays zero (mean-free field).
  for (std::int64_t i = 0; i < F.coeffs.size(); ++i) {
    const Index3 k = F.freq(i);
    bool in_band = true, zero = true, canonical = false;
    for (int a = 0; a < grid.n; ++a) {
      if (std::llabs(k[a]) > band) in_band = false;
      if (k[a] != 0) {
        if (zero) canonical = k[a] > 0; // first nonzero component decides
        zero = false;
      }
    }
    ctr += 2;
    if (!in_band || zero || !canonical) continue;
    const Complex c(rng.normal(ctr), rng.normal(ctr + 1));
    Index3 mk{0, 0, 0};
    for (int a = 0; a < grid.n; ++a) mk[a] = -k[a];
    F.coeff(k) = c;
    F.coeff(mk) = std::conj(c);
  }
  return idft(F);
}

GridFunction cosine_mode(const TorusGrid& grid, const Index3& k) {
  GridFunction f(grid);
  const double two_pi = 6.283185307179586;
  for (std::int64_t i = 0; i < f.values.size(); ++i) {
    const Point x = grid.point(i);
    double kx = 0;
    for (int a = 0; a < grid.n; ++a) kx += static_cast<double>(k[a]) * x[a];
    f.values[i] = std::cos(two_pi * kx);
  }
  return f;
}

GridFunction sine_mode(const TorusGrid& grid, const Index3& k) {
  GridFunction f(grid);
  const double two_pi = 6.283185307179586;
  for (std::int64_t i = 0; i < f.values.size(); ++i) {
    const Point x = grid.point(i);
    double kx = 0;
    for (int a = 0; a < grid.n; ++a) kx += static_cast<double>(k[a]) * x[a];
    f.values[i] = std::sin(two_pi * kx);
  }
  return f;
}

} // namespace nlt
