#include "nlt/norms.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "nlt/fourier.hpp"
#include "nlt/parallel.hpp"

namespace nlt {

void RegularityOrders::validate(int n, bool for_rewrite) const {
  require(s > 0 && s < 1, "orders: s must lie in (0,1)");
  require(s1 > 0 && s1 < 1 && s2 > 0 && s2 < 1, "orders: s1, s2 must lie in (0,1)");
  require(std::abs(s1 + s2 - 2 * s) < 1e-12, "orders: s1 + s2 must equal 2s");
  require(p > 1 && std::isfinite(p), "orders: p must lie in (1,inf)");
  require(q > 1 && std::isfinite(q), "orders: q must lie in (1,inf)");
  if (for_rewrite) {
    const double lo = std::max(0.0, 2 * s - 1);
    require(t >= s && t < 1, "orders: t must lie in [s,1)");
    require(t_tilde > lo && t_tilde < 2 * s - t,
            "orders: t_tilde must lie in (max{0,2s-1}, 2s-t)");
    require(q <= p_conj() + 1e-12, "orders: q must not exceed p'");
    const double nn = n;
    require(std::min(t - nn / q, t_tilde - nn / q) >= -nn / p_conj() - 1e-12,
            "orders: (t,t_tilde,q,p) violate the admissibility constraint");
  }
}

double lp_norm(const GridFunction& f, double p) {
  require(p >= 1, "lp_norm: p must be >= 1");
  if (!std::isfinite(p)) return f.values.abs().maxCoeff();
  const double hn = std::pow(f.grid.spacing(), f.grid.n);
  return std::pow((f.values.abs().pow(p)).sum() * hn, 1.0 / p);
}

double bessel_seminorm(const GridFunction& f, double sigma, double p) {
  require(sigma > 0 && sigma < 2, "bessel_seminorm: order must be in (0,2)");
  return lp_norm(frac_laplacian(f, sigma), p);
}

namespace {

// Wrapped displacement between grid points of difference index d (per axis).
double diff_norm(const TorusGrid& g, const Index3& d) {
  double s = 0;
  for (int a = 0; a < g.n; ++a) {
    double da = static_cast<double>(d[a]) * g.spacing();
    da = wrap_unit(da);
    s += da * da;
  }
  return std::sqrt(s);
}

double diff_norm_plain(const TorusGrid& g, const Index3& ja, const Index3& jb) {
  double s = 0;
  for (int a = 0; a < g.n; ++a) {
    const double da = static_cast<double>(ja[a] - jb[a]) * g.spacing();
    s += da * da;
  }
  return std::sqrt(s);
}

} // namespace

GagliardoResult gagliardo_seminorm_ex(const GridFunction& f, double sigma, double p,
                                      const GagliardoOptions& opt) {
  require(sigma > 0 && sigma < 1, "gagliardo_seminorm: order must be in (0,1)");
  require(p >= 1 && std::isfinite(p), "gagliardo_seminorm: p must be in [1,inf)");
  const TorusGrid& g = f.grid;
  const std::int64_t m = g.size();
  const double hn = std::pow(g.spacing(), g.n);
  const double expo = g.n + sigma * p;

  GagliardoResult res;
  if (!opt.montecarlo) {
    if (m > (1 << 14))
      throw ExactModeTooLarge("gagliardo_seminorm: exact mode needs N^n <= 2^14");
    if (opt.wrap) {
      // Weight depends only on the index difference: accumulate the
      // difference-indexed correlation once per offset.
      std::vector<double> partial(static_cast<std::size_t>(m), 0.0);
      parallel_for(static_cast<std::size_t>(m), [&](std::size_t df) {
        if (df == 0) return;
        const Index3 d = g.unflat(static_cast<std::int64_t>(df));
        const double w = std::pow(diff_norm(g, d), -expo);
        double acc = 0;
        for (std::int64_t i = 0; i < m; ++i) {
          Index3 j = g.unflat(i);
          for (int a = 0; a < g.n; ++a) j[a] += d[a];
          acc += std::pow(std::abs(f.values[i] - f.values[g.flat(j)]), p);
        }
        partial[df] = acc * w;
      });
      double total = 0;
      for (double v : partial) total += v;
      res.value = std::pow(total * hn * hn, 1.0 / p);
    } else {
      double total = 0;
      for (std::int64_t i = 0; i < m; ++i) {
        const Index3 ji = g.unflat(i);
        for (std::int64_t j = 0; j < m; ++j) {
          if (i == j) continue;
          const Index3 jj = g.unflat(j);
          total += std::pow(std::abs(f.values[i] - f.values[j]), p) *
                   std::pow(diff_norm_plain(g, ji, jj), -expo);
        }
      }
      res.value = std::pow(total * hn * hn, 1.0 / p);
    }
    return res;
  }

  // Monte Carlo over ordered pairs (i, j), i != j.
  const CounterRng rng(opt.seed, 0x6761676c); // "gagl"
  const std::int64_t M = std::max<std::int64_t>(1, opt.samples);
  double sum = 0, sum2 = 0;
  for (std::int64_t t = 0; t < M; ++t) {
    const std::int64_t i = static_cast<std::int64_t>(rng.word(2 * t) % m);
    std::int64_t j = static_cast<std::int64_t>(rng.word(2 * t + 1) % (m - 1));
    if (j >= i) ++j;
    Index3 d = g.unflat(j);
    const Index3 ji = g.unflat(i);
    for (int a = 0; a < g.n; ++a) d[a] -= ji[a];
    const double w = std::pow(diff_norm(g, d), -expo);
    const double v = std::pow(std::abs(f.values[i] - f.values[j]), p) * w;
    sum += v;
    sum2 += v * v;
  }
  const double pairs = static_cast<double>(m) * (m - 1);
  const double mean = sum / M;
  const double var = std::max(0.0, sum2 / M - mean * mean);
  const double total = mean * pairs * hn * hn;
  res.value = std::pow(total, 1.0 / p);
  res.rel_std_error = (mean > 0) ? std::sqrt(var / M) / mean : 0.0;
  res.variance_warning = res.rel_std_error > 0.05;
  return res;
}

double gagliardo_mode_factor(const TorusGrid& grid, double sigma, const Index3& k) {
  // c_N(k) with [f]^2_{W^{sigma,2}} = sum_k c_N(k) |fhat(k)|^2: apply the
  // double sum to the single mode. Difference-index form:
  //   c_N(k) = 2 h^n sum_{d != 0} (1 - cos(2 pi <k, x_d>)) / dist(d)^{n+2sigma}.
  const double expo = grid.n + 2 * sigma;
  const double hn = std::pow(grid.spacing(), grid.n);
  const double two_pi = 6.283185307179586;
  double acc = 0;
  const std::int64_t m = grid.size();
  for (std::int64_t df = 1; df < m; ++df) {
    const Index3 d = grid.unflat(df);
    double kd = 0;
    for (int a = 0; a < grid.n; ++a)
      kd += static_cast<double>(k[a]) * d[a] * grid.spacing();
    acc += (1.0 - std::cos(two_pi * kd)) * std::pow(diff_norm(grid, d), -expo);
  }
  return 2.0 * hn * acc;
}

double dual_norm_bound(const GridFunction& g, double sigma, double p,
                       int probe_count, std::uint64_t seed) {
  require(sigma > 0 && sigma < 1, "dual_norm_bound: order must be in (0,1)");
  require(probe_count >= 1, "dual_norm_bound: need at least one probe");
  const TorusGrid& grid = g.grid;
  const double pp = p / (p - 1.0);
  const double hn = std::pow(grid.spacing(), grid.n);
  const CounterRng rng(seed, 0x6475616c); // "dual"

  double best = 0;
  int used = 0;
  const auto consider = [&](const GridFunction& phi) {
    const double semi = gagliardo_seminorm(phi, sigma, pp);
    if (semi <= 0) return;
    const double pairing = std::abs((g.values * phi.values).sum() * hn);
    best = std::max(best, pairing / semi);
  };

  // Low-frequency trig modes first (fixed enumeration), then seeded fields.
  const int kmax_probe = 3;
  std::vector<Index3> modes;
  const int lo = -kmax_probe, hi = kmax_probe;
  for (int k0 = lo; k0 <= hi && grid.n >= 1; ++k0) {
    for (int k1 = (grid.n >= 2 ? lo : 0); k1 <= (grid.n >= 2 ? hi : 0); ++k1) {
      for (int k2 = (grid.n >= 3 ? lo : 0); k2 <= (grid.n >= 3 ? hi : 0); ++k2) {
        if (k0 == 0 && k1 == 0 && k2 == 0) continue;
        modes.push_back(Index3{k0, k1, k2});
      }
    }
  }
  for (const Index3& k : modes) {
    if (used >= probe_count) return best;
    consider(cosine_mode(grid, k));
    ++used;
    if (used >= probe_count) return best;
    consider(sine_mode(grid, k));
    ++used;
  }
  const int band = std::min(grid.N / 2 - 1, 6);
  for (std::uint64_t t = 0; used < probe_count; ++t, ++used)
    consider(random_bandlimited(grid, band, rng.fork(t)));
  return best;
}

} // namespace nlt
