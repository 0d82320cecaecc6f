#include <doctest.h>

#include <cmath>

#include "nlt/coercivity.hpp"
#include "nlt/symbol.hpp"
#include "oracles.hpp"

using namespace nlt;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("periodized constant kernel matches the exact lattice sum at h = 1/4") {
  // sum_m |1/4 + m|^{-2} = pi^2 / sin^2(pi/4) = 2 pi^2.
  const Kernel K = constant_kernel(1, 1.0, 0.5);
  const PeriodizedKernel mu500 = periodize(K, Point::Zero(), 0.5, 500);
  Point h = Point::Zero();
  h[0] = 0.25;
  CHECK(mu500(h) == doctest::Approx(2 * pi * pi).epsilon(1e-3));

  const PeriodizedKernel mu50 = periodize(K, Point::Zero(), 0.5, 50);
  CHECK(std::abs(mu50(h) - mu500(h)) <= mu50.tail_bound);
}

TEST_CASE("tail bound: integral comparison value and soundness") {
  CHECK(periodization_tail_bound(1, 0.5, 1.0, 50) <= 2.0 / 49.5 + 1e-12);
  CHECK(periodization_tail_bound(1, 0.5, 1.0, 50) > 0.030);

  const Kernel K = constant_kernel(1, 1.0, 0.3);
  const PeriodizedKernel muM = periodize(K, Point::Zero(), 0.3, 20);
  const PeriodizedKernel mu4M = periodize(K, Point::Zero(), 0.3, 80);
  const CounterRng rng(4);
  for (int i = 0; i < 32; ++i) {
    Point h = Point::Zero();
    h[0] = rng.uniform(i, -0.5, 0.5);
    CHECK(std::abs(muM(h) - mu4M(h)) <= muM.tail_bound);
  }
}

TEST_CASE("symmetrized periodization is even") {
  const Cone cap(2, Point(1, 0.3, 0), 0.6, true);
  const Kernel K = cone_indicator_kernel(cap, 0.5, 1.0, 0.4);
  const PeriodizedKernel mu = periodize(K, Point::Zero(), 0.4, 10);
  const CounterRng rng(8);
  for (int i = 0; i < 16; ++i) {
    Point h = Point::Zero();
    h[0] = rng.uniform(2 * i, -0.5, 0.5);
    h[1] = rng.uniform(2 * i + 1, -0.5, 0.5);
    CHECK(mu(h) == doctest::Approx(mu(-h)).epsilon(1e-12));
  }
}

TEST_CASE("1-D constant-kernel symbol matches the closed form 2 pi^2 |k|") {
  const Kernel K = constant_kernel(1, 1.0, 0.5);
  const PeriodizedKernel mu = periodize(K, Point::Zero(), 0.5, 1000);
  const TorusGrid g(1, 64);
  const Symbol sym = compute_symbol(mu, g, 32);
  CHECK(sym.complete());
  for (int k = 1; k <= 31; ++k) {
    const double expect = 2 * pi * pi * k;
    CHECK(sym.at(Index3{k, 0, 0}) == doctest::Approx(expect).epsilon(1e-5));
    CHECK(sym.at(Index3{-k, 0, 0}) == doctest::Approx(expect).epsilon(1e-5));
  }
  // Nyquist-edge mode has no positive partner but is covered directly.
  CHECK(sym.at(Index3{-32, 0, 0}) == doctest::Approx(2 * pi * pi * 32).epsilon(1e-5));
  CHECK(sym.at(Index3{0, 0, 0}) == 0.0);
}

TEST_CASE("1-D symbol matches the closed form for s != 1/2") {
  for (double s : {0.3, 0.7}) {
    const Kernel K = constant_kernel(1, 1.0, s);
    const PeriodizedKernel mu = periodize(K, Point::Zero(), s, 1000);
    const TorusGrid g(1, 32);
    const Symbol sym = compute_symbol(mu, g, 8);
    for (int k = 1; k <= 8; ++k) {
      const double expect = oracle::symbol_1d_constant(s, k);
      CHECK(sym.at(Index3{k, 0, 0}) == doctest::Approx(expect).epsilon(2e-5));
    }
  }
}

TEST_CASE("periodization identity: folded symbol equals whole-space quadrature (n=2)") {
  const double s = 0.4;
  const Cone cap(2, Point::UnitX(), pi / 3, true);
  const Kernel K = cone_indicator_kernel(cap, 1.0, 1.0, s);
  const PeriodizedKernel mu = periodize(K, Point::Zero(), s, 24);
  const TorusGrid g(2, 16);
  const Symbol sym = compute_symbol(mu, g, 9);
  for (const Index3 k : {Index3{1, 0, 0}, Index3{2, 1, 0}, Index3{0, 3, 0},
                         Index3{5, 5, 0}, Index3{-8, 0, 0}, Index3{7, 4, 0}}) {
    const double folded = sym.at(k);
    const double unfolded = oracle::symbol_2d_cap(
        s, static_cast<double>(k[0]), static_cast<double>(k[1]), 0.0, pi / 3, true, 1.0);
    CHECK(folded == doctest::Approx(unfolded).epsilon(1e-4));
  }
}

TEST_CASE("homogeneity: m(lk)/m(k) approaches l^{2s} along dilations") {
  const double s = 0.45;
  const Kernel K = constant_kernel(2, 1.0, s);
  const PeriodizedKernel mu = periodize(K, Point::Zero(), s, 24);
  const TorusGrid g(2, 32);
  const Symbol sym = compute_symbol(mu, g, 13);
  const double m4 = sym.at(Index3{4, 0, 0});
  const double m12 = sym.at(Index3{12, 0, 0});
  CHECK(m12 / m4 == doctest::Approx(std::pow(3.0, 2 * s)).epsilon(0.02));
  const double d4 = sym.at(Index3{3, 3, 0});
  const double d12 = sym.at(Index3{9, 9, 0});
  CHECK(d12 / d4 == doctest::Approx(std::pow(3.0, 2 * s)).epsilon(0.02));
}

TEST_CASE("r0 solves the scalar gap equation and the inequality holds below it") {
  const Cone full(2, Point::UnitX(), pi / 2, true);
  const ExplicitConstant ec = explicit_constant(full, 1.0, 0.5);
  // Root of 1 - cos(2t) - t^2/4 by an independent bisection.
  double lo = 2.0, hi = 2.5;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (1 - std::cos(2 * mid) - mid * mid / 4 > 0)
      lo = mid;
    else
      hi = mid;
  }
  CHECK(ec.r0 == doctest::Approx(lo).epsilon(1e-10));
  for (int i = 1; i <= 10000; ++i) {
    const double t = ec.r0 * i / 10000.0;
    CHECK(1 - std::cos(2 * t) >= t * t / 4 - 1e-12);
  }
}

TEST_CASE("f_min closed forms") {
  SUBCASE("full circle gives pi for every direction") {
    const Cone full(2, Point::UnitX(), pi / 2, true);
    CHECK(cone_direction_energy(full, Point::UnitX()) == doctest::Approx(pi).epsilon(1e-6));
    CHECK(cone_direction_energy(full, Point(0.6, 0.8, 0)) == doctest::Approx(pi).epsilon(1e-6));
    const ExplicitConstant ec = explicit_constant(full, 1.0, 0.5);
    CHECK(ec.f_min == doctest::Approx(pi).epsilon(1e-6));
  }
  SUBCASE("symmetrized cap: f_min = 2 lam - sin(2 lam)") {
    for (double lam : {pi / 4, pi / 6, 1.0}) {
      const Cone cap(2, Point(0.8, -0.6, 0), lam, true);
      const ExplicitConstant ec = explicit_constant(cap, 1.0, 0.5);
      CHECK(ec.f_min == doctest::Approx(oracle::cap_fmin_2d(lam)).epsilon(1e-6));
    }
  }
  SUBCASE("eta scales the constant linearly") {
    const Cone cap(2, Point::UnitX(), pi / 4, true);
    const ExplicitConstant c1 = explicit_constant(cap, 1.0, 0.5);
    const ExplicitConstant c10 = explicit_constant(cap, 10.0, 0.5);
    CHECK(c10.c_explicit == doctest::Approx(10 * c1.c_explicit).epsilon(1e-12));
    CHECK(explicit_constant(cap, 0.0, 0.5).c_explicit == doctest::Approx(0.0));
  }
}

TEST_CASE("coercivity certificate: constant 1-D kernel has ratio 2 pi^2") {
  const Kernel K = constant_kernel(1, 1.0, 0.5);
  const PeriodizedKernel mu = periodize(K, Point::Zero(), 0.5, 500);
  const TorusGrid g(1, 32);
  const Symbol sym = compute_symbol(mu, g, 16);
  const CoercivityCertificate cert = verify_coercivity(sym, K.cone, 1.0, 16);
  CHECK(cert.pass);
  for (const ModeRatio& row : cert.table)
    CHECK(row.ratio == doctest::Approx(2 * pi * pi).epsilon(1e-4));
  CHECK(cert.min_ratio > cert.constant.c_explicit);
}

TEST_CASE("coercivity certificate: pi/4 cone in 2-D passes for all |k| <= 16") {
  const double s = 0.5;
  const Cone cap(2, Point::UnitX(), pi / 4, true);
  const Kernel K = cone_indicator_kernel(cap, 1.0, 1.0, s);
  const PeriodizedKernel mu = periodize(K, Point::Zero(), s, 24);
  const TorusGrid g(2, 32);
  const Symbol sym = compute_symbol(mu, g, 16);
  const CoercivityCertificate cert = verify_coercivity(sym, cap, 1.0, 16);
  CHECK(cert.pass);
  CHECK(cert.min_ratio >= cert.constant.c_explicit);
  // Every per-mode inequality, not just the minimum.
  for (const ModeRatio& row : cert.table)
    CHECK(row.m >= cert.constant.c_explicit * row.k_pow - cert.slack);
}

TEST_CASE("grid symbol diagonalizes the discrete double-sum form") {
  const Kernel K = constant_kernel(1, 1.0, 0.5);
  const PeriodizedKernel mu = periodize(K, Point::Zero(), 0.5, 200);
  const TorusGrid g(1, 32);
  const Symbol mg = grid_symbol(mu, g);
  CHECK(mg.values[0] == 0.0);
  // Direct check of m_grid(k) = h sum_{d!=0} (1 - cos(2 pi k x_d)) mu(x_d).
  for (int k : {1, 3, 7}) {
    double acc = 0;
    for (int d = 1; d < g.N; ++d) {
      Point xd = Point::Zero();
      xd[0] = d * g.spacing();
      acc += (1 - std::cos(2 * pi * k * xd[0])) * mu(xd);
    }
    acc *= g.spacing();
    CHECK(mg.at(Index3{k, 0, 0}) == doctest::Approx(acc).epsilon(1e-11));
  }
  // The grid symbol tracks the quadrature symbol at low modes.
  const Symbol sq = compute_symbol(mu, g, 4);
  CHECK(mg.at(Index3{1, 0, 0}) ==
        doctest::Approx(sq.at(Index3{1, 0, 0})).epsilon(0.08));
}
