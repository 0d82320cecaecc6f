#include <doctest.h>

#include <cmath>

#include "nlt/kernel.hpp"

using namespace nlt;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("constant kernel evaluates to its value everywhere") {
  const Kernel K = constant_kernel(2, 1.0, 0.5);
  CHECK(K(Point(0.1, -0.2, 0), 0.3, Point(1, 0, 0)) == doctest::Approx(1.0));
  CHECK(K.Lambda == doctest::Approx(1.0));
  CHECK(K.eta == doctest::Approx(1.0));
}

TEST_CASE("full-sphere cone indicator is Lambda everywhere") {
  const Cone full(2, Point::UnitX(), pi / 2, true);
  const Kernel K = cone_indicator_kernel(full, 0.5, 2.0, 0.5);
  const CounterRng rng(1);
  for (int i = 0; i < 64; ++i) {
    const double th = rng.uniform(i, 0, 2 * pi);
    CHECK(K(Point::Zero(), 0.0, Point(std::cos(th), std::sin(th), 0)) ==
          doctest::Approx(2.0));
  }
}

TEST_CASE("pi/4 cap around e1 excludes e2") {
  const Cone cap(2, Point::UnitX(), pi / 4, true);
  CHECK(cap.contains(Point(1, 0, 0)));
  CHECK(cap.contains(Point(-1, 0, 0)));         // symmetrized
  CHECK(cap.contains(Point(0.8, 0.5, 0)));       // ~32 degrees
  CHECK_FALSE(cap.contains(Point(0, 1, 0)));     // 90 degrees
  CHECK_FALSE(cap.contains(Point(0.5, 0.9, 0))); // ~61 degrees
  const Kernel K = cone_indicator_kernel(cap, 1.0, 1.0, 0.5);
  CHECK(K(Point::Zero(), 0.0, Point(0, 1, 0)) == doctest::Approx(0.0));
}

TEST_CASE("cone measures") {
  CHECK(Cone(2, Point::UnitX(), pi / 2, true).measure() == doctest::Approx(2 * pi));
  CHECK(Cone(2, Point::UnitX(), pi / 4, true).measure() == doctest::Approx(pi));
  CHECK(Cone(3, Point::UnitZ(), pi / 2, true).measure() == doctest::Approx(4 * pi));
  CHECK(Cone(1, Point::UnitX(), pi / 2, true).measure() == doctest::Approx(2.0));
}

TEST_CASE("bad ellipticity is rejected") {
  const Cone cap(2, Point::UnitX(), pi / 4, true);
  CHECK_THROWS_AS(cone_indicator_kernel(cap, 2.0, 1.0, 0.5), BadEllipticity);
}

TEST_CASE("cone samples stay inside the cap") {
  const Cone cap(3, Point(1, 1, 0), 0.4, true);
  const CounterRng rng(9);
  for (int i = 0; i < 200; ++i) {
    const Point h = cap.sample(i, rng);
    CHECK(h.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cap.contains(h));
  }
}

TEST_CASE("diffeo kernel: identity gives K = 1") {
  const auto id = [](const Point& x) { return x; };
  const Kernel K = diffeo_kernel(1, id, 0.5);
  CHECK(K(Point(0.2, 0, 0), 0.1, Point(1, 0, 0)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(K(Point(0.2, 0, 0), 0.0, Point(-1, 0, 0)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("diffeo kernel: homothety phi(x) = 2x gives 2^-(n+2s)") {
  const auto two = [](const Point& x) { return Point(2 * x); };
  const double s = 0.5;
  const Kernel K = diffeo_kernel(2, two, s);
  const double expected = std::pow(2.0, -(2 + 2 * s));
  CHECK(K(Point(0.1, 0.1, 0), 0.2, Point(0, 1, 0)) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("diffeo kernel: degenerate map is rejected") {
  const auto crush = [](const Point& x) { return Point(x[0], 0.0, 0.0); };
  CHECK_THROWS_AS(diffeo_kernel(2, crush, 0.5), DegenerateJacobian);
}

TEST_CASE("diffeo kernel of a smooth perturbation has bounded Hoelder quotient") {
  const auto phi = [](const Point& x) {
    return Point(x[0] + 0.1 * std::sin(2 * pi * x[0]) / (2 * pi), 0, 0);
  };
  const Kernel K = diffeo_kernel(1, phi, 0.5);
  const double q = measure_hoelder(K, 1.0, 2000);
  CHECK(q > 0);
  CHECK(q < 50.0); // C^{1,1} map: finite quotient
  // Cross-check against a direct finite difference of K in x.
  const Point h = Point::UnitX();
  const double fd = std::abs(K(Point(0.13, 0, 0), 0.05, h) - K(Point(0.13 + 1e-4, 0, 0), 0.05, h)) / 1e-4;
  CHECK(q >= fd * 0.5);
}

TEST_CASE("measure_continuity: constant and identity-diffeo kernels have zero modulus") {
  const Kernel C = constant_kernel(2, 1.0, 0.5);
  const auto rep = measure_continuity(C, Point::Zero(), 1.0, {0.05, 0.1, 0.2, 0.4});
  for (double o : rep.oscillation) CHECK(o == doctest::Approx(0.0));

  const auto id = [](const Point& x) { return x; };
  const Kernel D = diffeo_kernel(1, id, 0.5);
  const auto rep2 = measure_continuity(D, Point::Zero(), 1.0, {0.1, 0.3});
  for (double o : rep2.oscillation) CHECK(o < 1e-9);
}

TEST_CASE("measure_continuity is monotone and matches a closed-form modulus") {
  // K = 1 + 0.2 sin(2 pi x1): oscillation around x0 = 0 within radius rho is
  // 0.2 sin(2 pi rho) for rho < 1/4.
  Kernel K = constant_kernel(1, 1.2, 0.5);
  K.eta = 0.8;
  K.Lambda = 1.2;
  K.eval = [](const Point& x, double, const Point&) {
    return 1.0 + 0.2 * std::sin(2 * pi * x[0]);
  };
  certify_kernel(K);
  const std::vector<double> scales{0.025, 0.05, 0.1};
  const auto rep = measure_continuity(K, Point::Zero(), 1.0, scales, 4000);
  for (std::size_t i = 1; i < rep.oscillation.size(); ++i)
    CHECK(rep.oscillation[i] >= rep.oscillation[i - 1]); // nested sets
  const double closed = 0.2 * std::sin(2 * pi * 0.1);
  CHECK(rep.oscillation.back() <= closed + 1e-12);
  CHECK(rep.oscillation.back() > 0.8 * closed); // probes nearly attain the sup
}

TEST_CASE("measure_hoelder on closed forms") {
  const Kernel C = constant_kernel(2, 1.0, 0.5);
  CHECK(measure_hoelder(C, 1.0) == doctest::Approx(0.0));

  Kernel K = constant_kernel(1, 1.2, 0.5);
  K.eta = 0.8;
  K.eval = [](const Point& x, double, const Point&) {
    return 1.0 + 0.2 * std::sin(2 * pi * x[0]);
  };
  certify_kernel(K);
  // Derivative bound: |K(x)-K(y)| <= 0.4 pi |x-y|; wrapped probes can exceed
  // the mean-value bound slightly only through the |x-y| > 1/2 pairs, where
  // the quotient is even smaller.
  const double q = measure_hoelder(K, 1.0, 4000);
  CHECK(q <= 0.4 * pi + 1e-9);
  CHECK(q > 0.2 * pi);
}
