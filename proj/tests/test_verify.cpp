#include <doctest.h>

#include <cmath>

#include "nlt/const_solver.hpp"
#include "nlt/frozen_forms.hpp"
#include "nlt/localization.hpp"
#include "nlt/norms.hpp"
#include "nlt/verify.hpp"

using namespace nlt;

namespace {
constexpr double pi = 3.14159265358979323846;

// Nonnegative discrete solution pair (v, f) with L_K v = f exactly.
std::pair<GridFunction, GridFunction> solution_pair(const TorusGrid& g, const Kernel& K,
                                                    std::uint64_t seed) {
  GridFunction v = random_bandlimited(g, 4, CounterRng(seed));
  v.values *= 0.5;
  v.values += 1.0 + v.values.abs().maxCoeff(); // strictly positive
  const GridFunction f = kernel_form_density(K, v);
  return {v, f};
}

// The support must sit compactly inside the working ball (C_c-style cutoff).
GridFunction cutoff_bump(const TorusGrid& g, const Point& x0, double plateau,
                         double support) {
  GridFunction phi(g);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    const double d = torus_dist(g.point(i), x0, g.n);
    phi.values[i] =
        (d <= plateau) ? 1.0 : smooth_step((support - d) / (support - plateau));
  }
  return phi;
}
} // namespace

TEST_CASE("coercivity form: constant kernel has ratio exactly one") {
  const TorusGrid g(1, 32);
  const Kernel K = constant_kernel(1, 1.0, 0.5);
  std::vector<GridFunction> probes;
  for (int t = 0; t < 4; ++t) probes.push_back(random_bandlimited(g, 6, CounterRng(t)));
  const InequalityReport rep = verify_coercivity_form(K, probes);
  CHECK(rep.pass);
  CHECK(rep.implied_constant == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("coercivity form: constant probe gives zero on both sides") {
  const TorusGrid g(1, 16);
  const Kernel K = constant_kernel(1, 1.0, 0.5);
  GridFunction c(g);
  c.values.setConstant(4.0);
  const InequalityReport rep = verify_coercivity_form(K, {c});
  CHECK(rep.lhs == doctest::Approx(0.0));
  CHECK(rep.rhs_core == doctest::Approx(0.0));
}

TEST_CASE("coercivity form: cone kernel ratio consistent with the symbol bound") {
  const TorusGrid g(2, 8);
  const Cone cap(2, Point::UnitX(), pi / 3, true);
  const Kernel K = cone_indicator_kernel(cap, 1.0, 1.0, 0.5);
  std::vector<GridFunction> probes;
  for (int t = 0; t < 3; ++t) probes.push_back(random_bandlimited(g, 3, CounterRng(10 + t)));
  const InequalityReport rep = verify_coercivity_form(K, probes);
  CHECK(rep.pass);
  CHECK(rep.implied_constant >= 1.0); // the weighted form is smaller
  CHECK(rep.implied_constant < 1e3);  // and not degenerate
}

TEST_CASE("caccioppoli: trivial and solution-suite cases") {
  const TorusGrid g(1, 32);
  const Kernel K = constant_kernel(1, 1.0, 0.4);
  const Point x0 = Point::Zero();
  const double R = 0.25;
  const GridFunction phi = cutoff_bump(g, x0, R / 2, 0.9 * R);

  SUBCASE("zero field: both sides vanish") {
    GridFunction z(g), f(g);
    const InequalityReport rep = verify_caccioppoli(z, f, K, x0, R, phi);
    CHECK(rep.lhs == doctest::Approx(0.0));
    CHECK(rep.pass);
  }
  SUBCASE("solution suite: finite implied constant, stable under refinement") {
    double c32 = 0, c64 = 0;
    for (int N : {32, 64}) {
      const TorusGrid gg(1, N);
      const Kernel KK = constant_kernel(1, 1.0, 0.4);
      const auto [v, f] = solution_pair(gg, KK, 5);
      const GridFunction cut = cutoff_bump(gg, x0, R / 2, 0.9 * R);
      const InequalityReport rep = verify_caccioppoli(v, f, KK, x0, R, cut);
      CHECK(rep.pass);
      CHECK(rep.implied_constant > 0);
      (N == 32 ? c32 : c64) = rep.implied_constant;
    }
    CHECK(std::abs(c64 - c32) / c32 < 0.25);
  }
  SUBCASE("doubling the cutoff gradient scales the gradient term by four") {
    const auto [v, f] = solution_pair(g, K, 7);
    const InequalityReport r1 = verify_caccioppoli(v, f, K, x0, R, phi);
    GridFunction phi2 = phi;
    phi2.values *= 2.0; // |grad|^2 and |phi|, |v phi| scale accordingly
    const InequalityReport r2 = verify_caccioppoli(v, f, K, x0, R, phi2);
    CHECK(r2.terms[0].second == doctest::Approx(4.0 * r1.terms[0].second).epsilon(1e-10));
  }
  SUBCASE("non-subsolutions are rejected") {
    const auto [v, f] = solution_pair(g, K, 9);
    GridFunction bad = f;
    bad.values -= 10.0 * (1.0 + f.values.abs().maxCoeff()); // L v > f everywhere
    CHECK_THROWS_AS(verify_caccioppoli(v, bad, K, x0, R, phi), NotSubsolution);
  }
}

TEST_CASE("caccioppoli scale covariance: lhs and the L2 term are quadratic") {
  const TorusGrid g(1, 32);
  const Kernel K = constant_kernel(1, 1.0, 0.4);
  const Point x0 = Point::Zero();
  const double R = 0.25;
  const GridFunction phi = cutoff_bump(g, x0, R / 2, 0.9 * R);
  auto [v, f] = solution_pair(g, K, 11);
  const InequalityReport r1 = verify_caccioppoli(v, f, K, x0, R, phi);
  GridFunction v2 = v;
  v2.values *= 3.0;
  GridFunction f2 = f;
  f2.values *= 3.0; // keeps the subsolution identity L(3v) = 3f
  const InequalityReport r2 = verify_caccioppoli(v2, f2, K, x0, R, phi);
  CHECK(r2.lhs == doctest::Approx(9.0 * r1.lhs).epsilon(1e-10));
  CHECK(r2.terms[0].second == doctest::Approx(9.0 * r1.terms[0].second).epsilon(1e-10));
}

TEST_CASE("local boundedness report") {
  const TorusGrid g(1, 32);
  const Kernel K = constant_kernel(1, 1.0, 0.5);
  const Point x0 = Point::Zero();
  SUBCASE("zero field") {
    GridFunction z(g), f(g);
    const InequalityReport rep = verify_linfty_bound(z, f, K, x0, 0.1);
    CHECK(rep.lhs == doctest::Approx(0.0));
    CHECK(rep.pass);
  }
  SUBCASE("constant field gives an O(1) constant") {
    GridFunction c(g), f(g);
    c.values.setConstant(2.0);
    const InequalityReport rep = verify_linfty_bound(c, f, K, x0, 0.1);
    CHECK(rep.pass);
    CHECK(rep.implied_constant > 0.01);
    CHECK(rep.implied_constant < 100.0);
  }
  SUBCASE("single-mode solution: finite constant, stable under refinement") {
    double c32 = 0, c64 = 0;
    for (int N : {32, 64}) {
      const TorusGrid gg(1, N);
      const GridFunction u = cosine_mode(gg, Index3{1, 0, 0});
      const GridFunction f = kernel_form_density(K, u);
      const InequalityReport rep = verify_linfty_bound(u, f, K, x0, 0.1);
      CHECK(rep.pass);
      (N == 32 ? c32 : c64) = rep.implied_constant;
    }
    CHECK(std::abs(c64 - c32) / c32 < 0.25);
  }
}

TEST_CASE("log lemma: constants, decay in d, and refinement stability") {
  const TorusGrid g(1, 32);
  const Kernel K = constant_kernel(1, 1.0, 0.4);
  const Point x0 = Point::Zero();
  const double r = 0.1, R = 0.25;

  SUBCASE("constant positive field has zero log energy") {
    GridFunction c(g), f(g);
    c.values.setConstant(3.0);
    const InequalityReport rep = verify_log_lemma(c, f, K, x0, r, R, 1.0);
    CHECK(rep.lhs == doctest::Approx(0.0));
  }
  SUBCASE("lhs decays like d^-2 for large d") {
    const auto [v, f] = solution_pair(g, K, 13);
    const InequalityReport r1 = verify_log_lemma(v, f, K, x0, r, R, 100.0);
    const InequalityReport r2 = verify_log_lemma(v, f, K, x0, r, R, 200.0);
    // log((u+d)/(v+d)) ~ (u-v)/d: quadrupling ratio when doubling d.
    CHECK(r1.lhs / r2.lhs == doctest::Approx(4.0).epsilon(0.05));
  }
  SUBCASE("solution suite: stable implied constant") {
    double c32 = 0, c64 = 0;
    for (int N : {32, 64}) {
      const TorusGrid gg(1, N);
      const Kernel KK = constant_kernel(1, 1.0, 0.4);
      const auto [v, f] = solution_pair(gg, KK, 15);
      const InequalityReport rep = verify_log_lemma(v, f, KK, x0, r, R, 0.5);
      CHECK(rep.pass);
      (N == 32 ? c32 : c64) = rep.implied_constant;
    }
    CHECK(std::abs(c64 - c32) / c32 < 0.25);
  }
}

TEST_CASE("log truncation construction") {
  const TorusGrid g(1, 16);
  GridFunction u(g);
  u.values.setConstant(0.5);
  CHECK_THROWS_AS(log_truncation(u, 1.0, 0.1, 1.0), BadTruncation);
  const GridFunction w = log_truncation(u, 1.0, 0.1, 2.0);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    CHECK(w.values[i] >= 0.0);
    CHECK(w.values[i] <= std::log(2.0) + 1e-15);
  }
}

TEST_CASE("poincare: spectral gap oracle on a full-torus ball") {
  const TorusGrid g(1, 32);
  const Kernel K = constant_kernel(1, 1.0, 0.5);
  const GridFunction w = cosine_mode(g, Index3{2, 0, 0});
  const double r = 0.5; // wraps the whole torus
  const InequalityReport rep = verify_poincare(w, K, Point::Zero(), r);
  CHECK(rep.pass);
  // Single mode: energy = c_N(2)|what|^2 summed over +-2, lhs = |w - 0|^2.
  const double cn = gagliardo_mode_factor(g, 0.5, Index3{2, 0, 0});
  const double expect = std::pow(r, 2 * 0.5 - 1) * cn * 0.5 / 0.5;
  CHECK(rep.implied_constant == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("poincare on a genuine sub-ball is finite and stable") {
  double c32 = 0, c64 = 0;
  for (int N : {32, 64}) {
    const TorusGrid g(1, N);
    const Kernel K = constant_kernel(1, 1.0, 0.5);
    const GridFunction u = random_bandlimited(g, 4, CounterRng(17));
    const GridFunction w = log_truncation([&] {
      GridFunction shifted = u;
      shifted.values -= u.values.minCoeff() - 1.0; // min exactly 1
      return shifted;
    }(), 1.0 + 0.5 * (u.values.maxCoeff() - u.values.minCoeff()), 0.5, 2.0);
    const InequalityReport rep = verify_poincare(w, K, Point::Zero(), 0.2);
    CHECK(rep.pass);
    (N == 32 ? c32 : c64) = rep.implied_constant;
  }
  CHECK(std::abs(c64 - c32) / c32 < 0.25);
}
