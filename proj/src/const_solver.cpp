#include "nlt/const_solver.hpp"

#include <cmath>

#include "nlt/fourier.hpp"

namespace nlt {

double weak_form(const Symbol& sym, const GridFunction& u, const GridFunction& phi) {
  require(u.grid == sym.grid && phi.grid == sym.grid, "weak_form: grid mismatch");
  const SpectralField U = dft(u), P = dft(phi);
  double acc = 0;
  for (std::int64_t f = 0; f < sym.values.size(); ++f)
    acc += 2.0 * sym.values[f] * (U.coeffs[f] * std::conj(P.coeffs[f])).real();
  return acc;
}

ConstSolveResult solve_const(const Symbol& sym, const GridFunction& g) {
  require(g.grid == sym.grid, "solve_const: grid mismatch");
  require(sym.complete(), "solve_const: symbol does not cover the full lattice");

  const double floor = 1e-12 * std::max(1.0, sym.values.maxCoeff());
  for (std::int64_t f = 1; f < sym.values.size(); ++f)
    if (sym.values[f] <= floor)
      throw SingularSymbol("solve_const: vanishing symbol off the zero mode");

  SpectralField G = dft(g);
  ConstSolveResult out;
  out.removed_mean = G.coeffs[0].real();
  out.nonzero_mean = std::abs(out.removed_mean) >
                     1e-12 * (1.0 + g.values.abs().maxCoeff());
  G.coeffs[0] = Complex(0, 0);
  for (std::int64_t f = 1; f < G.coeffs.size(); ++f)
    G.coeffs[f] /= 2.0 * sym.values[f];
  out.u = idft(G);
  return out;
}

DifferentiatedEquation differentiate_equation(const GridFunction& u,
                                              const GridFunction& g, double sigma) {
  DifferentiatedEquation out;
  out.v = frac_laplacian(u, sigma);
  // The dual action g[laps^sigma phi] pairs as the density laps^sigma g.
  GridFunction g0 = g;
  const double mean = g0.mean();
  g0.values -= mean;
  out.g = frac_laplacian(g0, sigma);
  return out;
}

SolveReport measure_estimate(const Symbol& sym, const Symbol* refined,
                             const RegularityOrders& orders, int random_rhs,
                             int dual_probes, std::uint64_t seed) {
  orders.validate(sym.grid.n, false);
  SolveReport rep;

  const auto sweep = [&](const Symbol& S, std::vector<EstimateRow>* rows) {
    const TorusGrid& grid = S.grid;
    const CounterRng rng(seed);
    std::vector<std::pair<std::string, GridFunction>> family;
    for (int k = 1; k <= 3; ++k)
      family.emplace_back("mode_" + std::to_string(k), cosine_mode(grid, Index3{k, 0, 0}));
    const int band = std::min(grid.N / 2 - 1, 6);
    for (int r = 0; r < random_rhs; ++r)
      family.emplace_back("rand_" + std::to_string(r),
                          random_bandlimited(grid, band, rng.fork(r)));

    double worstC = 0;
    for (auto& [name, g] : family) {
      const ConstSolveResult sol = solve_const(S, g);
      EstimateRow row;
      row.rhs_name = name;
      row.dual_bound = dual_norm_bound(g, orders.s2, orders.p, dual_probes, seed);
      row.u_l2 = lp_norm(sol.u, 2);
      row.seminorm_s1p = gagliardo_seminorm(sol.u, orders.s1, orders.p);
      row.ratio = (row.dual_bound + row.u_l2 > 0)
                      ? row.seminorm_s1p / (row.dual_bound + row.u_l2)
                      : 0.0;
      if (rows) rows->push_back(row);
      worstC = std::max(worstC, row.ratio);
    }
    return worstC;
  };

  rep.measured_C = sweep(sym, &rep.rows);

  // Weak-form defect of the last solve against probe modes.
  {
    const GridFunction g = cosine_mode(sym.grid, Index3{1, 0, 0});
    const ConstSolveResult sol = solve_const(sym, g);
    const double hn = std::pow(sym.grid.spacing(), sym.grid.n);
    double worst = 0;
    for (int k = 1; k <= std::min(4, sym.grid.N / 2 - 1); ++k) {
      for (const GridFunction& phi :
           {cosine_mode(sym.grid, Index3{k, 0, 0}), sine_mode(sym.grid, Index3{k, 0, 0})}) {
        const double lhs = weak_form(sym, sol.u, phi);
        const double rhs = (g.values * phi.values).sum() * hn;
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }
    }
    rep.residual = worst;

    // Measured norm ladder of the solution at the orders in play.
    const auto push = [&](double order, double p) {
      if (order <= 0 || order >= 1) {
        rep.ladder.push_back({order, p, bessel_seminorm(sol.u, order, p)});
      } else {
        rep.ladder.push_back({order, p, gagliardo_seminorm(sol.u, order, p)});
      }
    };
    push(orders.s, 2);
    push(orders.s1, orders.p);
    push(2 * orders.s, 2);
  }

  if (refined) {
    rep.refined_C = sweep(*refined, nullptr);
    rep.refinement_drift =
        std::abs(rep.refined_C - rep.measured_C) / std::max(rep.measured_C, 1e-300);
  }
  return rep;
}

} // namespace nlt
