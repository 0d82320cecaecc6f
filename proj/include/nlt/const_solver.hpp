#pragma once

#include <vector>

#include "nlt/norms.hpp"
#include "nlt/symbol.hpp"

namespace nlt {

/// The quadratic form B(u, phi) of a convolution kernel, evaluated through
/// its symbol: B(u, phi) = sum_k 2 m(k) uhat(k) conj(phihat(k)).
/// B(u, u) >= 0, B is symmetric, and constants are annihilated.
double weak_form(const Symbol& sym, const GridFunction& u, const GridFunction& phi);

struct ConstSolveResult {
  GridFunction u;
  double removed_mean = 0;  ///< k = 0 content of the right side, reported
  bool nonzero_mean = false;
};

/// Solves B(u, .) = <g, .> on mean-zero fields: uhat(k) = ghat(k) / (2 m(k)).
/// Requires a complete symbol with m(k) > 0 off the zero mode.
ConstSolveResult solve_const(const Symbol& sym, const GridFunction& g);

/// Spectral differentiation of the equation: v = laps^sigma u solves the same
/// convolution equation with right side laps^sigma g.
struct DifferentiatedEquation {
  GridFunction v;
  GridFunction g;
};
DifferentiatedEquation differentiate_equation(const GridFunction& u,
                                              const GridFunction& g, double sigma);

struct LadderEntry {
  double order = 0;
  double p = 2;
  double value = 0;
};

struct EstimateRow {
  std::string rhs_name;
  double dual_bound = 0;   ///< probe lower bound of the dual norm of g
  double u_l2 = 0;
  double seminorm_s1p = 0; ///< [u]_{W^{s1,p}}
  double ratio = 0;        ///< seminorm / (dual_bound + u_l2)
};

struct SolveReport {
  double residual = 0;            ///< sup over probe modes of the weak-form defect
  std::vector<LadderEntry> ladder;
  std::vector<EstimateRow> rows;
  double measured_C = 0;          ///< max ratio over the rhs family
  double refined_C = 0;           ///< same at the refined grid (0 if not run)
  double refinement_drift = 0;    ///< |refined_C - measured_C| / measured_C
  double kernel_bound = 0;        ///< Lambda of the kernel, reported separately
};

/// Measures the constant C in [u]_{W^{s1,p}} <= C * (dual bound of g) + ||u||_L2
/// over a deterministic rhs family (single modes plus seeded bandlimited
/// fields normalized by their dual-norm bound). When `refined` is non-null it
/// repeats the sweep there and reports the drift.
SolveReport measure_estimate(const Symbol& sym, const Symbol* refined,
                             const RegularityOrders& orders, int random_rhs = 6,
                             int dual_probes = 32, std::uint64_t seed = 0x657374);

} // namespace nlt
