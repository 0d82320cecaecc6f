#pragma once

#include "nlt/const_solver.hpp"
#include "nlt/frozen_forms.hpp"

namespace nlt {

struct IterationStep {
  int k = 0;
  double v_norm = 0; ///< [v_k] in W^{2s - t~, q'} (physical scale)
  double w_norm = 0; ///< [v_k - v_{k-1}]
  double rho = 0;    ///< w_k / w_{k-1}
};

struct IterationTrace {
  std::vector<IterationStep> steps;
  bool converged = false;
  double asymptotic_rate = 0; ///< median of the late contraction ratios
  double oscillation = 0;     ///< measured sup |E_K| over the form ball
  double final_residual = 0;  ///< decomposition defect of the limit on probes
  double plateau_mismatch = 0; ///< max |v - (eta u - mean)| on the plateau
};

struct FixedPointOptions {
  double tol = 1e-8;
  int max_iter = 80;
  double rho_max = 0.95;  ///< required late-stage contraction
  int lattice_window = 30;
};

struct FixedPointResult {
  Array v_sub;           ///< mean-zero solution on the subgrid
  GridFunction v_global; ///< transplanted to the global grid (0 off the cell)
  IterationTrace trace;
};

/// Iterative minimization for the localized equation: starting from v_0 = 0,
/// v_{k+1} solves the frozen convolution problem on the cell with right side
/// g[eta psi~] + H(v_k, psi) + G(u, psi), inverted exactly through the
/// grid-consistent subcell symbol. Throws NoContraction when three
/// consecutive ratios reach 1, MaxIterReached past opts.max_iter.
FixedPointResult fixed_point_solve(const FrozenForms& forms, const GridFunction& u_ambient,
                                   const GridFunction& g, const RegularityOrders& orders,
                                   const FixedPointOptions& opts = {});

/// Convenience overload assembling the forms in place.
FixedPointResult fixed_point_solve(const Kernel& K, const LocalizationSpec& loc,
                                   const GridFunction& u_ambient, const GridFunction& g,
                                   const RegularityOrders& orders,
                                   const FixedPointOptions& opts = {});

/// The grid-consistent symbol of the subcell convolution form, scaled so that
/// B_mu(v, psi) = sum_k 2 m(k) vhat(k) conj(psihat(k)) in unit subgrid
/// coordinates with physical pairing.
Symbol subcell_symbol(const FrozenForms& forms);

} // namespace nlt
