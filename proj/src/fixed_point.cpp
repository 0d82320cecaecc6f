#include "nlt/fixed_point.hpp"

#include <algorithm>
#include <cmath>

#include "nlt/fourier.hpp"

namespace nlt {

Symbol subcell_symbol(const FrozenForms& forms) {
  const LocalizationSpec& loc = forms.loc();
  const TorusGrid sub = loc.subgrid();
  // Unit-period periodization of the same frozen kernel and window; the
  // subcell symbol is its grid symbol scaled by L^{n - 2s}.
  const PeriodizedKernel unit =
      periodize(forms.kernel(), loc.x0, forms.kernel().s, forms.mu().M, 1.0);
  Symbol sym = grid_symbol(unit, sub);
  sym.values *= std::pow(loc.L, loc.grid.n - 2.0 * forms.kernel().s);
  return sym;
}

FixedPointResult fixed_point_solve(const FrozenForms& forms, const GridFunction& u_ambient,
                                   const GridFunction& g, const RegularityOrders& orders,
                                   const FixedPointOptions& opts) {
  const LocalizationSpec& loc = forms.loc();
  const TorusGrid sub = loc.subgrid();
  const int n = loc.grid.n;
  orders.validate(n, true);

  const Symbol sym = subcell_symbol(forms);
  const double Ln = std::pow(loc.L, n);

  const Array g_dens = forms.g_eta_density(g);
  const Array G_dens = forms.G_density(u_ambient);

  const double w_order = 2 * orders.s - orders.t_tilde;
  const double w_p = orders.q_conj();
  // Physical seminorm = unit-coordinate seminorm times this factor.
  const double scale_norm = std::pow(loc.L, n / w_p - w_order);

  const auto seminorm = [&](const Array& f) {
    GridFunction gf(sub, f);
    return scale_norm * gagliardo_seminorm(gf, w_order, w_p);
  };

  FixedPointResult out;
  out.trace.oscillation = forms.oscillation();
  Array v = Array::Zero(sub.size());

  double prev_w = -1;
  int bad_streak = 0, good_streak = 0;
  std::vector<double> late_rhos;

  for (int k = 1; k <= opts.max_iter; ++k) {
    const Array rhs = (g_dens + G_dens + forms.H_density(v)) * Ln;
    const ConstSolveResult sol = solve_const(sym, GridFunction(sub, rhs));
    const Array v_next = sol.u.values;

    IterationStep step;
    step.k = k;
    const Array w = v_next - v;
    step.w_norm = seminorm(w);
    step.v_norm = seminorm(v_next);
    step.rho = (prev_w > 0) ? step.w_norm / prev_w : 0.0;
    out.trace.steps.push_back(step);

    v = v_next;

    const bool at_tol = step.w_norm < opts.tol * (1.0 + step.v_norm);
    if (at_tol && (step.w_norm == 0.0 || good_streak >= 3 || k >= 3)) {
      out.trace.converged = true;
      break;
    }
    // Streaks are only meaningful above the tolerance floor, where the
    // ratios are not yet dominated by roundoff.
    if (prev_w > 0 && !at_tol) {
      if (step.rho >= 1.0) {
        ++bad_streak;
        good_streak = 0;
      } else {
        bad_streak = 0;
        if (step.rho <= opts.rho_max) ++good_streak;
      }
      if (bad_streak >= 3)
        throw NoContraction(
            "fixed_point_solve: no contraction for 3 consecutive steps "
            "(kernel oscillation too large at this scale; shrink R)");
      if (step.w_norm > opts.tol * 3.0 && step.rho > 0) late_rhos.push_back(step.rho);
    }
    prev_w = std::max(step.w_norm, 1e-300);
  }
  if (!out.trace.converged)
    throw MaxIterReached("fixed_point_solve: iteration limit reached");

  if (!late_rhos.empty()) {
    std::vector<double> tail(late_rhos.end() - std::min<std::size_t>(5, late_rhos.size()),
                             late_rhos.end());
    std::sort(tail.begin(), tail.end());
    out.trace.asymptotic_rate = tail[tail.size() / 2];
  }

  // Decomposition defect of the limit against probe fields.
  {
    const CounterRng rng(0x66697870);
    double worst = 0;
    for (int t = 0; t < 4; ++t) {
      GridFunction psi_gf = random_bandlimited(sub, std::min(4, sub.N / 2 - 1), rng.fork(t));
      const Array psi = psi_gf.values;
      const double lhs = forms.B_mu(v, psi);
      const double rhs = forms.g_eta(g, psi) + forms.H(v, psi) + forms.G(u_ambient, psi);
      const double scale = std::abs(lhs) + std::abs(rhs) + 1.0;
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    out.trace.final_residual = worst;
  }

  // Plateau comparison against the cutoff field (shift-normalized).
  {
    const Array vu = forms.cutoff_field(u_ambient);
    const Array centered = vu - vu.mean();
    double mis = 0;
    for (std::int64_t l = 0; l < sub.size(); ++l) {
      const std::int64_t gf = loc.cell_points[l];
      if (loc.in_plateau[gf])
        mis = std::max(mis, std::abs(v[l] - centered[l]));
    }
    out.trace.plateau_mismatch = mis;
  }

  out.v_sub = v;
  out.v_global = GridFunction(loc.grid);
  for (std::int64_t l = 0; l < sub.size(); ++l)
    out.v_global.values[loc.cell_points[l]] = v[l];
  out.trace.converged = true;
  return out;
}

FixedPointResult fixed_point_solve(const Kernel& K, const LocalizationSpec& loc,
                                   const GridFunction& u_ambient, const GridFunction& g,
                                   const RegularityOrders& orders,
                                   const FixedPointOptions& opts) {
  const FrozenForms forms(K, loc, opts.lattice_window);
  return fixed_point_solve(forms, u_ambient, g, orders, opts);
}

} // namespace nlt
