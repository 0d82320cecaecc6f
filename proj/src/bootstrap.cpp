#include "nlt/bootstrap.hpp"

#include <cmath>

namespace nlt {

BootstrapReport bootstrap_regularity(const Kernel& K, const GridFunction& u0,
                                     const GridFunction& g0, const RegularityOrders& start,
                                     const BootstrapOptions& opts) {
  const TorusGrid& grid = u0.grid;
  const int n = grid.n;
  const double s = K.s;

  BootstrapReport rep;
  GridFunction u = u0, g = g0;
  double t = start.s;   // currently certified order of u
  double p = start.p;
  double sigma_cum = 0;

  // Cover centres: plateau balls of radius 5R tile each axis.
  std::vector<Point> centres;
  {
    const int per_axis = std::max(1, static_cast<int>(std::ceil(1.0 / (5 * opts.R))));
    const int stride = std::max(1, grid.N / per_axis);
    Index3 j{0, 0, 0};
    const int c1 = (n >= 2) ? per_axis : 1;
    const int c2 = (n >= 3) ? per_axis : 1;
    for (int a = 0; a < per_axis; ++a)
      for (int b = 0; b < c1; ++b)
        for (int c = 0; c < c2; ++c) {
          j[0] = a * stride;
          j[1] = b * stride;
          j[2] = c * stride;
          centres.push_back(grid.point(j));
        }
  }

  const double ceiling = std::min(2 * s, 1.0);
  for (int r = 1; r <= opts.max_rungs; ++r) {
    const double lo = std::max(0.0, 2 * s - 1);
    const double hi = 2 * s - t;
    const double candidate = (hi > lo) ? std::min(2 * s - (lo + 0.25 * (hi - lo)), 0.999)
                                       : t;
    if (hi <= lo + 1e-9 || candidate - t < 0.01) {
      // Order ceiling at this p: differentiate if the kernel allows.
      if (!K.hoelder || sigma_cum + t >= opts.target_order) break;
      const double sigma = std::min(t - s, K.hoelder->alpha);
      if (sigma <= 1e-9) break;
      GridFunction u0m = u;
      u0m.values -= u0m.mean();
      const DifferentiatedEquation d = differentiate_equation(u0m, g, sigma);
      u = d.v;
      g = d.g;
      sigma_cum += sigma;
      t = s;
      continue;
    }
    const double t_tilde = lo + 0.25 * (hi - lo);
    const double q = p / (p - 1.0); // largest admissible exponent
    const double p_conj = q;
    if (std::min(t - n / q, t_tilde - n / q) < -n / p_conj - 1e-12) {
      if (rep.rungs.empty())
        throw LadderStalled("bootstrap_regularity: no admissible (t~, q) at the first rung");
      break;
    }

    RegularityOrders ord;
    ord.s = s;
    ord.s1 = 2 * s - t_tilde;
    ord.s2 = t_tilde;
    ord.t = t;
    ord.t_tilde = t_tilde;
    ord.p = p;
    ord.q = q;

    BootstrapRung rung;
    rung.rung = r;
    rung.sigma_cum = sigma_cum;
    rung.balls = static_cast<int>(centres.size());
    for (const Point& c : centres) {
      const LocalizationSpec loc = build_localization(grid, c, opts.R);
      const FixedPointResult res = fixed_point_solve(K, loc, u, g, ord, opts.fp);
      rung.worst_rate = std::max(rung.worst_rate, res.trace.asymptotic_rate);
    }

    const double s_next = std::min(2 * s - t_tilde, 0.999);
    rung.order = s_next;
    rung.p = q / (q - 1.0); // = p
    rung.seminorm = gagliardo_seminorm(u, s_next, rung.p);
    rep.rungs.push_back(rung);

    t = s_next;
    if (sigma_cum + t >= opts.target_order) {
      rep.reached_target = true;
      break;
    }
    if (t >= ceiling - 1e-3 && !K.hoelder) break;
  }

  rep.final_order = sigma_cum + t;
  rep.reached_target = rep.final_order >= opts.target_order - 1e-9;
  return rep;
}

} // namespace nlt
