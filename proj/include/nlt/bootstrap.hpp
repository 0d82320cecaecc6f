#pragma once

#include "nlt/fixed_point.hpp"

namespace nlt {

struct BootstrapRung {
  int rung = 0;
  double order = 0;       ///< measured Sobolev order at this rung
  double p = 2;
  double sigma_cum = 0;   ///< accumulated spectral differentiation
  double seminorm = 0;    ///< [u]_{W^{order, p}} (after differentiation)
  double worst_rate = 0;  ///< largest contraction rate across cover balls
  int balls = 0;
};

struct BootstrapReport {
  std::vector<BootstrapRung> rungs;
  bool reached_target = false;
  double final_order = 0; ///< sigma_cum + last rung order
};

struct BootstrapOptions {
  double R = 1.0 / 30.0;
  int max_rungs = 12;
  double target_order = 1.0; ///< total order aimed for (sigma_cum + s_i)
  FixedPointOptions fp;
};

/// Ball-cover ladder driver: at each rung, runs the fixed-point solver on a
/// cover of plateau balls at the current orders, measures the seminorm of u
/// at the improved order 2s - t~, and repeats; above the order ceiling
/// min(2s, 1) it spectrally differentiates the equation (Hoelder kernels
/// only) and keeps going. Throws LadderStalled when the first rung is
/// already inadmissible.
BootstrapReport bootstrap_regularity(const Kernel& K, const GridFunction& u0,
                                     const GridFunction& g0, const RegularityOrders& start,
                                     const BootstrapOptions& opts = {});

} // namespace nlt
