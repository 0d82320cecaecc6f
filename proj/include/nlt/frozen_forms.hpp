#pragma once

#include "nlt/kernel.hpp"
#include "nlt/localization.hpp"
#include "nlt/periodize.hpp"

namespace nlt {

/// Applies the position-dependent kernel form
///   B_K(u, phi) = h^{2n} sum_{x != y} K(x, |x-y|, dir) dist^{-n-2s}
///                 (u(x) - u(y)) (phi(x) - phi(y))
/// over the whole torus with wrapped distances.
double kernel_form(const Kernel& K, const GridFunction& u, const GridFunction& phi);

/// Riesz density of the kernel form: B_K(u, phi) = h^n sum phi * density.
GridFunction kernel_form_density(const Kernel& K, const GridFunction& u);

/// The freezing decomposition at a localization: the subcell convolution form
/// B_mu on v = eta u splits as g[eta psi~] + H(v, psi) + sum_i G_i(u, psi),
/// exactly at the discrete level (all forms share one double-sum rule).
/// psi lives on the subgrid; psi~ = eta~ (psi_ext - mean_cell(psi)).
class FrozenForms {
public:
  FrozenForms(const Kernel& K, const LocalizationSpec& loc, int lattice_window = 30);

  const LocalizationSpec& loc() const { return loc_; }
  const PeriodizedKernel& mu() const { return mu_; }
  const Kernel& kernel() const { return K_; }

  /// sup |E_K| over probed pairs in the form ball (the oscillation that
  /// drives the contraction).
  double oscillation() const { return oscillation_; }

  /// E_K(x, y) = K(x0,0,dir) - K(x,|x-y|,dir), wrapped representative.
  double deviation(std::int64_t gx, std::int64_t gy) const;

  /// Subcell convolution form of two subgrid fields (physical pairing).
  double B_mu(const Array& v, const Array& psi) const;

  /// The frozen-deviation form over the form ball (both slots subgrid fields).
  double H(const Array& v, const Array& psi) const;

  /// G(u, psi) = sum of the five pieces; u is a global field.
  double G(const GridFunction& u, const Array& psi) const;
  double G_piece(int i, const GridFunction& u, const Array& psi) const; // 1..5

  /// g[eta psi~] for a global density g.
  double g_eta(const GridFunction& g, const Array& psi) const;

  /// Density representations on the subgrid (mean-free part):
  /// F[psi] = h^n sum_j D_j psi_j  + (const) * mean(psi).
  Array H_density(const Array& v) const;
  Array G_density(const GridFunction& u) const;
  Array g_eta_density(const GridFunction& g) const;

  /// Restriction of a global field to the subgrid (row-major local order).
  Array restrict_to_cell(const GridFunction& u) const;
  /// v = eta * u restricted to the subgrid.
  Array cutoff_field(const GridFunction& u) const;

private:
  Kernel K_;
  LocalizationSpec loc_;
  PeriodizedKernel mu_;
  double s_;
  double hn_, h2n_;
  double oscillation_ = 0;
  std::int64_t m_ = 0;

  // Difference-indexed tables (the weight, the frozen kernel and mu depend
  // on x - y only); the position-dependent kernel is cached pairwise when it
  // fits, else evaluated on demand.
  std::vector<double> wdiff_;    // dist^{-n-2s} by global difference index
  std::vector<double> distdiff_; // wrapped distance by difference index
  std::vector<double> K0diff_;   // K(x0, 0, dir) by difference index
  std::vector<double> mudiff_;   // mu_L by subgrid difference index
  std::vector<double> Kxy_;      // pairwise K(x, |x-y|, dir), optional cache

  std::int64_t diff_index(std::int64_t gx, std::int64_t gy) const;
  double K_at(std::int64_t gx, std::int64_t gy, std::int64_t df) const;

  // psi~ value at a global point: eta~ * (psi_ext - c).
  double psi_tilde(const Array& psi, double c, std::int64_t gf) const;
  double cell_mean(const Array& psi) const;
};

} // namespace nlt
