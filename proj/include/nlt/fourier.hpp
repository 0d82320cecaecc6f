#pragma once

#include "nlt/grid_function.hpp"

namespace nlt {

/// Forward transform, normalized so that dft(1) has coeff(0) = 1 and the
/// coefficients are taken with respect to the centered coordinates
/// x_j = -1/2 + j h (i.e. true Fourier coefficients of the sampled field).
SpectralField dft(const GridFunction& f);

/// Inverse transform; idft(dft(f)) == f to machine precision.
GridFunction idft(const SpectralField& F);

/// Fractional Laplacian of order sigma in (-2, 2]: multiplies mode k by
/// |k|^sigma, zeroes the k = 0 mode. For sigma < 0 the input must have
/// (numerically) zero mean; throws NegativeOrderNonzeroMean otherwise.
GridFunction frac_laplacian(const GridFunction& f, double sigma);

/// Same multiplier acting on coefficients.
SpectralField frac_laplacian(const SpectralField& F, double sigma);

/// Spectral gradient at a point (exact for bandlimited fields).
Point spectral_gradient(const GridFunction& f, const Point& x);

} // namespace nlt
