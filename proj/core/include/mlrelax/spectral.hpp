#pragma once

#include <complex>
#include <vector>

#include "mlrelax/laplace.hpp"

namespace mlrelax {

struct ComplexSpectrum {
  std::vector<double> omega_grid;
  std::vector<std::complex<double>> values;
};

/// Normalized spectral function of the relaxation response,
/// phi^(i omega) = B / (B + (i omega)^{mu - alpha nu} [a + (i omega)^alpha]^nu)
///              = [1 + i omega k^(i omega)/B]^{-1},
/// principal branches throughout.
std::complex<double> spectral_function(const PrabhakarKernel& kernel, double B,
                                       double omega);

/// Spectrum sampled on a log grid (points_per_decade over
/// [omega_min, omega_max]).
ComplexSpectrum spectral_grid(const PrabhakarKernel& kernel, double B,
                              double omega_min, double omega_max,
                              int points_per_decade = 20);

/// Default window used by the Jonscher fit: [1e-4/tau, 1e4/tau].
ComplexSpectrum spectral_grid_for_tau(const PrabhakarKernel& kernel, double B,
                                      double tau, int points_per_decade = 20);

struct JonscherFit {
  double m;            // low-frequency exponent of |1 - phi^|
  double one_minus_n;  // high-frequency exponent of |phi^| with flipped sign
};

/// Log-log slope fits over the outer decade of each regime, excluding the
/// central decade around 1/tau. The grid must span at least two decades on
/// each side of 1/tau (GridTooNarrow otherwise). For the Prabhakar kernel
/// the expected values are 1-n = mu and m = mu - alpha*nu.
JonscherFit jonscher_exponents(const ComplexSpectrum& spectrum, double tau);

/// Laplace (Levy) exponent Psi(s) = s k^(s) = s^{mu - alpha nu}(s^alpha + a)^nu.
std::complex<double> laplace_exponent(const PrabhakarKernel& kernel,
                                      std::complex<double> s);

/// Memory kernel of the dual pair, kappa(t) = L^{-1}[(s k^(s))^{-1}; t];
/// t^{mu-1}/Gamma(mu) at a = 0.
double kappa_kernel(const PrabhakarKernel& kernel, double t);

}  // namespace mlrelax
