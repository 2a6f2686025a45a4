#include "mlrelax/spectral.hpp"

#include <cmath>

#include "mlrelax/volterra.hpp"

namespace mlrelax {

std::complex<double> spectral_function(const PrabhakarKernel& kernel, double B,
                                       double omega) {
  if (!(omega > 0.0)) {
    throw InvalidParam("spectral_function: omega must be positive");
  }
  if (!(B > 0.0)) throw InvalidParam("spectral_function: B must be positive");
  const std::complex<double> iw(0.0, omega);
  const std::complex<double> psi =
      std::pow(iw, kernel.mu - kernel.alpha * kernel.nu) *
      std::pow(kernel.a + std::pow(iw, kernel.alpha), kernel.nu);
  return B / (B + psi);
}

ComplexSpectrum spectral_grid(const PrabhakarKernel& kernel, double B,
                              double omega_min, double omega_max,
                              int points_per_decade) {
  if (!(omega_min > 0.0) || !(omega_max > omega_min)) {
    throw InvalidParam("spectral_grid: need 0 < omega_min < omega_max");
  }
  if (points_per_decade < 1) {
    throw InvalidParam("spectral_grid: points_per_decade must be >= 1");
  }
  const double decades = std::log10(omega_max / omega_min);
  const int count = std::max(2, static_cast<int>(
                                    std::round(decades * points_per_decade)) +
                                    1);
  ComplexSpectrum s;
  s.omega_grid.reserve(static_cast<std::size_t>(count));
  s.values.reserve(static_cast<std::size_t>(count));
  const double step = decades / (count - 1);
  for (int i = 0; i < count; ++i) {
    const double w = omega_min * std::pow(10.0, step * i);
    s.omega_grid.push_back(w);
    s.values.push_back(spectral_function(kernel, B, w));
  }
  return s;
}

ComplexSpectrum spectral_grid_for_tau(const PrabhakarKernel& kernel, double B,
                                      double tau, int points_per_decade) {
  if (!(tau > 0.0)) throw InvalidParam("spectral_grid_for_tau: tau > 0");
  return spectral_grid(kernel, B, 1e-4 / tau, 1e4 / tau, points_per_decade);
}

namespace {

// Least-squares slope of y against x.
double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / den;
}

}  // namespace

JonscherFit jonscher_exponents(const ComplexSpectrum& spectrum, double tau) {
  if (!(tau > 0.0)) throw InvalidParam("jonscher_exponents: tau must be > 0");
  if (spectrum.omega_grid.size() != spectrum.values.size() ||
      spectrum.omega_grid.size() < 4) {
    throw InvalidParam("jonscher_exponents: malformed spectrum");
  }
  const double w_lo = spectrum.omega_grid.front();
  const double w_hi = spectrum.omega_grid.back();
  const double w_c = 1.0 / tau;
  if (w_lo > w_c / 100.0 || w_hi < w_c * 100.0) {
    throw GridTooNarrow(
        "jonscher_exponents: grid must span two decades on each side of "
        "1/tau");
  }

  // Outer decade of each regime: [w_lo, 10 w_lo] and [w_hi/10, w_hi].
  std::vector<double> lx, ly, hx, hy;
  for (std::size_t i = 0; i < spectrum.omega_grid.size(); ++i) {
    const double w = spectrum.omega_grid[i];
    if (w <= 10.0 * w_lo) {
      const double dev = std::abs(1.0 - spectrum.values[i]);
      if (dev > 0.0) {
        lx.push_back(std::log(w));
        ly.push_back(std::log(dev));
      }
    }
    if (w >= w_hi / 10.0) {
      const double mag = std::abs(spectrum.values[i]);
      if (mag > 0.0) {
        hx.push_back(std::log(w));
        hy.push_back(std::log(mag));
      }
    }
  }
  if (lx.size() < 2 || hx.size() < 2) {
    throw GridTooNarrow("jonscher_exponents: too few points in the fit "
                        "windows");
  }
  JonscherFit fit;
  fit.m = slope_fit(lx, ly);
  fit.one_minus_n = -slope_fit(hx, hy);
  return fit;
}

std::complex<double> laplace_exponent(const PrabhakarKernel& kernel,
                                      std::complex<double> s) {
  if (!(s.real() > 0.0)) {
    throw InvalidParam("laplace_exponent: Re s must be positive");
  }
  return s * kernel.image(s);
}

double kappa_kernel(const PrabhakarKernel& kernel, double t) {
  return kappa_memory(kernel, t);
}

}  // namespace mlrelax
