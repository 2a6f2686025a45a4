#pragma once

#include <complex>

#include "mlrelax/errors.hpp"

namespace mlrelax {

/// Parameters of the three-parameter Mittag-Leffler function E^nu_{alpha,mu}(x):
/// the series sum_r (nu)_r x^r / (r! Gamma(alpha r + mu)).
///
/// alpha > 0 is required for the direct series; alpha < 0 is reachable only
/// through ml_reflection. Negative integer nu truncates the series to a
/// polynomial (see ml_poly).
struct MLParams {
  double alpha;
  double mu;
  double nu;
};

/// Reduced fraction l/k used by the hypergeometric reduction; l/k in (0, 1].
struct RationalAlpha {
  int l = 1;
  int k = 1;

  double value() const { return static_cast<double>(l) / k; }

  /// Nearest continued-fraction convergent with denominator <= k_max.
  /// Throws DenominatorTooLarge when no convergent with k <= k_max matches
  /// alpha to within tol.
  static RationalAlpha from_real(double alpha, int k_max = 12,
                                 double tol = 1e-12);
};

inline constexpr double kSeriesTol = 1e-13;
inline constexpr int kSeriesTermCap = 10000;

/// Direct series evaluation of E^nu_{alpha,mu}(x).
///
/// Stops once three consecutive terms are below tol*|sum| with decreasing
/// magnitudes (alternating Mittag-Leffler series have humped term profiles,
/// so a single small term is not a safe stop). Refuses with NonConvergent
/// when the hump exceeds 1e15 times the result scale: the cancellation
/// cannot be represented in double precision and the caller should switch
/// to ml_hypergeom or Laplace inversion.
double ml3(const MLParams& p, double x, double tol = kSeriesTol);
std::complex<double> ml3(const MLParams& p, std::complex<double> x,
                         double tol = kSeriesTol);

/// Series evaluation with an automatic fallback for x <= 0: when the direct
/// sum would lose more than ~half the mantissa, the value is recovered by
/// Talbot inversion of the exact Laplace pair of t^{mu-1}E^nu_{alpha,mu}(x t^alpha).
/// This is the evaluator the relaxation solvers use internally.
double ml3_auto(const MLParams& p, double x, double tol = kSeriesTol);

/// Mittag-Leffler polynomial E^{-n}_{alpha,1+d}(x): the exact finite sum
/// sum_{r=0}^n C(n,r) (-x)^r / Gamma(alpha r + 1 + d).
double ml_poly(double alpha, double d, int n, double x);
std::complex<double> ml_poly(double alpha, double d, int n,
                             std::complex<double> x);

/// E^nu_{l/k,1+d}(x) through the finite sum of generalized hypergeometric
/// functions: one (1+k)F(l+k) series per residue class j = r mod k, with the
/// Gamma ratios reduced to rational Pochhammer products because alpha*k is an
/// integer. For nu = -n only the classes j <= min(n, k-1) survive.
double ml_hypergeom(const RationalAlpha& alpha, double d, double nu, double x,
                    double tol = kSeriesTol);

/// Prabhakar function e^nu_{alpha,mu}(a,t) = t^{mu-1} E^nu_{alpha,mu}(a t^alpha).
double prabhakar(const MLParams& p, double a, double t);

/// Same with the ml3_auto evaluator behind it.
double prabhakar_auto(const MLParams& p, double a, double t);

/// n-th derivative of the Prabhakar function by the exact parameter shift
/// d^n/dt^n [t^{mu-1} E^nu_{alpha,mu}(a t^alpha)] = t^{mu-1-n} E^nu_{alpha,mu-n}(a t^alpha);
/// no numerical differentiation is involved.
double prabhakar_derivative(const MLParams& p, double a, double t, int n);

enum class AsymptoticRegime { small_argument, large_argument };

struct AsymptoticValue {
  double value;
  AsymptoticRegime regime;
};

/// Leading asymptotics of E_alpha(-A t^alpha): 1 - A t^alpha/Gamma(1+alpha)
/// when A^{1/alpha} t is small, (A t^alpha)^{-1}/Gamma(1-alpha) when large.
/// The returned regime indicates which branch was taken.
AsymptoticValue ml_asymptotic(double alpha, double A, double t);

/// E_{-alpha,0}(x) evaluated through the reflection
/// E_{-alpha,0}(x) = -E_{alpha,0}(1/x) = -x^{-1} E_{alpha,alpha}(1/x).
double ml_reflection(double alpha, double x);

namespace detail {

/// Outcome of one series summation, with enough diagnostics for the callers
/// that need to distinguish "converged" from "converged cleanly".
struct SeriesOutcome {
  double value = 0.0;
  bool converged = false;
  double max_term = 0.0;  // largest |term| encountered
  int terms = 0;
};

SeriesOutcome e3_series(double alpha, double mu, double nu, double x,
                        double tol, int max_terms);

struct PolyOutcome {
  double value = 0.0;
  double max_term = 0.0;
};

PolyOutcome e3_poly_sum(double alpha, double d, int n, double x);

/// true when nu is a non-positive integer (polynomial case).
bool is_poly_order(double nu, int* n_out);

}  // namespace detail

}  // namespace mlrelax
