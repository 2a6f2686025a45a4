#include "mlrelax/mlfun.hpp"

#include <cmath>
#include <limits>

#include "mlrelax/gamma.hpp"
#include "mlrelax/laplace.hpp"

namespace mlrelax {

namespace {

constexpr double kRefuseGuard = 1e15;  // direct-series refusal threshold
// Term magnitudes come out of exp() of an 80-bit log, so each carries a
// noise floor of a few 1e-17 relative to the hump; sums whose value sits
// within ~20x of that floor are indistinguishable from rounding noise and
// are refused as well.
constexpr double kTermNoiseFloor = 2e-16;
constexpr double kCleanGuard = 1e7;  // switch point of the auto evaluator
constexpr int kAutoTalbotNodes = 24;
constexpr double kScaleFloor = 1e-300;

bool series_is_representable(double max_term, double value) {
  const double scale = std::max(std::fabs(value), kScaleFloor);
  if (max_term > kRefuseGuard * scale) return false;
  if (kTermNoiseFloor * max_term > 0.05 * scale) return false;
  return true;
}

void validate_series_params(const MLParams& p, double tol) {
  if (!(p.alpha > 0.0)) {
    throw InvalidParam("ml3: alpha must be positive for the direct series");
  }
  if (!(tol > 0.0)) {
    throw InvalidParam("ml3: tol must be positive");
  }
}

// Shared series engine for real and complex arguments. Terms are carried as
// log-magnitude plus sign/phase so x^r and the Gamma factor never overflow
// separately; accumulation is in extended precision to keep the cancellation
// error at a few ulp of the largest term.
template <class Scalar>
struct SeriesResultT {
  Scalar value{};
  bool converged = false;
  double max_term = 0.0;
  int terms = 0;
};

template <class Scalar>
SeriesResultT<Scalar> series_core(double alpha, double mu, double nu,
                                  Scalar x, double tol, int max_terms) {
  constexpr bool is_complex = std::is_same_v<Scalar, std::complex<double>>;
  using Accum = std::conditional_t<is_complex, std::complex<long double>,
                                   long double>;
  SeriesResultT<Scalar> out;

  const double ax = std::abs(x);
  if (ax == 0.0) {
    out.value = Scalar(rgamma(mu));
    out.converged = true;
    out.max_term = std::abs(out.value);
    out.terms = 1;
    return out;
  }

  // Terms are exp(log-magnitude); the log error is what limits accuracy at
  // the term hump, so the log bookkeeping runs in long double throughout.
  const long double log_ax = std::log(static_cast<long double>(ax));
  const double arg_x = [&] {
    if constexpr (is_complex) {
      return std::arg(x);
    } else {
      return x < 0.0 ? -1.0 : 1.0;  // reused as a sign for the real path
    }
  }();

  Accum sum{};
  long double log_coeff = 0.0L;  // log|(nu)_r / r!|
  int sign_coeff = 1;
  int streak = 0;
  long double prev_mag = std::numeric_limits<long double>::infinity();

  for (int r = 0; r < max_terms; ++r) {
    const SignedLogGammaL g = log_gamma_signed_l(alpha * r + mu);
    long double mag = 0.0L;
    if (g.sign != 0) {
      mag = std::exp(log_coeff + r * log_ax - g.log_abs);
    }
    if (!std::isfinite(static_cast<double>(mag))) {
      out.max_term = std::numeric_limits<double>::infinity();
      out.converged = false;
      return out;
    }
    const long double signed_mag = mag * sign_coeff * g.sign;
    if constexpr (is_complex) {
      sum += signed_mag * std::complex<long double>(std::cos(r * arg_x),
                                                    std::sin(r * arg_x));
    } else {
      sum += signed_mag * (arg_x < 0.0 && (r % 2 != 0) ? -1.0L : 1.0L);
    }
    if (static_cast<double>(mag) > out.max_term) {
      out.max_term = static_cast<double>(mag);
    }
    out.terms = r + 1;

    // Stop once three consecutive terms sit below tol*|sum| with decreasing
    // magnitudes -- and only past the Gamma poles (alpha*r + mu > 0), where
    // an exact-zero term can no longer fake convergence.
    const long double sum_mag = std::abs(sum);
    if (alpha * r + mu > 0.0 && mag <= tol * sum_mag && mag <= prev_mag) {
      if (++streak >= 3) {
        out.converged = true;
        break;
      }
    } else {
      streak = 0;
    }
    prev_mag = mag;

    const double f = nu + r;
    if (f == 0.0) {
      out.converged = true;  // Pochhammer truncation: the sum is exact
      break;
    }
    log_coeff += std::log(std::fabs(static_cast<long double>(f))) -
                 std::log1p(static_cast<long double>(r));
    if (f < 0.0) sign_coeff = -sign_coeff;
  }

  out.value = static_cast<Scalar>(sum);
  return out;
}

// E^nu_{alpha,mu}(-lambda) by Talbot inversion of the transform pair of
// t^{mu-1} E^nu_{alpha,mu}(-t^alpha): the scaling
//   E^nu_{alpha,mu}(-lambda) = lambda^{(1-mu)/alpha} e^nu_{alpha,mu}(-1, lambda^{1/alpha})
// reduces everything to the unit image, whose features the fixed contour
// tracks at every lambda. Requires mu > 0 for a decaying image; smaller mu
// is raised first through
//   E^nu_{alpha,mu} = mu E^nu_{alpha,mu+1} + alpha nu x E^{nu+1}_{alpha,mu+alpha+1}.
double e3_negative_argument(double alpha, double mu, double nu, double lambda,
                            int depth = 0) {
  if (depth > 10) {
    throw NonConvergent(
        "ml3: series cancellation too severe and the inversion fallback "
        "cannot lift mu into the invertible range");
  }
  if (mu <= 1e-9) {
    const double lifted = e3_negative_argument(alpha, mu + 1.0, nu, lambda,
                                               depth + 1);
    const double shifted = e3_negative_argument(alpha, mu + alpha + 1.0,
                                                nu + 1.0, lambda, depth + 1);
    return mu * lifted - alpha * nu * lambda * shifted;
  }
  const double t_unit = std::pow(lambda, 1.0 / alpha);
  return std::pow(lambda, (1.0 - mu) / alpha) *
         invert_prabhakar_image(alpha, mu, nu, -1.0, t_unit,
                                kAutoTalbotNodes);
}

}  // namespace

namespace detail {

SeriesOutcome e3_series(double alpha, double mu, double nu, double x,
                        double tol, int max_terms) {
  const auto r = series_core<double>(alpha, mu, nu, x, tol, max_terms);
  return {r.value, r.converged, r.max_term, r.terms};
}

PolyOutcome e3_poly_sum(double alpha, double d, int n, double x) {
  // tol = 0 disables the smallness stop; the coefficient truncation at
  // r = n ends the sum exactly.
  const auto r = series_core<double>(alpha, 1.0 + d, -static_cast<double>(n),
                                     x, 0.0, n + 2);
  return {r.value, r.max_term};
}

bool is_poly_order(double nu, int* n_out) {
  if (nu > 0.0 || nu != std::floor(nu)) return false;
  if (nu < -1e9) return false;
  if (n_out) *n_out = static_cast<int>(-nu);
  return true;
}

}  // namespace detail

RationalAlpha RationalAlpha::from_real(double alpha, int k_max, double tol) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidParam("RationalAlpha: alpha must be positive and finite");
  }
  // Continued-fraction convergents p/q of alpha.
  long pm1 = 1, qm1 = 0;                              // p_{-1}, q_{-1}
  long p0 = static_cast<long>(std::floor(alpha));     // p_0 = a_0
  long q0 = 1;
  if (std::fabs(alpha - static_cast<double>(p0)) <= tol && p0 >= 1) {
    return {static_cast<int>(p0), 1};
  }
  double frac = alpha;
  double rem = alpha - static_cast<double>(p0);
  for (int it = 0; it < 64; ++it) {
    if (rem <= 0.0) break;
    frac = 1.0 / rem;
    const long ai = static_cast<long>(std::floor(frac));
    rem = frac - static_cast<double>(ai);
    const long p = ai * p0 + pm1;
    const long q = ai * q0 + qm1;
    if (q > k_max) break;
    pm1 = p0;
    qm1 = q0;
    p0 = p;
    q0 = q;
    if (std::fabs(alpha - static_cast<double>(p0) / q0) <= tol) {
      return {static_cast<int>(p0), static_cast<int>(q0)};
    }
  }
  throw DenominatorTooLarge(
      "RationalAlpha: no fraction with denominator <= " +
      std::to_string(k_max) + " matches alpha");
}

double ml3(const MLParams& p, double x, double tol) {
  validate_series_params(p, tol);
  int n = 0;
  if (detail::is_poly_order(p.nu, &n)) {
    return ml_poly(p.alpha, p.mu - 1.0, n, x);
  }
  const auto out = detail::e3_series(p.alpha, p.mu, p.nu, x, tol,
                                     kSeriesTermCap);
  if (!out.converged) {
    throw NonConvergent("ml3: term magnitude still growing at the term cap");
  }
  if (!series_is_representable(out.max_term, out.value)) {
    throw NonConvergent(
        "ml3: series cancellation exceeds double precision; use "
        "ml_hypergeom (rational alpha) or Laplace inversion");
  }
  return out.value;
}

std::complex<double> ml3(const MLParams& p, std::complex<double> x,
                         double tol) {
  validate_series_params(p, tol);
  int n = 0;
  if (detail::is_poly_order(p.nu, &n)) {
    return ml_poly(p.alpha, p.mu - 1.0, n, x);
  }
  const auto out = series_core<std::complex<double>>(p.alpha, p.mu, p.nu, x,
                                                     tol, kSeriesTermCap);
  if (!out.converged) {
    throw NonConvergent("ml3: term magnitude still growing at the term cap");
  }
  if (!series_is_representable(out.max_term, std::abs(out.value))) {
    throw NonConvergent(
        "ml3: series cancellation exceeds double precision; use "
        "ml_hypergeom (rational alpha) or Laplace inversion");
  }
  return out.value;
}

double ml3_auto(const MLParams& p, double x, double tol) {
  validate_series_params(p, tol);
  int n = 0;
  if (detail::is_poly_order(p.nu, &n)) {
    return ml_poly(p.alpha, p.mu - 1.0, n, x);
  }
  const auto out = detail::e3_series(p.alpha, p.mu, p.nu, x, tol,
                                     kSeriesTermCap);
  const double scale = std::max(std::fabs(out.value), kScaleFloor);
  if (out.converged && out.max_term <= kCleanGuard * scale) {
    return out.value;
  }
  if (x < 0.0 && p.alpha <= 1.0) {
    return e3_negative_argument(p.alpha, p.mu, p.nu, -x);
  }
  if (out.converged && series_is_representable(out.max_term, out.value)) {
    return out.value;
  }
  throw NonConvergent(
      "ml3_auto: series not representable in double precision and no "
      "inversion fallback applies for this argument");
}

double ml_poly(double alpha, double d, int n, double x) {
  if (!(alpha > 0.0)) throw InvalidParam("ml_poly: alpha must be positive");
  if (n < 0) throw InvalidParam("ml_poly: n must be >= 0");
  return detail::e3_poly_sum(alpha, d, n, x).value;
}

std::complex<double> ml_poly(double alpha, double d, int n,
                             std::complex<double> x) {
  if (!(alpha > 0.0)) throw InvalidParam("ml_poly: alpha must be positive");
  if (n < 0) throw InvalidParam("ml_poly: n must be >= 0");
  const auto r = series_core<std::complex<double>>(
      alpha, 1.0 + d, -static_cast<double>(n), x, 0.0, n + 2);
  return r.value;
}

double ml_hypergeom(const RationalAlpha& ra, double d, double nu, double x,
                    double tol) {
  if (ra.l < 1 || ra.k < 1 || ra.l > ra.k) {
    throw InvalidParam("ml_hypergeom: need alpha = l/k in (0, 1]");
  }
  if (!(tol > 0.0)) throw InvalidParam("ml_hypergeom: tol must be positive");
  const int l = ra.l;
  const int k = ra.k;
  const double alpha = ra.value();
  const double xk = std::pow(x, k);  // shared argument of the inner series
  // The classes can cancel against each other, so each inner series is
  // pushed well below the requested tolerance of the combined value.
  const double inner_tol = std::min(tol, 1e-16);

  long double total = 0.0L;
  for (int j = 0; j < k; ++j) {
    // Head of the residue class: r0 = j advanced past any Gamma poles of
    // Gamma(alpha r + 1 + d). The pole pattern repeats with period k only
    // when the argument is an integer, in which case it stays an integer,
    // so a simple advance terminates.
    int r = j;
    SignedLogGamma g = log_gamma_signed(alpha * r + 1.0 + d);
    int hops = 0;
    while (g.sign == 0 && hops < 1024) {
      r += k;  // the Gamma argument climbs by l per hop, so this terminates
      g = log_gamma_signed(alpha * r + 1.0 + d);
      ++hops;
    }
    if (g.sign == 0) continue;

    // term_{r} = (nu)_r x^r rgamma(alpha r + 1 + d) / r!, assembled in logs.
    double log_mag = -std::lgamma(static_cast<double>(r) + 1.0) - g.log_abs;
    int sign = g.sign;
    bool truncated = false;
    for (int i = 0; i < r; ++i) {
      const double f = nu + i;
      if (f == 0.0) {
        truncated = true;  // (nu)_r = 0: the whole class is zero
        break;
      }
      log_mag += std::log(std::fabs(f));
      if (f < 0.0) sign = -sign;
    }
    if (truncated) continue;
    if (x != 0.0) {
      log_mag += r * std::log(std::fabs(x));
      if (x < 0.0 && r % 2 != 0) sign = -sign;
    } else if (r > 0) {
      continue;
    }

    double term = sign * std::exp(log_mag);
    long double class_sum = 0.0L;
    int streak = 0;
    double prev_mag = std::numeric_limits<double>::infinity();
    bool class_converged = false;
    for (int m = 0; m < kSeriesTermCap; ++m) {
      class_sum += term;
      const double mag = std::fabs(term);
      const double ref = static_cast<double>(std::fabs(total + class_sum));
      if (mag <= inner_tol * std::max(ref, kScaleFloor) && mag <= prev_mag) {
        if (++streak >= 3) {
          class_converged = true;
          break;
        }
      } else {
        streak = 0;
      }
      prev_mag = mag;

      // Ratio of consecutive class terms: x^k (nu+r)_k / [(r+1)_k
      // ((alpha r + 1 + d))_l]. All three windows are short products.
      double num = 1.0;
      for (int i = 0; i < k; ++i) num *= nu + r + i;
      if (num == 0.0) {
        class_converged = true;  // truncation reached inside the window
        break;
      }
      double den = 1.0;
      for (int i = 0; i < k; ++i) den *= static_cast<double>(r + 1 + i);
      const double base = alpha * r + 1.0 + d;
      for (int i = 0; i < l; ++i) den *= base + i;
      term *= xk * num / den;
      if (!std::isfinite(term)) {
        throw NonConvergent("ml_hypergeom: inner series overflowed");
      }
      r += k;
    }
    if (!class_converged) {
      throw NonConvergent("ml_hypergeom: inner hypergeometric series did "
                          "not converge");
    }
    total += class_sum;
  }
  return static_cast<double>(total);
}

double prabhakar(const MLParams& p, double a, double t) {
  if (t < 0.0 || (t == 0.0 && p.mu < 1.0)) {
    throw InvalidParam("prabhakar: t must be positive (t = 0 needs mu >= 1)");
  }
  if (t == 0.0) {
    return p.mu == 1.0 ? rgamma(1.0) : 0.0;
  }
  return std::pow(t, p.mu - 1.0) * ml3(p, a * std::pow(t, p.alpha));
}

double prabhakar_auto(const MLParams& p, double a, double t) {
  if (t < 0.0 || (t == 0.0 && p.mu < 1.0)) {
    throw InvalidParam("prabhakar: t must be positive (t = 0 needs mu >= 1)");
  }
  if (t == 0.0) {
    return p.mu == 1.0 ? rgamma(1.0) : 0.0;
  }
  return std::pow(t, p.mu - 1.0) * ml3_auto(p, a * std::pow(t, p.alpha));
}

double prabhakar_derivative(const MLParams& p, double a, double t, int n) {
  if (n < 1) throw InvalidParam("prabhakar_derivative: n must be >= 1");
  if (!(t > 0.0)) throw InvalidParam("prabhakar_derivative: t must be > 0");
  const MLParams shifted{p.alpha, p.mu - static_cast<double>(n), p.nu};
  return prabhakar(shifted, a, t);
}

AsymptoticValue ml_asymptotic(double alpha, double A, double t) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidParam("ml_asymptotic: alpha must lie in (0, 1)");
  }
  if (!(A > 0.0) || !(t > 0.0)) {
    throw InvalidParam("ml_asymptotic: A and t must be positive");
  }
  const double scale = std::pow(A, 1.0 / alpha) * t;
  const double Ata = A * std::pow(t, alpha);
  if (scale <= 1.0) {
    return {1.0 - Ata * rgamma(1.0 + alpha), AsymptoticRegime::small_argument};
  }
  return {rgamma(1.0 - alpha) / Ata, AsymptoticRegime::large_argument};
}

double ml_reflection(double alpha, double x) {
  if (!(alpha > 0.0)) throw InvalidParam("ml_reflection: alpha must be > 0");
  if (x == 0.0) throw InvalidParam("ml_reflection: x must be nonzero");
  return -ml3(MLParams{alpha, 0.0, 1.0}, 1.0 / x);
}

}  // namespace mlrelax
