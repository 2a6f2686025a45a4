#include "mlrelax/levy.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "mlrelax/gamma.hpp"
#include "mlrelax/laplace.hpp"
#include "mlrelax/quadrature.hpp"

namespace mlrelax {

namespace {

constexpr double kSeriesGuard = 1e12;  // hump refusal threshold for (A3)
constexpr double kScaleFloor = 1e-300;
constexpr int kTermCap = 10000;

void validate_query(const LevyQuery& q) {
  if (!(q.alpha > 0.0 && q.alpha <= 1.0)) {
    throw InvalidParam("h_function: alpha must lie in (0, 1]");
  }
  if (!(q.u > 0.0)) throw InvalidParam("h_function: u must be > 0");
  if (!(q.t > 0.0)) throw InvalidParam("h_function: t must be > 0");
}

// alpha = 1: the image is a pure shift, h(u,t) = (t-u)^{lambda-1}/Gamma(lambda).
// The series collapses to its r = 0 term there and cannot represent the
// t < u branch, so the exact rule is applied on every route.
double h_alpha_one(const LevyQuery& q) {
  if (q.t == q.u) {
    if (q.lambda == 1.0) return 0.5;  // midpoint convention on the jump
    return std::pow(0.0, q.lambda - 1.0) * rgamma(q.lambda);
  }
  if (q.t < q.u) return 0.0;
  return std::pow(q.t - q.u, q.lambda - 1.0) * rgamma(q.lambda);
}

struct HSeriesOutcome {
  double value = 0.0;
  bool converged = false;
  double max_term = 0.0;
};

HSeriesOutcome h_series(const LevyQuery& q) {
  const double z = q.t * std::pow(q.u, -1.0 / q.alpha);
  const long double log_z = std::log(static_cast<long double>(z));
  const double prefactor = std::pow(q.u, (q.lambda - 1.0) / q.alpha);

  long double sum = 0.0L;
  HSeriesOutcome out;
  int streak = 0;
  long double prev_mag = std::numeric_limits<long double>::infinity();
  for (int r = 0; r < kTermCap; ++r) {
    const SignedLogGammaL g = log_gamma_signed_l(q.lambda - q.alpha * r);
    long double mag = 0.0L;
    if (g.sign != 0) {
      mag = std::exp((q.lambda - 1.0 - q.alpha * r) * log_z -
                     std::lgamma(static_cast<long double>(r) + 1.0L) -
                     g.log_abs);
    }
    if (!std::isfinite(static_cast<double>(mag))) {
      out.max_term = std::numeric_limits<double>::infinity();
      return out;
    }
    sum += ((r % 2 == 0) ? 1.0L : -1.0L) * g.sign * mag;
    if (static_cast<double>(mag) > out.max_term) {
      out.max_term = static_cast<double>(mag);
    }

    const long double sum_mag = std::fabs(sum);
    if (sum_mag > 0.0L && mag <= 1e-16L * sum_mag && mag <= prev_mag) {
      if (++streak >= 3) {
        out.converged = true;
        break;
      }
    } else {
      streak = 0;
    }
    prev_mag = mag;
  }
  out.value = prefactor * static_cast<double>(sum);
  out.max_term *= prefactor;
  return out;
}

double h_series_checked(const LevyQuery& q) {
  const auto out = h_series(q);
  if (!out.converged) {
    throw NonConvergent("h_function: series did not converge at the term cap");
  }
  if (out.max_term > kSeriesGuard * std::max(std::fabs(out.value),
                                             kScaleFloor)) {
    throw NonConvergent(
        "h_function: series hump exceeds the double-precision budget; use "
        "the inversion route");
  }
  return out.value;
}

double h_inversion(const LevyQuery& q, int n_nodes = kTalbotDefaultNodes) {
  const double alpha = q.alpha;
  const double u = q.u;
  const double lambda = q.lambda;
  auto image = [alpha, u, lambda](std::complex<double> s) {
    return std::pow(s, -lambda) * std::exp(-u * std::pow(s, alpha));
  };
  return talbot_invert(image, q.t, n_nodes);
}

// Saddle-point exponent of the u -> infinity / t -> 0 tail:
// h ~ poly * exp(-X) with X = (1-alpha) (alpha^alpha u t^-alpha)^{1/(1-alpha)}.
double tail_exponent(const LevyQuery& q) {
  const double base =
      std::pow(q.alpha, q.alpha) * q.u * std::pow(q.t, -q.alpha);
  return (1.0 - q.alpha) * std::pow(base, 1.0 / (1.0 - q.alpha));
}

// Residue classes mod k of the series: each class is one generalized
// hypergeometric piece because the Gamma argument steps by the integer l,
// so consecutive in-class terms are related by rational Pochhammer windows.
double h_hypergeometric(const LevyQuery& q) {
  RationalAlpha ra;
  try {
    ra = RationalAlpha::from_real(q.alpha);
  } catch (const DenominatorTooLarge&) {
    throw RouteUnavailable(
        "h_function: hypergeometric route needs rational alpha = l/k with "
        "k <= 12");
  }
  const int l = ra.l;
  const int k = ra.k;
  const double alpha = ra.value();
  const double z = q.t * std::pow(q.u, -1.0 / alpha);
  const double zl = std::pow(z, -l);
  const double flip = (k % 2 == 0) ? 1.0 : -1.0;  // (-1)^k of the m-step

  long double total = 0.0L;
  double max_term = 0.0;
  for (int j = 0; j < k; ++j) {
    const double w0 = q.lambda - alpha * j;
    const SignedLogGamma g = log_gamma_signed(w0);
    if (g.sign == 0) continue;  // integer ladder: the whole class vanishes
    double term = ((j % 2 == 0) ? 1.0 : -1.0) * g.sign *
                  std::exp((q.lambda - 1.0 - alpha * j) * std::log(z) -
                           std::lgamma(static_cast<double>(j) + 1.0) -
                           g.log_abs);
    long double class_sum = 0.0L;
    int r = j;
    int streak = 0;
    double prev_mag = std::numeric_limits<double>::infinity();
    bool done = false;
    for (int m = 0; m < kTermCap; ++m) {
      class_sum += term;
      const double mag = std::fabs(term);
      if (mag > max_term) max_term = mag;
      const double ref = static_cast<double>(std::fabs(total + class_sum));
      if (ref > 0.0 && mag <= 1e-16 * ref && mag <= prev_mag) {
        if (++streak >= 3) {
          done = true;
          break;
        }
      } else {
        streak = 0;
      }
      prev_mag = mag;

      // ratio: (-1)^k z^{-l} (w - l)_l / (r+1)_k with w = lambda - alpha r
      const double w = q.lambda - alpha * r;
      double num = 1.0;
      for (int i = 0; i < l; ++i) num *= w - l + i;
      if (num == 0.0) {
        done = true;  // the class walked onto the Gamma pole ladder
        break;
      }
      double den = 1.0;
      for (int i = 0; i < k; ++i) den *= static_cast<double>(r + 1 + i);
      term *= flip * zl * num / den;
      if (!std::isfinite(term)) {
        throw NonConvergent("h_function: hypergeometric class overflowed");
      }
      r += k;
    }
    if (!done) {
      throw NonConvergent(
          "h_function: hypergeometric class did not converge");
    }
    total += class_sum;
  }
  const double prefactor = std::pow(q.u, (q.lambda - 1.0) / alpha);
  const double value = prefactor * static_cast<double>(total);
  if (max_term * prefactor >
      kSeriesGuard * std::max(std::fabs(value), kScaleFloor)) {
    throw NonConvergent(
        "h_function: hypergeometric classes cancel beyond the "
        "double-precision budget; use the inversion route");
  }
  return value;
}

}  // namespace

double h_function(const LevyQuery& q, LevyRoute route) {
  validate_query(q);
  if (q.alpha == 1.0) return h_alpha_one(q);
  switch (route) {
    case LevyRoute::series:
      return h_series_checked(q);
    case LevyRoute::hypergeometric:
      return h_hypergeometric(q);
    case LevyRoute::inversion:
      return h_inversion(q);
  }
  throw InvalidParam("h_function: unknown route");
}

double h_function(const LevyQuery& q) {
  validate_query(q);
  if (q.alpha == 1.0) return h_alpha_one(q);
  const auto out = h_series(q);
  if (out.converged &&
      out.max_term <=
          kSeriesGuard * std::max(std::fabs(out.value), kScaleFloor)) {
    return out.value;
  }
  // Deep in the stretched-exponential tail neither route resolves the value
  // (|h| <= ~1.4e-11 at X = 25 while the contour sum floats on noise); it is
  // zero to every tolerance used downstream.
  if (tail_exponent(q) > 25.0) return 0.0;
  return h_inversion(q);
}

double levy_density(double alpha, double u, double t) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidParam("levy_density: alpha must lie in (0, 1)");
  }
  return h_function(LevyQuery{alpha, u, t, 0.0});
}

double levy_cdf(double alpha, double u, double t) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidParam("levy_cdf: alpha must lie in (0, 1]");
  }
  return h_function(LevyQuery{alpha, u, t, 1.0});
}

double g_function(double alpha, double beta, double gamma, double u,
                  double t) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidParam("g_function: alpha must lie in (0, 1]");
  }
  return std::pow(u, gamma - beta / alpha) *
         h_function(LevyQuery{alpha, u, t, beta - alpha * gamma});
}

double ml_integral_rep(double alpha, double beta, double gamma, double a,
                       double t) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidParam("ml_integral_rep: alpha must lie in (0, 1)");
  }
  if (!(beta > 0.0) || !(gamma > 0.0)) {
    throw InvalidParam("ml_integral_rep: beta and gamma must be positive");
  }
  if (!(t > 0.0)) throw InvalidParam("ml_integral_rep: t must be > 0");
  if (!(a >= 0.0)) {
    throw InvalidParam("ml_integral_rep: a must be >= 0 to keep the "
                       "integrand damped");
  }
  const double lambda = beta - alpha * gamma;

  // The u-integrand dies on the stretched-exponential tail of h; past the
  // point where that tail exponent reaches 25 the h evaluator returns an
  // exact zero, so the integral is cut there (the discarded mass is below
  // 1e-10). With a > 0 the explicit exponential may cut earlier.
  double u_cut = std::pow(t, alpha) * std::pow(alpha, -alpha) *
                 std::pow(25.0 / (1.0 - alpha), 1.0 - alpha);
  if (a > 0.0) {
    u_cut = std::min(u_cut, (50.0 + 15.0 * std::max(gamma - 1.0, 0.0)) / a);
  }

  auto integrand = [&](double u) {
    return std::exp(-a * u) * std::pow(u, gamma - 1.0) *
           h_function(LevyQuery{alpha, u, t, lambda});
  };

  QuadratureOptions opts;
  opts.abs_tol = 1e-10;
  opts.rel_tol = 1e-9;
  opts.max_subdivisions = 300;

  double integral = 0.0;
  const double split = std::min(1.0, u_cut);
  integral += integrate_power_endpoint(integrand, split, gamma, opts);
  if (u_cut > split) {
    integral += integrate(integrand, split, u_cut, opts);
  }
  return rgamma(gamma) * std::pow(t, 1.0 - beta) * integral;
}

}  // namespace mlrelax
