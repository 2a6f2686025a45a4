#include "mlrelax/gamma.hpp"

#include <cmath>
#include <limits>

namespace mlrelax {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLogPi = 1.144729885849400174143427351353058712;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;
constexpr long double kLogPiL = 1.144729885849400174143427351353058712L;

bool is_nonpositive_integer(double z) {
  return z <= 0.0 && z == std::floor(z);
}
}  // namespace

double sinpi(double x) {
  // fmod is exact, so the fold to [-1,1] keeps the phase for any |x|.
  double r = std::fmod(x, 2.0);
  if (r > 1.0) {
    r -= 2.0;
  } else if (r < -1.0) {
    r += 2.0;
  }
  const double a = std::fabs(r);
  const double s = (a <= 0.5) ? std::sin(kPi * a) : std::sin(kPi * (1.0 - a));
  return r < 0.0 ? -s : s;
}

SignedLogGamma log_gamma_signed(double z) {
  if (z > 0.0) {
    return {std::lgamma(z), 1};
  }
  if (is_nonpositive_integer(z)) {
    return {std::numeric_limits<double>::infinity(), 0};
  }
  // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z), and Gamma(1-z) > 0 here.
  const double s = sinpi(z);
  const double log_abs = kLogPi - std::log(std::fabs(s)) - std::lgamma(1.0 - z);
  return {log_abs, s > 0.0 ? 1 : -1};
}

SignedLogGammaL log_gamma_signed_l(double z) {
  if (z > 0.0) {
    return {std::lgamma(static_cast<long double>(z)), 1};
  }
  if (is_nonpositive_integer(z)) {
    return {std::numeric_limits<long double>::infinity(), 0};
  }
  const long double zl = z;
  long double r = std::fmod(zl, 2.0L);
  if (r > 1.0L) {
    r -= 2.0L;
  } else if (r < -1.0L) {
    r += 2.0L;
  }
  const long double a = std::fabs(r);
  long double s = (a <= 0.5L) ? std::sin(kPiL * a) : std::sin(kPiL * (1.0L - a));
  if (r < 0.0L) s = -s;
  const long double log_abs =
      kLogPiL - std::log(std::fabs(s)) - std::lgamma(1.0L - zl);
  return {log_abs, s > 0.0L ? 1 : -1};
}

double rgamma(double z) {
  if (is_nonpositive_integer(z)) return 0.0;
  if (z > 0.0) {
    // tgamma keeps a couple of ulp up to the overflow edge; past it the
    // reciprocal underflows to zero, which is the right limit.
    if (z < 171.6) return 1.0 / std::tgamma(z);
    const double lg = std::lgamma(z);
    return std::exp(-lg);
  }
  const SignedLogGamma g = log_gamma_signed(z);
  return g.sign * std::exp(-g.log_abs);
}

double pochhammer(double x, int n) {
  if (n == 0) return 1.0;
  if (x == 0.0) return 0.0;
  if (is_nonpositive_integer(x)) {
    // (-m)_n = (-1)^n m!/(m-n)! for n <= m, zero beyond the truncation.
    const double m = -x;
    if (n > m) return 0.0;
    double v = std::exp(std::lgamma(m + 1.0) - std::lgamma(m - n + 1.0));
    return (n % 2 == 0) ? v : -v;
  }
  const SignedLogGamma num = log_gamma_signed(x + n);
  const SignedLogGamma den = log_gamma_signed(x);
  if (num.sign == 0) return 0.0;  // x+n landed on a pole: ratio vanishes
  return num.sign * den.sign * std::exp(num.log_abs - den.log_abs);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double v = 1.0;
  for (int i = 1; i <= k; ++i) {
    v = v * (n - k + i) / i;
  }
  return v;
}

}  // namespace mlrelax
