#include "mlrelax/laplace.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "mlrelax/mlfun.hpp"
#include "mlrelax/quadrature.hpp"

namespace mlrelax {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLn2 = 0.693147180559945309417232121458176568;

std::vector<double> stehfest_coefficients(int n) {
  // Salzer summation weights; factorials in extended precision because the
  // n = 14 numerators brush the 2^53 integer limit.
  std::vector<long double> fact(static_cast<std::size_t>(2 * n + 1), 1.0L);
  for (int i = 1; i <= 2 * n; ++i) {
    fact[static_cast<std::size_t>(i)] =
        fact[static_cast<std::size_t>(i - 1)] * i;
  }
  const int half = n / 2;
  std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
  for (int k = 1; k <= n; ++k) {
    long double acc = 0.0L;
    const int j_lo = (k + 1) / 2;
    const int j_hi = std::min(k, half);
    for (int j = j_lo; j <= j_hi; ++j) {
      long double term = std::pow(static_cast<long double>(j), half);
      term *= fact[static_cast<std::size_t>(2 * j)];
      term /= fact[static_cast<std::size_t>(half - j)];
      term /= fact[static_cast<std::size_t>(j)];
      term /= fact[static_cast<std::size_t>(j - 1)];
      term /= fact[static_cast<std::size_t>(k - j)];
      term /= fact[static_cast<std::size_t>(2 * j - k)];
      acc += term;
    }
    const bool negative = ((half + k) % 2) != 0;
    v[static_cast<std::size_t>(k)] =
        static_cast<double>(negative ? -acc : acc);
  }
  return v;
}

}  // namespace

PrabhakarKernel::PrabhakarKernel(double alpha_, double nu_, double mu_,
                                 double a_)
    : alpha(alpha_), nu(nu_), mu(mu_), a(a_) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidParam("PrabhakarKernel: alpha must lie in (0, 1]");
  }
  if (!(nu > 0.0 && nu <= 1.0)) {
    throw InvalidParam("PrabhakarKernel: nu must lie in (0, 1]");
  }
  if (!(mu > 0.0 && mu <= 1.0)) {
    throw InvalidParam("PrabhakarKernel: mu must lie in (0, 1]");
  }
  if (!(a >= 0.0)) {
    throw InvalidParam("PrabhakarKernel: a must be >= 0");
  }
}

std::complex<double> PrabhakarKernel::image(std::complex<double> s) const {
  if (s == std::complex<double>(0.0, 0.0)) {
    throw InvalidParam("PrabhakarKernel::image: s = 0 is singular");
  }
  return std::pow(s, mu - alpha * nu - 1.0) *
         std::pow(std::pow(s, alpha) + a, nu);
}

double PrabhakarKernel::time_domain(double t) const {
  if (!(t > 0.0)) {
    throw InvalidParam("PrabhakarKernel::time_domain: t must be > 0");
  }
  const MLParams p{alpha, 1.0 - mu, -nu};
  return std::pow(t, -mu) * ml3_auto(p, -a * std::pow(t, alpha));
}

std::complex<double> kernel_image(const PrabhakarKernel& kernel,
                                  std::complex<double> s) {
  if (!(s.real() > 0.0)) {
    throw InvalidParam("kernel_image: Re s must be positive");
  }
  return kernel.image(s);
}

SolvabilityReport solvability_check(const PrabhakarKernel& kernel) {
  SolvabilityReport r{};
  const double anu = std::pow(kernel.a, kernel.nu);
  if (kernel.a > 0.0) {
    // (s^alpha + a)^nu -> a^nu as s -> 0
    r.khat_exponent_zero = kernel.mu - kernel.alpha * kernel.nu - 1.0;
    r.skhat_exponent_zero = kernel.mu - kernel.alpha * kernel.nu;
  } else {
    r.khat_exponent_zero = kernel.mu - 1.0;
    r.skhat_exponent_zero = kernel.mu;
  }
  r.khat_exponent_inf = kernel.mu - 1.0;
  r.skhat_exponent_inf = kernel.mu;
  r.skhat_limit_zero = (r.skhat_exponent_zero == 0.0)
                           ? (kernel.a > 0.0 ? anu : 1.0)
                           : std::numeric_limits<double>::quiet_NaN();

  r.khat_diverges_at_zero = r.khat_exponent_zero < 0.0;
  r.skhat_vanishes_at_zero = r.skhat_exponent_zero > 0.0;
  r.khat_vanishes_at_inf = r.khat_exponent_inf < 0.0;
  r.skhat_diverges_at_inf = r.skhat_exponent_inf > 0.0;
  r.fading_memory = r.skhat_exponent_inf > 0.0;
  r.all_limit_conditions = r.khat_diverges_at_zero &&
                           r.skhat_vanishes_at_zero &&
                           r.khat_vanishes_at_inf && r.skhat_diverges_at_inf;

  const std::complex<double> s_small(1e-6, 0.0);
  const std::complex<double> s_large(1e6, 0.0);
  r.probe_khat_small = std::abs(kernel.image(s_small));
  r.probe_skhat_small = std::abs(s_small * kernel.image(s_small));
  r.probe_khat_large = std::abs(kernel.image(s_large));
  r.probe_skhat_large = std::abs(s_large * kernel.image(s_large));
  return r;
}

double talbot_invert(
    const std::function<std::complex<double>(std::complex<double>)>& image,
    double t, int n_nodes) {
  if (!(t > 0.0)) throw InvalidParam("talbot_invert: t must be > 0");
  if (n_nodes < 4) throw InvalidParam("talbot_invert: need at least 4 nodes");
  const double r = 2.0 * n_nodes / (5.0 * t);
  double acc =
      0.5 * std::exp(r * t) * std::real(image(std::complex<double>(r, 0.0)));
  for (int k = 1; k < n_nodes; ++k) {
    const double theta = k * kPi / n_nodes;
    const double cot = std::cos(theta) / std::sin(theta);
    const std::complex<double> s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    acc += std::real(std::exp(s * t) * image(s) *
                     std::complex<double>(1.0, sigma));
  }
  const double out = acc * r / n_nodes;
  if (!std::isfinite(out)) {
    throw NumericalOverflow("talbot_invert: non-finite contour sum");
  }
  return out;
}

double stehfest_invert(
    const std::function<std::complex<double>(std::complex<double>)>& image,
    double t, int n_nodes) {
  if (!(t > 0.0)) throw InvalidParam("stehfest_invert: t must be > 0");
  if (n_nodes < 2 || n_nodes % 2 != 0 || n_nodes > 20) {
    throw InvalidParam("stehfest_invert: n_nodes must be even and <= 20");
  }
  const std::vector<double> v = stehfest_coefficients(n_nodes);
  const double ln2_t = kLn2 / t;
  double acc = 0.0;
  for (int k = 1; k <= n_nodes; ++k) {
    acc += v[static_cast<std::size_t>(k)] *
           std::real(image(std::complex<double>(k * ln2_t, 0.0)));
  }
  const double out = acc * ln2_t;
  if (!std::isfinite(out)) {
    throw NumericalOverflow("stehfest_invert: non-finite sample sum");
  }
  return out;
}

double inverse_laplace(const LaplaceImage& image, double t,
                       InversionMethod method, int n_nodes, double gate) {
  switch (method) {
    case InversionMethod::talbot:
      return talbot_invert(image.evaluator, t, n_nodes);
    case InversionMethod::stehfest:
      return stehfest_invert(image.evaluator, t,
                             n_nodes == kTalbotDefaultNodes
                                 ? kStehfestDefaultNodes
                                 : n_nodes);
    case InversionMethod::both: {
      const double a = talbot_invert(image.evaluator, t, n_nodes);
      const double b =
          stehfest_invert(image.evaluator, t, kStehfestDefaultNodes);
      const double scale = std::max({std::fabs(a), std::fabs(b), 1e-30});
      if (std::fabs(a - b) > gate * scale) {
        throw MethodDisagreement(
            "inverse_laplace: Talbot and Stehfest differ beyond the gate "
            "for image " +
            image.description);
      }
      return a;
    }
  }
  throw InvalidParam("inverse_laplace: unknown method");
}

std::complex<double> forward_laplace(const std::function<double(double)>& f,
                                     std::complex<double> s,
                                     double singular_power, double abs_tol) {
  if (!(s.real() > 0.0)) {
    throw InvalidParam("forward_laplace: Re s must be positive");
  }
  if (!(singular_power > 0.0)) {
    throw InvalidParam("forward_laplace: singular_power must be > 0");
  }
  QuadratureOptions opts;
  opts.abs_tol = abs_tol;
  opts.rel_tol = 1e-10;
  opts.max_subdivisions = 200;
  auto integrand = [&f, s](double t) -> std::complex<double> {
    return std::exp(-s * t) * f(t);
  };
  const std::complex<double> head =
      integrate_power_endpoint(integrand, 1.0, singular_power, opts);
  const std::complex<double> tail =
      integrate_to_infinity(integrand, 1.0, opts);
  return head + tail;
}

LaplaceImage prabhakar_image(double alpha, double mu, double nu, double a) {
  if (!(alpha > 0.0)) {
    throw InvalidParam("prabhakar_image: alpha must be > 0");
  }
  return LaplaceImage{
      [alpha, mu, nu, a](std::complex<double> s) {
        return std::pow(s, alpha * nu - mu) *
               std::pow(std::pow(s, alpha) - a, -nu);
      },
      "prabhakar transform pair"};
}

double invert_prabhakar_image(double alpha, double mu, double nu, double a,
                              double t, int n_nodes) {
  if (a > 0.0) {
    // Real branch point at s = a^{1/alpha}; the fixed contour crosses the
    // real axis at r = 2N/(5t) and must stay to its right.
    const double r = 2.0 * n_nodes / (5.0 * t);
    const double pole = std::pow(a, 1.0 / alpha);
    if (r <= 1.25 * pole) {
      throw InvalidParam(
          "invert_prabhakar_image: fixed Talbot contour does not enclose "
          "the branch point s = a^{1/alpha}; reduce t or raise n_nodes");
    }
  }
  return talbot_invert(prabhakar_image(alpha, mu, nu, a).evaluator, t,
                       n_nodes);
}

}  // namespace mlrelax
