#include "mlrelax/volterra.hpp"

#include <cmath>
#include <limits>

#include "mlrelax/gamma.hpp"
#include "mlrelax/levy.hpp"
#include "mlrelax/quadrature.hpp"

namespace mlrelax {

namespace {

constexpr double kShapeTol = 1e-12;  // kernel-shape checks (nu == 1 etc.)
constexpr double kInnerCleanGuard = 1e7;
constexpr double kF1HumpGuard = 1e12;
constexpr double kHalvingGate = 1e-4;

bool nearly(double x, double y) { return std::fabs(x - y) <= kShapeTol; }

// E_{nu,nu}(-y) through the robust evaluator; e^1_{nu,0}(-B,xi) is
// -B xi^{nu-1} E_{nu,nu}(-B xi^nu), which keeps the second parameter
// positive for the inversion fallback.
double e1_nu0(double nu, double B, double xi) {
  const double y = B * std::pow(xi, nu);
  return -B * std::pow(xi, nu - 1.0) * ml3_auto(MLParams{nu, nu, 1.0}, -y);
}

// Exact moments of kappa: K1(x) = int_0^x kappa, K2(x) = int_0^x w kappa(w) dw.
// They factor as K1 = x^mu Q1(x^alpha), K2 = x^{mu+1} Q2(x^alpha) with Q1,
// Q2 analytic in y = x^alpha:
//   Q1(y) = E^nu_{alpha,mu+1}(-a y),
//   Q2(y) = E^nu_{alpha,mu+1}(-a y) - E^nu_{alpha,mu+2}(-a y).
// Dense tabulation of Q1, Q2 with cubic (Catmull-Rom) interpolation: the
// product-integration sweep needs the moments at every pairwise grid
// difference and a direct evaluation each time would dominate the solve.
class MomentEvaluator {
 public:
  MomentEvaluator(const PrabhakarKernel& k, double x_max)
      : kernel_(k), y_max_(std::pow(x_max, k.alpha) * (1.0 + 1e-12)) {
    if (k.a == 0.0) return;  // Q1, Q2 are constants in that case
    const int n = 1200;
    dy_ = y_max_ / (n - 1);
    q1_.resize(n);
    q2_.resize(n);
    for (int i = 0; i < n; ++i) {
      const double arg = -k.a * (dy_ * i);
      const double e1 = ml3_auto(MLParams{k.alpha, k.mu + 1.0, k.nu}, arg);
      const double e2 = ml3_auto(MLParams{k.alpha, k.mu + 2.0, k.nu}, arg);
      q1_[static_cast<std::size_t>(i)] = e1;
      q2_[static_cast<std::size_t>(i)] = e1 - e2;
    }
  }

  double k1(double x) const {
    if (x == 0.0) return 0.0;
    const double y = std::pow(x, kernel_.alpha);
    return std::pow(x, kernel_.mu) * interp(q1_, y, rgamma(kernel_.mu + 1.0));
  }

  double k2(double x) const {
    if (x == 0.0) return 0.0;
    const double y = std::pow(x, kernel_.alpha);
    return std::pow(x, kernel_.mu + 1.0) *
           interp(q2_, y,
                  rgamma(kernel_.mu + 1.0) - rgamma(kernel_.mu + 2.0));
  }

 private:
  double interp(const std::vector<double>& q, double y,
                double constant_value) const {
    if (q.empty()) return constant_value;  // a == 0
    const auto n = static_cast<long>(q.size());
    double u = y / dy_;
    long j = static_cast<long>(u);
    j = std::max(1l, std::min(j, n - 3));
    const double s = u - static_cast<double>(j);
    const double p0 = q[static_cast<std::size_t>(j - 1)];
    const double p1 = q[static_cast<std::size_t>(j)];
    const double p2 = q[static_cast<std::size_t>(j + 1)];
    const double p3 = q[static_cast<std::size_t>(j + 2)];
    return p1 + 0.5 * s * (p2 - p0 +
                           s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                s * (3.0 * (p1 - p2) + p3 - p0)));
  }

  PrabhakarKernel kernel_;
  double y_max_;
  double dy_ = 1.0;
  std::vector<double> q1_;
  std::vector<double> q2_;
};

// Product-integration sweep with piecewise-linear f. For j < i the window
// [t_i - t_{j+1}, t_i - t_j] contributes
//   f_j dK1 + (f_{j+1} - f_j) [w2 dK1 - dK2]/h_j,
// and the leading window makes the step implicit in f_i.
std::vector<double> product_integration(const VolterraProblem& p,
                                        std::span<const double> grid) {
  const std::size_t n = grid.size();
  std::vector<double> f(n, p.f0);

  const MomentEvaluator moments(p.kernel, grid.back() - grid.front());
  auto k1_at = [&](std::size_t i, std::size_t j) {
    return moments.k1(grid[i] - grid[j]);
  };
  auto k2_at = [&](std::size_t i, std::size_t j) {
    return moments.k2(grid[i] - grid[j]);
  };

  const double B = p.coupling;
  for (std::size_t i = 1; i < n; ++i) {
    double lag = 0.0;  // contributions of windows j = 0 .. i-2
    for (std::size_t j = 0; j + 1 < i; ++j) {
      const double hj = grid[j + 1] - grid[j];
      const double w2 = grid[i] - grid[j];
      const double dk1 = k1_at(i, j) - k1_at(i, j + 1);
      const double dk2 = k2_at(i, j) - k2_at(i, j + 1);
      lag += f[j] * dk1 + (f[j + 1] - f[j]) * (w2 * dk1 - dk2) / hj;
    }
    // Leading window j = i-1: w in [0, h], implicit in f_i.
    const double h = grid[i] - grid[i - 1];
    const double dk1 = k1_at(i, i - 1);
    const double dk2 = k2_at(i, i - 1);
    const double c = dk2 / h;  // weight of (f_i - f_{i-1})... see below
    // integral over the leading window = f_{i-1} dk1 + (f_i - f_{i-1}) (h dk1 - dk2)/h
    const double lead = (h * dk1 - dk2) / h;
    const double denom = 1.0 + B * lead;
    const double rhs = p.f0 - B * (lag + f[i - 1] * (dk1 - lead));
    (void)c;
    if (denom == 0.0) {
      throw GridTooCoarse("solve_integral_eq1: singular implicit step");
    }
    f[i] = rhs / denom;
    if (!std::isfinite(f[i])) {
      throw GridTooCoarse("solve_integral_eq1: non-finite iterate");
    }
  }
  return f;
}

// 4th-order finite-difference derivative; one-sided at the ends of
// [lo, hi] so f is never sampled outside its domain.
double derivative_fd(const std::function<double(double)>& f, double x,
                     double h, double lo, double hi) {
  if (x - 2.0 * h >= lo && x + 2.0 * h <= hi) {
    return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) +
            f(x - 2.0 * h)) /
           (12.0 * h);
  }
  if (x + 4.0 * h <= hi) {
    return (-25.0 * f(x) + 48.0 * f(x + h) - 36.0 * f(x + 2.0 * h) +
            16.0 * f(x + 3.0 * h) - 3.0 * f(x + 4.0 * h)) /
           (12.0 * h);
  }
  return (25.0 * f(x) - 48.0 * f(x - h) + 36.0 * f(x - 2.0 * h) -
          16.0 * f(x - 3.0 * h) + 3.0 * f(x - 4.0 * h)) /
         (12.0 * h);
}

}  // namespace

const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::series_f1:
      return "series_f1";
    case SolveMethod::series_f2:
      return "series_f2";
    case SolveMethod::closed_cc:
      return "closed_cc";
    case SolveMethod::integral_rep:
      return "integral_rep";
    case SolveMethod::laplace_numeric:
      return "laplace_numeric";
    case SolveMethod::integral_eq1:
      return "integral_eq1";
  }
  return "unknown";
}

SeriesSolveResult solve_series_f1_detailed(const VolterraProblem& p, double t,
                                           int max_terms, double tol) {
  if (!(t > 0.0)) throw InvalidParam("solve_series_f1: t must be > 0");
  if (max_terms < 1) {
    throw InvalidParam("solve_series_f1: max_terms must be >= 1");
  }
  const PrabhakarKernel& k = p.kernel;
  const long double log_B = std::log(static_cast<long double>(p.coupling));
  const long double log_t = std::log(static_cast<long double>(t));

  // a = 0 keeps the whole term in closed form,
  // (-B)^r t^{mu r} / Gamma(1 + mu r), assembled in extended precision so
  // the alternating hump near the f1/f2 handoff does not eat the budget.
  auto term_at = [&](int r) -> long double {
    const long double sign = (r % 2 == 0) ? 1.0L : -1.0L;
    if (k.a == 0.0) {
      const SignedLogGammaL g = log_gamma_signed_l(1.0 + k.mu * r);
      return sign * g.sign *
             std::exp(r * log_B + k.mu * r * log_t - g.log_abs);
    }
    const MLParams params{k.alpha, 1.0 + k.mu * r, k.nu * r};
    return sign * std::exp(r * log_B) *
           static_cast<long double>(prabhakar_auto(params, -k.a, t));
  };

  long double sum = 0.0L;
  double max_term = 0.0;
  int streak = 0;
  long double prev_mag = std::numeric_limits<long double>::infinity();
  for (int r = 0; r < max_terms; ++r) {
    const long double term = term_at(r);
    if (!std::isfinite(static_cast<double>(term))) {
      throw NonConvergent(
          "solve_series_f1: term overflow; the f2 regime applies");
    }
    sum += term;
    const long double mag = std::fabs(term);
    if (static_cast<double>(mag) > max_term) {
      max_term = static_cast<double>(mag);
    }
    const long double sum_mag = std::fabs(sum);
    if (sum_mag > 0.0L && mag <= tol * sum_mag && mag <= prev_mag) {
      if (++streak >= 3) {
        const double value = static_cast<double>(sum);
        if (max_term > kF1HumpGuard * std::max(std::fabs(value), 1e-300)) {
          throw NonConvergent(
              "solve_series_f1: alternating hump exceeds the "
              "double-precision budget; the f2 regime applies");
        }
        const double tail = std::fabs(static_cast<double>(term_at(r + 1)));
        return {value * p.f0, r + 1, tail, max_term * std::fabs(p.f0)};
      }
    } else {
      streak = 0;
    }
    prev_mag = mag;
  }
  throw NonConvergent(
      "solve_series_f1: terms still significant at the cap; the f2 regime "
      "applies");
}

double solve_series_f1(const VolterraProblem& p, double t, int max_terms) {
  return solve_series_f1_detailed(p, t, max_terms).value;
}

SeriesSolveResult solve_series_f2_detailed(const VolterraProblem& p, double t,
                                           int max_terms, double tol) {
  if (!(t > 0.0)) throw InvalidParam("solve_series_f2: t must be > 0");
  if (max_terms < 1) {
    throw InvalidParam("solve_series_f2: max_terms must be >= 1");
  }
  if (p.coupling == 0.0) {
    throw InvalidParam("solve_series_f2: the expansion is in 1/B");
  }
  const PrabhakarKernel& k = p.kernel;
  const long double log_t = std::log(static_cast<long double>(t));
  const long double log_B = std::log(static_cast<long double>(p.coupling));

  long double sum = 0.0L;
  long double best_sum = 0.0L;
  double best_min = std::numeric_limits<double>::infinity();
  int best_terms = 0;
  double max_term = 0.0;
  double prev_mag = std::numeric_limits<double>::infinity();
  int streak = 0;
  int grow_streak = 0;

  for (int r = 0; r < max_terms; ++r) {
    // term_r = (-1)^r B^{-1-r} t^{-mu(1+r)} E^{-nu(1+r)}_{alpha,1-mu(1+r)}(-a t^alpha)
    const double mu_r = 1.0 - k.mu * (1.0 + r);
    const long double log_mag =
        -(1.0L + r) * log_B - k.mu * (1.0L + r) * log_t;
    long double term;
    if (k.a == 0.0) {
      // closed term: the inner function collapses to 1/Gamma(1 - mu(1+r))
      const SignedLogGammaL g = log_gamma_signed_l(mu_r);
      term = ((r % 2 == 0) ? 1.0L : -1.0L) * g.sign *
             std::exp(log_mag - g.log_abs);
    } else {
      const double nu_r = -k.nu * (1.0 + r);
      const auto inner = detail::e3_series(k.alpha, mu_r, nu_r,
                                           -k.a * std::pow(t, k.alpha), 1e-16,
                                           kSeriesTermCap);
      if (!inner.converged ||
          inner.max_term >
              kInnerCleanGuard * std::max(std::fabs(inner.value), 1e-300)) {
        throw NonConvergent(
            "solve_series_f2: inner Prabhakar series is not clean; the f1 "
            "regime applies");
      }
      term = ((r % 2 == 0) ? 1.0L : -1.0L) * std::exp(log_mag) *
             static_cast<long double>(inner.value);
    }
    if (!std::isfinite(static_cast<double>(term))) {
      throw NonConvergent("solve_series_f2: term overflow; the f1 regime "
                          "applies");
    }
    sum += term;
    const double mag = std::fabs(static_cast<double>(term));
    if (mag > max_term) max_term = mag;

    const double prev_nonzero = prev_mag;  // magnitude of last nonzero term
    if (mag > 0.0) {
      if (mag < best_min) {
        best_min = mag;
        best_sum = sum;
        best_terms = r + 1;
      }
      if (prev_nonzero < std::numeric_limits<double>::infinity()) {
        grow_streak = (mag > prev_nonzero) ? grow_streak + 1 : 0;
      }
      prev_mag = mag;
    }

    const double sum_mag = static_cast<double>(std::fabs(sum));
    if (sum_mag > 0.0 && mag <= tol * sum_mag && mag <= prev_nonzero) {
      if (++streak >= 3) {
        return {static_cast<double>(sum) * p.f0, r + 1, mag,
                max_term * std::fabs(p.f0)};
      }
    } else {
      streak = 0;
    }

    // Past the optimal truncation the asymptotic tail only diverges; stop
    // at the recorded minimum if it is already negligible.
    if (grow_streak >= 4) {
      const double ref =
          std::max(static_cast<double>(std::fabs(best_sum)), 1e-300);
      if (best_min <= 1e-7 * ref) {
        return {static_cast<double>(best_sum) * p.f0, best_terms, best_min,
                max_term * std::fabs(p.f0)};
      }
      throw NonConvergent(
          "solve_series_f2: asymptotic tail turned before reaching the "
          "tolerance; the f1 regime applies");
    }
  }
  // Cap reached: accept the optimal truncation if negligible.
  const double ref = std::max(static_cast<double>(std::fabs(best_sum)),
                              1e-300);
  if (best_terms > 0 && best_min <= 1e-7 * ref) {
    return {static_cast<double>(best_sum) * p.f0, best_terms, best_min,
            max_term * std::fabs(p.f0)};
  }
  throw NonConvergent(
      "solve_series_f2: terms still significant at the cap; the f1 regime "
      "applies");
}

double solve_series_f2(const VolterraProblem& p, double t, int max_terms) {
  return solve_series_f2_detailed(p, t, max_terms).value;
}

double solve_closed_cc(const VolterraProblem& p, double t) {
  if (!nearly(p.kernel.nu, 1.0) || !nearly(p.kernel.mu, p.kernel.alpha)) {
    throw InvalidParam(
        "solve_closed_cc: closed form needs the nu = 1, mu = alpha kernel");
  }
  if (t < 0.0) throw InvalidParam("solve_closed_cc: t must be >= 0");
  if (t == 0.0) return p.f0;
  const double A = p.coupling + p.kernel.a;
  const double ml =
      ml3_auto(MLParams{p.kernel.alpha, 1.0, 1.0},
               -A * std::pow(t, p.kernel.alpha));
  return p.coupling / A * (ml - 1.0) * p.f0 + p.f0;
}

double solve_integral_rep(const VolterraProblem& p, double t) {
  const PrabhakarKernel& k = p.kernel;
  if (!nearly(k.mu, k.alpha * k.nu)) {
    throw InvalidParam(
        "solve_integral_rep: representation needs mu = alpha*nu");
  }
  if (!(t > 0.0)) throw InvalidParam("solve_integral_rep: t must be > 0");

  const double B = p.coupling;
  const double alpha = k.alpha;
  const double nu = k.nu;
  const double a = k.a;

  auto integrand = [&](double xi) {
    const double phi = (alpha == 1.0)
                           ? (xi < t ? 1.0 : (xi == t ? 0.5 : 0.0))
                           : levy_cdf(alpha, xi, t);
    if (phi == 0.0) return 0.0;
    return std::exp(-a * xi) * e1_nu0(nu, B, xi) * phi;
  };

  // Tail cut: Phi_alpha(xi,t) decays stretched-exponentially in xi (the
  // evaluator returns exact zeros past the exponent-25 point), at a > 0 the
  // explicit exponential may cut earlier, and the Mittag-Leffler factor
  // alone bounds the tail at xi ~ (1e12/B)^{1/(1+nu)}.
  double xi_cut;
  if (alpha == 1.0) {
    xi_cut = t;
  } else {
    xi_cut = std::pow(t, alpha) * std::pow(alpha, -alpha) *
             std::pow(25.0 / (1.0 - alpha), 1.0 - alpha);
  }
  if (a > 0.0) xi_cut = std::min(xi_cut, 55.0 / a);
  xi_cut = std::min(xi_cut, std::pow(1e12 / B, 1.0 / (1.0 + nu)));

  QuadratureOptions opts;
  opts.abs_tol = 1e-10;
  opts.rel_tol = 1e-8;
  opts.max_subdivisions = 300;

  const double split = std::min(1.0, xi_cut);
  double integral = integrate_power_endpoint(integrand, split, nu, opts);
  if (xi_cut > split) integral += integrate(integrand, split, xi_cut, opts);
  return p.f0 * (1.0 + integral);
}

LaplaceImage relaxation_image(const VolterraProblem& p) {
  const PrabhakarKernel kernel = p.kernel;
  const double B = p.coupling;
  const double f0 = p.f0;
  return LaplaceImage{
      [kernel, B, f0](std::complex<double> s) {
        const std::complex<double> khat = kernel.image(s);
        return khat * f0 / (s * khat + B);
      },
      "relaxation response image"};
}

double solve_laplace_numeric(const VolterraProblem& p, double t,
                             InversionMethod method, int n_nodes) {
  if (!(t > 0.0)) throw InvalidParam("solve_laplace_numeric: t must be > 0");
  return inverse_laplace(relaxation_image(p), t, method, n_nodes);
}

double kappa_memory(const PrabhakarKernel& kernel, double t) {
  if (!(t > 0.0)) throw InvalidParam("kappa_memory: t must be > 0");
  const MLParams p{kernel.alpha, kernel.mu, kernel.nu};
  return std::pow(t, kernel.mu - 1.0) *
         ml3_auto(p, -kernel.a * std::pow(t, kernel.alpha));
}

RelaxationCurve solve_integral_eq1(const VolterraProblem& p,
                                   std::span<const double> t_grid) {
  if (t_grid.size() < 2) {
    throw InvalidParam("solve_integral_eq1: need at least two grid points");
  }
  if (t_grid.front() != 0.0) {
    throw InvalidParam("solve_integral_eq1: the grid must start at t = 0");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw InvalidParam("solve_integral_eq1: grid must be ascending");
    }
  }

  const std::vector<double> coarse = product_integration(p, t_grid);

  // Step-halving guard: insert midpoints, resolve, compare at the original
  // nodes.
  std::vector<double> fine_grid;
  fine_grid.reserve(2 * t_grid.size() - 1);
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    fine_grid.push_back(t_grid[i]);
    fine_grid.push_back(0.5 * (t_grid[i] + t_grid[i + 1]));
  }
  fine_grid.push_back(t_grid.back());
  const std::vector<double> fine = product_integration(p, fine_grid);

  double max_change = 0.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    max_change =
        std::max(max_change, std::fabs(fine[2 * i] - coarse[i]));
  }
  if (max_change > kHalvingGate) {
    throw GridTooCoarse(
        "solve_integral_eq1: step-halving changed the solution by more "
        "than 1e-4");
  }

  RelaxationCurve curve;
  curve.t_grid.assign(t_grid.begin(), t_grid.end());
  curve.values.resize(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    curve.values[i] = fine[2 * i];
  }
  curve.method = SolveMethod::integral_eq1;
  return curve;
}

double caputo_derivative(const std::function<double(double)>& f, double alpha,
                         double t, double quad_abs_tol) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidParam("caputo_derivative: alpha must lie in (0, 1)");
  }
  if (!(t > 0.0)) throw InvalidParam("caputo_derivative: t must be > 0");
  if (!(quad_abs_tol > 0.0)) {
    throw InvalidParam("caputo_derivative: quad_abs_tol must be > 0");
  }

  QuadratureOptions opts;
  opts.abs_tol = quad_abs_tol;
  opts.rel_tol = 10.0 * quad_abs_tol;
  opts.max_subdivisions = 400;

  // Split at c = t/2. Below c the derivative may be merely integrable
  // (f' ~ xi^{d-1}), so that part is integrated by parts and only samples f
  // itself:
  //   int_0^c (t-xi)^{-a} f' dxi
  //     = (t-c)^{-a} f(c) - t^{-a} f(0) - a int_0^c (t-xi)^{-a-1} f dxi.
  const double c = 0.5 * t;
  auto by_parts_tail = [&](double xi) {
    return std::pow(t - xi, -alpha - 1.0) * f(xi);
  };
  const double lower = std::pow(t - c, -alpha) * f(c) -
                       std::pow(t, -alpha) * f(0.0) -
                       alpha * integrate(by_parts_tail, 0.0, c, opts);

  // Above c the kernel endpoint is removed by xi = t - w^{1/(1-a)} and f'
  // is sampled by high-order differences on the smooth interior. The step
  // follows the 1e-4 t rule: small enough for the O(h^4) truncation, large
  // enough that evaluation noise in f does not swamp the differences.
  const double h = std::max(1e-4 * t, 1e-8);
  const double q = 1.0 / (1.0 - alpha);
  auto g = [&](double w) {
    const double xi = std::min(t - std::pow(w, q), t);
    return derivative_fd(f, xi, h, 0.25 * t, t);
  };
  const double upper =
      q * integrate(g, 0.0, std::pow(t - c, 1.0 - alpha), opts);

  return (lower + upper) * rgamma(1.0 - alpha);
}

std::vector<double> graded_grid(double t_max, std::size_t n, double power) {
  if (n < 2) throw InvalidParam("graded_grid: need at least two points");
  if (!(t_max > 0.0) || !(power >= 1.0)) {
    throw InvalidParam("graded_grid: t_max > 0 and power >= 1 required");
  }
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) {
    g[j] = t_max * std::pow(static_cast<double>(j) / (n - 1), power);
  }
  return g;
}

double rl_fractional_integral(const std::function<double(double)>& f,
                              double eta, double t) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw InvalidParam("rl_fractional_integral: eta must lie in (0, 1)");
  }
  if (!(t > 0.0)) throw InvalidParam("rl_fractional_integral: t must be > 0");

  const double q = 1.0 / eta;
  auto g = [&](double w) { return f(t - std::pow(w, q)); };
  QuadratureOptions opts;
  opts.abs_tol = 1e-10;
  opts.rel_tol = 1e-9;
  opts.max_subdivisions = 400;
  const double integral = integrate(g, 0.0, std::pow(t, eta), opts);
  return integral * rgamma(1.0 + eta);
}

}  // namespace mlrelax
