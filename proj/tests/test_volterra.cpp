#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "mlrelax/gamma.hpp"
#include "mlrelax/quadrature.hpp"
#include "mlrelax/volterra.hpp"

using namespace mlrelax;

namespace {

// Cole-Cole-shaped reference problem with residual polarization (a > 0).
VolterraProblem cc_reference() {
  return VolterraProblem({0.75, 1.0, 0.75, 3.0}, 1.25, 1.0);
}

std::vector<double> uniform_grid(double t_max, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return g;
}

}  // namespace

TEST_CASE("f1 series basics") {
  const auto p = cc_reference();
  // t -> 0+ keeps only the r = 0 term
  CHECK(solve_series_f1(p, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  // nu = 1, mu = alpha: the series sums to the closed form
  for (double t : {0.01, 0.1, 0.5, 2.0, 10.0}) {
    CHECK(solve_series_f1(p, t, 400) ==
          doctest::Approx(solve_closed_cc(p, t)).epsilon(1e-10));
  }
  // general-kernel point against the universal route
  const VolterraProblem q({0.75, 0.5, 0.375, 1.0}, 1.0);
  CHECK(solve_series_f1(q, 0.5) ==
        doctest::Approx(solve_laplace_numeric(q, 0.5)).epsilon(1e-6));
  CHECK_THROWS_AS(solve_series_f1(p, -1.0), InvalidParam);
}

TEST_CASE("f2 series approaches the residual polarization") {
  // a < B so the 1/B expansion converges at large t
  const VolterraProblem p({0.6, 1.0, 0.6, 0.5}, 1.25);
  const double limit = 0.5 / (1.25 + 0.5);
  double prev_gap = 1.0;
  for (double t : {50.0, 100.0, 400.0}) {
    const double f2 = solve_series_f2(p, t, 400);
    CHECK(f2 == doctest::Approx(solve_closed_cc(p, t)).epsilon(1e-9));
    const double gap = std::fabs(f2 - limit);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap <= 0.01);
  // small-t side is the f1 regime
  CHECK_THROWS_AS(solve_series_f2(p, 0.05, 400), NonConvergent);
}

TEST_CASE("f1/f2 overlap windows (series handoff)") {
  struct Window {
    VolterraProblem problem;
    double ts[3];
  };
  const std::vector<Window> windows{
      {VolterraProblem({0.75, 1.0, 0.75, 0.0}, 1.25), {13.0, 14.0, 15.0}},
      {VolterraProblem({2.0 / 3.0, 1.0, 2.0 / 3.0, 0.0}, 1.0),
       {18.0, 18.5, 19.0}},
      {VolterraProblem({0.6, 0.75, 0.45, 0.0}, 1.0), {17.0, 18.0, 19.0}},
  };
  for (const auto& w : windows) {
    for (double t : w.ts) {
      const double f1 = solve_series_f1(w.problem, t, 400);
      const double f2 = solve_series_f2(w.problem, t, 400);
      CHECK(std::fabs(f1 - f2) <= 1e-8);
    }
  }
}

TEST_CASE("f2 against the universal route past the handoff") {
  const VolterraProblem p({0.75, 1.0, 0.75, 0.0}, 1.25);
  for (double t : {22.0, 30.0, 60.0}) {
    CHECK(solve_series_f2(p, t, 400) ==
          doctest::Approx(solve_laplace_numeric(p, t)).epsilon(1e-8));
  }
  // and f1 honestly refuses out there
  CHECK_THROWS_AS(solve_series_f1(p, 30.0, 400), NonConvergent);
}

TEST_CASE("closed form for the nu=1, mu=alpha kernel") {
  const auto p = cc_reference();
  CHECK(solve_closed_cc(p, 0.0) == doctest::Approx(1.0));
  // a = 0: plain one-parameter Mittag-Leffler decay
  const VolterraProblem pure({0.75, 1.0, 0.75, 0.0}, 1.0);
  for (double t : {0.3, 1.0, 5.0}) {
    CHECK(solve_closed_cc(pure, t) ==
          doctest::Approx(ml3({0.75, 1.0, 1.0}, -std::pow(t, 0.75)))
              .epsilon(1e-12));
  }
  // long-time limit a/(B+a): the reference flattens toward 3/4.25
  CHECK(std::fabs(solve_closed_cc(p, 300.0) - 3.0 / 4.25) <= 2e-3);
  // wrong kernel shape is rejected
  const VolterraProblem wrong({0.75, 0.5, 0.75, 0.0}, 1.0);
  CHECK_THROWS_AS(solve_closed_cc(wrong, 1.0), InvalidParam);
}

TEST_CASE("integral representation route (mu = alpha nu)") {
  // alpha = 1: the primitive is a step, the integral truncates at xi = t,
  // and the problem is the classical a > 0 exponential relaxation.
  const VolterraProblem expo({1.0, 1.0, 1.0, 0.8}, 1.3);
  for (double t : {0.4, 1.0, 2.5}) {
    CHECK(solve_integral_rep(expo, t) ==
          doctest::Approx(solve_closed_cc(expo, t)).epsilon(1e-7));
  }
  // nu = 1, mu = alpha family against the closed form
  const auto p = cc_reference();
  for (double t : {0.1, 1.0, 5.0}) {
    CHECK(solve_integral_rep(p, t) ==
          doctest::Approx(solve_closed_cc(p, t)).epsilon(1e-5));
  }
  // general (alpha, nu) pair against the universal route
  const VolterraProblem q({2.0 / 3.0, 0.75, 0.5, 1.0}, 1.0);
  CHECK(solve_integral_rep(q, 1.0) ==
        doctest::Approx(solve_laplace_numeric(q, 1.0)).epsilon(1e-5));
  // shape guard
  CHECK_THROWS_AS(solve_integral_rep(VolterraProblem({0.6, 1.0, 0.5, 0.0},
                                                     1.0),
                                     1.0),
                  InvalidParam);
}

TEST_CASE("universal Laplace route") {
  const auto p = cc_reference();
  for (double t : {0.01, 0.1, 1.0, 5.0, 20.0}) {
    CHECK(solve_laplace_numeric(p, t) ==
          doctest::Approx(solve_closed_cc(p, t)).epsilon(1e-6));
  }
  // a = 0, mu = alpha*nu: pure Cole-Cole response E_mu(-B t^mu)
  const VolterraProblem pure({0.8, 0.75, 0.6, 0.0}, 0.9);
  for (double t : {0.2, 1.0, 4.0}) {
    CHECK(solve_laplace_numeric(pure, t) ==
          doctest::Approx(ml3_auto({0.6, 1.0, 1.0},
                                   -0.9 * std::pow(t, 0.6)))
              .epsilon(1e-8));
  }
  // Talbot/Stehfest self-consistency on a general kernel
  const VolterraProblem q({0.7, 0.6, 0.55, 0.7}, 1.1);
  for (double t : {0.3, 1.0, 3.0}) {
    CHECK(solve_laplace_numeric(q, t, InversionMethod::both) ==
          doctest::Approx(solve_laplace_numeric(q, t)).epsilon(1e-12));
  }
}

TEST_CASE("memory kernel of the inhomogeneous form") {
  // a = 0: power law t^{mu-1}/Gamma(mu)
  const PrabhakarKernel half(0.5, 1.0, 0.5, 0.0);
  CHECK(kappa_memory(half, 1.0) ==
        doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-13));
  const PrabhakarKernel one(1.0, 1.0, 1.0, 0.0);
  for (double t : {0.2, 1.0, 9.0}) {
    CHECK(kappa_memory(one, t) == doctest::Approx(1.0).epsilon(1e-13));
  }
  // a > 0: forward transform of kappa times s k^ returns 1
  const PrabhakarKernel k(0.75, 0.8, 0.65, 1.5);
  auto kappa = [&](double t) { return kappa_memory(k, t); };
  for (double s : {1.5, 3.0}) {
    const auto ks = forward_laplace(kappa, {s, 0.0}, k.mu);
    const auto product = ks * s * k.image({s, 0.0});
    CHECK(std::abs(product - 1.0) <= 1e-5);
  }
}

TEST_CASE("product-integration solution of the inhomogeneous equation") {
  // a = 0: kappa is the power kernel and the solution is the Cole-Cole
  // curve; the t^mu kink wants the graded mesh
  const VolterraProblem pure({0.9, 0.7, 0.6, 0.0}, 1.0);
  const auto grid = graded_grid(5.0, 101, 2.5);
  const auto curve = solve_integral_eq1(pure, grid);
  CHECK(curve.method == SolveMethod::integral_eq1);
  CHECK(curve.values.front() == doctest::Approx(1.0));
  for (std::size_t i = 5; i < grid.size(); i += 20) {
    const double expected =
        ml3_auto({0.6, 1.0, 1.0}, -std::pow(grid[i], 0.6));
    CHECK(std::fabs(curve.values[i] - expected) <= 1e-4);
  }
  // nu = 1, mu = alpha with a > 0 against the closed form; the t^alpha
  // kink at zero wants a graded mesh
  const auto p = cc_reference();
  const auto grid2 = graded_grid(10.0, 201, 2.5);
  const auto curve2 = solve_integral_eq1(p, grid2);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid2.size(); ++i) {
    worst = std::max(worst, std::fabs(curve2.values[i] -
                                      solve_closed_cc(p, grid2[i])));
  }
  CHECK(worst <= 1e-4);
  // B = 0 decouples the memory entirely
  const VolterraProblem frozen({0.6, 1.0, 0.6, 0.0}, 0.0);
  const auto curve3 = solve_integral_eq1(frozen, uniform_grid(2.0, 21));
  for (double v : curve3.values) CHECK(v == doctest::Approx(1.0));
  // grid validation
  const std::vector<double> bad1{0.5, 1.0};
  CHECK_THROWS_AS(solve_integral_eq1(p, bad1), InvalidParam);
  const std::vector<double> bad2{0.0, 1.0, 0.5};
  CHECK_THROWS_AS(solve_integral_eq1(p, bad2), InvalidParam);
}

TEST_CASE("Caputo derivative") {
  auto constant = [](double) { return 4.2; };
  CHECK(caputo_derivative(constant, 0.5, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-10));
  // f = t: t^{1-alpha}/Gamma(2-alpha)
  auto linear = [](double t) { return t; };
  for (double alpha : {0.3, 0.5, 0.8}) {
    for (double t : {0.5, 1.0, 2.0}) {
      const double expected = std::pow(t, 1.0 - alpha) * rgamma(2.0 - alpha);
      CHECK(caputo_derivative(linear, alpha, t) ==
            doctest::Approx(expected).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(caputo_derivative(linear, 1.2, 1.0), InvalidParam);
  CHECK_THROWS_AS(caputo_derivative(linear, 0.5, 0.0), InvalidParam);
}

TEST_CASE("Caputo eigenfunction property (d = 0)") {
  // E_{alpha}(a t^alpha) is the Caputo eigenfunction with eigenvalue a: the
  // initial-value correction of the Caputo form cancels the
  // t^{-alpha}/Gamma(1-alpha) term of the Riemann-Liouville derivative
  // exactly when the weight power d vanishes.
  struct Tuple {
    double alpha, a, t;
  };
  const std::vector<Tuple> tuples{
      {0.5, -1.0, 1.0}, {0.75, -0.5, 0.8}, {0.6, 1.0, 1.2},
      {0.8, -2.0, 1.5}, {0.7, 0.5, 0.6},
  };
  for (const auto& c : tuples) {
    auto f = [&](double x) {
      if (x <= 0.0) return 1.0;
      return ml3_auto({c.alpha, 1.0, 1.0}, c.a * std::pow(x, c.alpha));
    };
    const double lhs = caputo_derivative(f, c.alpha, c.t);
    const double rhs = c.a * f(c.t);
    CHECK(std::fabs(lhs - rhs) <= 1e-4 * std::max(1.0, std::fabs(rhs)));
  }
}

TEST_CASE("Caputo of the weighted function carries the extra power term") {
  // For d != 0 the same computation picks up t^{d-alpha}/Gamma(1+d-alpha)
  // from the r = 0 series term (whose Caputo derivative does not vanish);
  // the finite-difference-free quadrature reproduces it.
  struct Tuple {
    double alpha, d, a, t;
  };
  const std::vector<Tuple> tuples{
      {0.5, 0.6, -1.0, 1.0}, {0.75, 1.0, -0.5, 0.8}, {0.6, 0.4, 1.0, 1.2},
  };
  for (const auto& c : tuples) {
    auto f = [&](double x) {
      if (x <= 0.0) return 0.0;
      return std::pow(x, c.d) *
             ml3_auto({c.alpha, 1.0 + c.d, 1.0}, c.a * std::pow(x, c.alpha));
    };
    const double lhs = caputo_derivative(f, c.alpha, c.t);
    const double rhs = c.a * f(c.t) +
                       std::pow(c.t, c.d - c.alpha) *
                           rgamma(1.0 + c.d - c.alpha);
    CHECK(std::fabs(lhs - rhs) <= 1e-4 * std::max(1.0, std::fabs(rhs)));
  }
}

TEST_CASE("Riemann-Liouville fractional integral") {
  auto one = [](double) { return 1.0; };
  auto linear = [](double t) { return t; };
  for (double eta : {0.25, 0.5, 0.75}) {
    for (double t : {0.4, 1.0, 3.0}) {
      CHECK(rl_fractional_integral(one, eta, t) ==
            doctest::Approx(std::pow(t, eta) * rgamma(1.0 + eta))
                .epsilon(1e-9));
      CHECK(rl_fractional_integral(linear, eta, t) ==
            doctest::Approx(std::pow(t, 1.0 + eta) * rgamma(2.0 + eta))
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("fractional semigroup: Caputo derivative undoes the integral") {
  // Smooth polynomial f; its order-eta integral in closed form feeds the
  // Caputo quadrature, which must return f.
  const double c0 = 1.0, c1 = 0.5, c2 = 0.25;
  auto f = [&](double t) { return c0 + c1 * t + c2 * t * t; };
  for (double eta : {0.4, 0.7}) {
    auto integral_closed = [&](double t) {
      if (t <= 0.0) return 0.0;
      return c0 * std::pow(t, eta) * rgamma(1.0 + eta) +
             c1 * std::pow(t, 1.0 + eta) * rgamma(2.0 + eta) +
             c2 * 2.0 * std::pow(t, 2.0 + eta) * rgamma(3.0 + eta);
    };
    for (double t : {0.5, 1.5}) {
      // quadrature route agrees with the closed integral
      CHECK(rl_fractional_integral(f, eta, t) ==
            doctest::Approx(integral_closed(t)).epsilon(1e-9));
      // and the Caputo derivative recovers f
      CHECK(caputo_derivative(integral_closed, eta, t) ==
            doctest::Approx(f(t)).epsilon(1e-5));
    }
  }
}

TEST_CASE("governing-equation residual along the closed solution") {
  // Caputo form: ^C D^alpha f + (B+a) f - a f0 = 0.
  const auto p = cc_reference();
  auto f = [&](double t) { return solve_closed_cc(p, t); };
  for (double t : {0.5, 1.0, 3.0}) {
    // f carries evaluator noise, so the Caputo quadrature runs at a matched
    // tolerance
    const double residual = caputo_derivative(f, 0.75, t, 1e-6) +
                            (p.coupling + p.kernel.a) * f(t) -
                            p.kernel.a * p.f0;
    CHECK(std::fabs(residual) <= 1e-4);
  }
}

TEST_CASE("memory-convolution residual of the integro-differential form") {
  // integral_0^t k(t-xi) f'(xi) dxi + B f(t) = 0 for the general kernel,
  // solved by the universal route; derivative by central differences and
  // the weak singularity of k handled by the power-endpoint map.
  const VolterraProblem p({0.7, 0.6, 0.55, 0.7}, 1.1);
  auto f = [&](double t) { return solve_laplace_numeric(p, t); };
  // f' has the exact image -B f0/(s k^ + B) (response function with flipped
  // sign), so no finite differences touch the xi^{mu-1} singularity.
  auto fprime = [&](double xi) {
    auto image = [&](std::complex<double> s) {
      return -p.coupling * p.f0 /
             (s * p.kernel.image(s) + p.coupling);
    };
    return talbot_invert(image, xi);
  };
  for (double t : {0.8, 2.0}) {
    QuadratureOptions opts;
    opts.abs_tol = 1e-6;
    opts.rel_tol = 1e-6;
    opts.max_subdivisions = 300;
    // two weak singularities: k(w) ~ w^{-mu} at w = 0 and f'(xi) ~ xi^{mu-1}
    // at xi = 0; split at t/2 and remove each with its own power map
    auto near_w0 = [&](double w) {
      return p.kernel.time_domain(w) * fprime(t - w);
    };
    auto near_xi0 = [&](double xi) {
      return p.kernel.time_domain(t - xi) * fprime(xi);
    };
    const double conv =
        integrate_power_endpoint(near_w0, 0.5 * t, 1.0 - p.kernel.mu, opts) +
        integrate_power_endpoint(near_xi0, 0.5 * t, p.kernel.mu, opts);
    CHECK(std::fabs(conv + p.coupling * f(t)) <= 1e-3);
  }
}

TEST_CASE("four routes agree on the reference configuration") {
  const auto p = cc_reference();
  const auto grid = graded_grid(10.0, 201, 2.5);
  const auto eq1 = solve_integral_eq1(p, grid);
  // pairwise agreement of closed, f1, laplace, eq1 and the integral
  // representation on their shared domain
  for (std::size_t i : {1ul, 10ul, 40ul, 100ul, 200ul}) {
    const double t = grid[i];
    const double closed = solve_closed_cc(p, t);
    const double f1 = solve_series_f1(p, t, 400);
    const double lap = solve_laplace_numeric(p, t);
    const double rep = solve_integral_rep(p, t);
    CHECK(std::fabs(closed - f1) <= 1e-4);
    CHECK(std::fabs(closed - lap) <= 1e-4);
    CHECK(std::fabs(closed - rep) <= 1e-4);
    CHECK(std::fabs(closed - eq1.values[i]) <= 1e-4);
  }
  // the 1/B expansion has no convergence domain here (a^nu > B)
  CHECK_THROWS_AS(solve_series_f2(p, 5.0, 400), NonConvergent);
  CHECK_THROWS_AS(solve_series_f2(p, 50.0, 400), NonConvergent);
}

TEST_CASE("boundary values of every route") {
  const auto p = cc_reference();
  // |f - f0| ~ (B+a) t^alpha / Gamma(1+alpha) near zero; t = 1e-5 puts that
  // below the 1e-3 gate for this configuration
  const double t0 = 1e-5;
  CHECK(std::fabs(solve_closed_cc(p, t0) - 1.0) <= 1e-3);
  CHECK(std::fabs(solve_series_f1(p, t0) - 1.0) <= 1e-3);
  CHECK(std::fabs(solve_laplace_numeric(p, t0) - 1.0) <= 1e-3);
  CHECK(std::fabs(solve_integral_rep(p, t0) - 1.0) <= 1e-3);
  // long-time limit a/(B+a) f0
  const double limit = 3.0 / 4.25;
  CHECK(std::fabs(solve_laplace_numeric(p, 500.0) - limit) <= 1e-3);
}

TEST_CASE("monotone decay of the pure Cole-Cole curve") {
  const VolterraProblem pure({0.75, 1.0, 0.75, 0.0}, 1.0);
  double prev = 1.0;
  for (double t = 0.1; t <= 12.0; t += 0.1) {
    const double v = solve_closed_cc(pure, t);
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
}
