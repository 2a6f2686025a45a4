#include <doctest.h>

#include <cmath>
#include <complex>

#include "mlrelax/gamma.hpp"
#include "mlrelax/spectral.hpp"
#include "mlrelax/volterra.hpp"

using namespace mlrelax;
using cplx = std::complex<double>;

TEST_CASE("spectral function closed forms") {
  // Cole-Cole: mu = alpha*nu, a = 0, B = tau^{-mu} -> [1 + (i w tau)^mu]^{-1}
  const double mu = 0.75;
  const double tau = 0.9;
  const PrabhakarKernel cc(0.75, 1.0, mu, 0.0);
  const double B = std::pow(tau, -mu);
  for (double w : {0.01, 0.3, 2.0, 40.0}) {
    const cplx expected =
        1.0 / (1.0 + std::pow(cplx(0.0, w * tau), mu));
    const cplx got = spectral_function(cc, B, w);
    CHECK(std::abs(got - expected) <= 1e-13 * std::abs(expected));
  }
  // Debye: mu = alpha = nu = 1, a = 0 -> [1 + i w tau]^{-1}
  const PrabhakarKernel debye(1.0, 1.0, 1.0, 0.0);
  for (double w : {0.05, 1.0, 12.0}) {
    const cplx expected = 1.0 / cplx(1.0, w * tau);
    CHECK(std::abs(spectral_function(debye, 1.0 / tau, w) - expected) <=
          1e-13);
  }
  // w -> 0 with a != 0 and mu = alpha*nu: limit B/(B + a^nu) != 1
  const PrabhakarKernel res(0.75, 1.0, 0.75, 3.0);
  const cplx low = spectral_function(res, 1.25, 1e-9);
  CHECK(low.real() == doctest::Approx(1.25 / (1.25 + 3.0)).epsilon(1e-4));
  CHECK(std::fabs(low.imag()) <= 1e-3);

  CHECK_THROWS_AS(spectral_function(cc, B, 0.0), InvalidParam);
  CHECK_THROWS_AS(spectral_function(cc, -1.0, 1.0), InvalidParam);
}

TEST_CASE("spectral function equals [1 + i w k^(i w)/B]^{-1}") {
  const PrabhakarKernel k(0.6, 0.8, 0.5, 1.3);
  const double B = 0.7;
  for (double w : {0.02, 0.5, 7.0, 300.0}) {
    const cplx iw(0.0, w);
    const cplx expected = 1.0 / (1.0 + iw * k.image(iw) / B);
    CHECK(std::abs(spectral_function(k, B, w) - expected) <=
          1e-12 * std::abs(expected));
  }
}

TEST_CASE("Hermitian symmetry through the conjugate argument") {
  const PrabhakarKernel k(0.7, 0.9, 0.6, 0.4);
  const double B = 1.1;
  for (double w : {0.1, 1.0, 25.0}) {
    const cplx plus = spectral_function(k, B, w);
    // phi^(-i w) from the closed form with the conjugate argument
    const cplx miw(0.0, -w);
    const cplx minus =
        B / (B + std::pow(miw, k.mu - k.alpha * k.nu) *
                     std::pow(k.a + std::pow(miw, k.alpha), k.nu));
    CHECK(std::abs(minus - std::conj(plus)) <= 1e-13 * std::abs(plus));
  }
}

TEST_CASE("spectral grid shape") {
  const PrabhakarKernel k(0.75, 1.0, 0.75, 0.0);
  const auto s = spectral_grid_for_tau(k, 1.0, 1.0);
  CHECK(s.omega_grid.size() == s.values.size());
  CHECK(s.omega_grid.size() == 161);  // 8 decades at 20/decade, inclusive
  CHECK(s.omega_grid.front() == doctest::Approx(1e-4));
  CHECK(s.omega_grid.back() == doctest::Approx(1e4).epsilon(1e-9));
}

TEST_CASE("Jonscher exponents") {
  SUBCASE("Cole-Cole: m = 1-n = mu") {
    const double mu = 0.75;
    const double tau = 1.0;
    const PrabhakarKernel k(0.75, 1.0, mu, 0.0);
    const auto fit = jonscher_exponents(
        spectral_grid_for_tau(k, std::pow(tau, -mu), tau), tau);
    CHECK(std::fabs(fit.m - mu) <= 0.02);
    CHECK(std::fabs(fit.one_minus_n - mu) <= 0.02);
  }
  SUBCASE("mu = alpha nu with a != 0: the forbidden m = 0") {
    const PrabhakarKernel k(0.75, 1.0, 0.75, 1.0);
    const auto fit =
        jonscher_exponents(spectral_grid_for_tau(k, 1.0, 1.0), 1.0);
    CHECK(std::fabs(fit.m) <= 0.02);
    CHECK(std::fabs(fit.one_minus_n - 0.75) <= 0.02);
  }
  SUBCASE("general kernel: (m, 1-n) = (mu - alpha nu, mu)") {
    // mu = 0.9, alpha nu = 0.5 via alpha = 0.8, nu = 0.625
    const PrabhakarKernel k(0.8, 0.625, 0.9, 1.0);
    const auto fit =
        jonscher_exponents(spectral_grid_for_tau(k, 1.0, 1.0), 1.0);
    CHECK(std::fabs(fit.m - 0.4) <= 0.02);
    CHECK(std::fabs(fit.one_minus_n - 0.9) <= 0.02);
  }
  SUBCASE("grid must span two decades each side") {
    const PrabhakarKernel k(0.75, 1.0, 0.75, 0.0);
    const auto narrow = spectral_grid(k, 1.0, 0.5, 50.0);
    CHECK_THROWS_AS(jonscher_exponents(narrow, 1.0), GridTooNarrow);
  }
}

TEST_CASE("Laplace exponent and the kappa duality") {
  // a = 0: Psi(s) = s^mu
  const PrabhakarKernel k0(0.6, 0.8, 0.55, 0.0);
  for (const cplx s : {cplx(0.5, 0.0), cplx(2.0, 1.0)}) {
    CHECK(std::abs(laplace_exponent(k0, s) - std::pow(s, 0.55)) <= 1e-13);
  }
  // alpha = nu = mu = 1, a = 0, s = 3 -> 3
  const PrabhakarKernel kd(1.0, 1.0, 1.0, 0.0);
  CHECK(laplace_exponent(kd, cplx(3.0, 0.0)).real() == doctest::Approx(3.0));
  // duality: Psi(s) * kappa^(s) = 1 with kappa^ from the forward transform
  const PrabhakarKernel k(0.75, 0.8, 0.65, 1.5);
  auto kappa = [&](double t) { return kappa_kernel(k, t); };
  for (double s : {1.2, 2.5}) {
    const cplx kappa_hat = forward_laplace(kappa, {s, 0.0}, k.mu);
    const cplx product = laplace_exponent(k, {s, 0.0}) * kappa_hat;
    CHECK(std::abs(product - 1.0) <= 1e-5);
  }
  CHECK_THROWS_AS(laplace_exponent(k0, cplx(-1.0, 0.0)), InvalidParam);
}

TEST_CASE("kappa kernel closed forms") {
  const PrabhakarKernel half(0.5, 1.0, 0.5, 0.0);
  CHECK(kappa_kernel(half, 1.0) ==
        doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-13));
  const PrabhakarKernel one(1.0, 1.0, 1.0, 0.0);
  for (double t : {0.1, 1.0, 30.0}) {
    CHECK(kappa_kernel(one, t) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("spectral function is consistent with the time domain") {
  // f = L^{-1}[(1 - phi^)/s]: rebuilt from the spectral form, this must
  // reproduce the relaxation curve of the universal route.
  const PrabhakarKernel kernel(0.75, 1.0, 0.75, 3.0);
  const double B = 1.25;
  const VolterraProblem p(kernel, B);
  const LaplaceImage from_spectrum{
      [kernel, B](cplx s) {
        const cplx phi = B / (B + s * kernel.image(s));
        return (1.0 - phi) / s;
      },
      "relaxation curve from the spectral function"};
  for (double t : {0.05, 0.5, 2.0, 10.0}) {
    CHECK(std::fabs(inverse_laplace(from_spectrum, t) -
                    solve_laplace_numeric(p, t)) <= 1e-4);
  }
}

TEST_CASE("Cole-Cole spectral value tends to 1 at zero frequency") {
  const double mu = 0.7;
  const double tau = 1.0;
  const PrabhakarKernel k(0.7, 1.0, mu, 0.0);
  const cplx low = spectral_function(k, std::pow(tau, -mu), 1e-6 / tau);
  CHECK(std::abs(low - 1.0) <= 1e-4);
}
