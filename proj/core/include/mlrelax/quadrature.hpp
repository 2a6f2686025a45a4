#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <type_traits>
#include <utility>
#include <vector>

#include "mlrelax/errors.hpp"

namespace mlrelax {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGK15WeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class T>
double norm_of(const T& v) {
  if constexpr (std::is_same_v<T, std::complex<double>>) {
    return std::abs(v);
  } else {
    return std::fabs(v);
  }
}

template <class F>
using integrand_result_t = std::decay_t<std::invoke_result_t<F&, double>>;

template <class F, class T = integrand_result_t<F>>
std::pair<T, double> gk15(F& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  T fplus[8];
  T fminus[8];
  T gauss{};
  T kronrod{};
  for (int i = 0; i < 8; ++i) {
    const double x = h * kGK15Nodes[i];
    fplus[i] = f(c + x);
    fminus[i] = (i < 7) ? f(c - x) : T{};
    const T fv = fplus[i] + fminus[i];
    kronrod += kGK15WeightsK[i] * fv;
    if (i % 2 == 1) gauss += kGK15WeightsG[i / 2] * fv;
  }
  // QUADPACK dqk15 error scaling via the deviation-from-mean integral.
  const T mean = kronrod * 0.5;
  double resasc = 0.0;
  for (int i = 0; i < 8; ++i) {
    resasc += kGK15WeightsK[i] * (norm_of<T>(fplus[i] - mean) +
                                  (i < 7 ? norm_of<T>(fminus[i] - mean) : 0.0));
  }
  resasc *= std::fabs(h);
  kronrod *= h;
  gauss *= h;
  double err = norm_of<T>(kronrod - gauss);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  return {kronrod, err};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b]. Works for double- and
/// complex-valued integrands; worst-interval-first refinement with a cap on
/// the number of subdivisions.
template <class F, class T = detail::integrand_result_t<F>>
T integrate(F f, double a, double b, const QuadratureOptions& opts = {}) {
  if (!(a < b)) {
    if (a == b) return T{};
    throw InvalidParam("integrate: interval endpoints out of order");
  }
  struct Segment {
    double a, b, err;
    T value;
  };
  auto [v0, e0] = detail::gk15(f, a, b);
  std::vector<Segment> segs{{a, b, e0, v0}};
  double total_err = e0;
  T total = v0;
  int splits = 0;
  while (true) {
    const double bound =
        std::max(opts.abs_tol, opts.rel_tol * detail::norm_of<T>(total));
    if (total_err <= bound) return total;
    if (splits >= opts.max_subdivisions) {
      throw QuadratureFailure(
          "integrate: subdivision cap reached before the tolerance was met");
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i) {
      if (segs[i].err > segs[worst].err) worst = i;
    }
    const Segment s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b) {
      throw QuadratureFailure("integrate: interval too small to split further");
    }
    auto [vl, el] = detail::gk15(f, s.a, mid);
    auto [vr, er] = detail::gk15(f, mid, s.b);
    total += vl + vr - s.value;
    total_err += el + er - s.err;
    segs[worst] = {s.a, mid, el, vl};
    segs.push_back({mid, s.b, er, vr});
    ++splits;
  }
}

/// Integral of f over [a, infinity) through the map t = a + v/(1-v).
template <class F, class T = detail::integrand_result_t<F>>
T integrate_to_infinity(F f, double a, const QuadratureOptions& opts = {}) {
  auto g = [&f, a](double v) -> T {
    const double w = 1.0 - v;
    const double t = a + v / w;
    return f(t) / (w * w);
  };
  // Stay a hair away from v=1; the integrand must already be negligible there.
  return integrate(g, 0.0, 1.0 - 1e-14, opts);
}

/// Integral of f over [0, b] when f(t) ~ t^{p-1} near zero (p > 0): the
/// substitution t = w^{1/p} removes the endpoint singularity exactly.
template <class F, class T = detail::integrand_result_t<F>>
T integrate_power_endpoint(F f, double b, double p,
                           const QuadratureOptions& opts = {}) {
  if (!(p > 0.0)) throw InvalidParam("integrate_power_endpoint: p must be > 0");
  if (p == 1.0) return integrate(f, 0.0, b, opts);
  const double inv_p = 1.0 / p;
  auto g = [&f, inv_p](double w) -> T {
    const double t = std::pow(w, inv_p);
    return f(t) * (inv_p * std::pow(w, inv_p - 1.0));
  };
  return integrate(g, 0.0, std::pow(b, p), opts);
}

}  // namespace mlrelax
