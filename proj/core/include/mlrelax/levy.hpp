#pragma once

#include "mlrelax/errors.hpp"
#include "mlrelax/mlfun.hpp"

namespace mlrelax {

/// Query for h_{alpha,lambda}(u,t), the inverse transform of
/// s^{-lambda} e^{-u s^alpha}. The one-sided Levy density is lambda = 0,
/// its primitive Phi_alpha is lambda = 1.
struct LevyQuery {
  double alpha;
  double u;
  double t;
  double lambda = 0.0;
};

enum class LevyRoute { series, hypergeometric, inversion };

/// h_{alpha,lambda}(u,t) by the requested route.
///
/// series:          u^{(lambda-1)/alpha} sum_r (-1)^r (t u^{-1/alpha})^{lambda-1-alpha r}
///                  / (r! Gamma(lambda - alpha r)); refused (NonConvergent)
///                  when the term hump exceeds 1e12 times the partial sum.
/// hypergeometric:  the same sum grouped by residue classes mod k for
///                  rational alpha = l/k, realizing the finite-sum-of-pFq
///                  reduction; RouteUnavailable for irrational alpha or k > 12.
/// inversion:       fixed-Talbot inversion of the defining image.
///
/// alpha = 1 degenerates to the shift rule (t-u)^{lambda-1}/Gamma(lambda)
/// for t != u on every route; at t = u the lambda = 1 step takes the
/// midpoint value 1/2.
double h_function(const LevyQuery& q, LevyRoute route);

/// Series route with automatic fallback to inversion when the series is
/// refused.
double h_function(const LevyQuery& q);

/// One-sided Levy stable density: Phi~_alpha(u,t) = h_{alpha,0}(u,t),
/// alpha in (0,1).
double levy_density(double alpha, double u, double t);

/// Primitive of the density in t: Phi_alpha(u,t) = h_{alpha,1}(u,t).
double levy_cdf(double alpha, double u, double t);

/// g^gamma_{alpha,beta}(u,t) = u^{gamma - beta/alpha} h_{alpha,beta-alpha*gamma}(u,t).
double g_function(double alpha, double beta, double gamma, double u, double t);

/// Integral representation of the three-parameter Mittag-Leffler function:
/// E^gamma_{alpha,beta}(-a t^alpha)
///   = t^{1-beta}/Gamma(gamma) * integral_0^inf e^{-a u} u^{gamma-1}
///     h_{alpha,beta-alpha*gamma}(u,t) du,
/// which for beta = alpha*gamma is the Levy-density form.
double ml_integral_rep(double alpha, double beta, double gamma, double a,
                       double t);

}  // namespace mlrelax
