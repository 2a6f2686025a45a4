#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mlrelax/laplace.hpp"
#include "mlrelax/mlfun.hpp"

namespace mlrelax {

/// Relaxation problem: memory kernel, coupling constant B > 0 and the
/// initial value f(0) (1 by convention, overridable).
struct VolterraProblem {
  PrabhakarKernel kernel;
  double coupling;
  double f0 = 1.0;

  // B = 0 is admitted as the degenerate decoupled problem (f == f0); the
  // large-t series divides by B and rejects it.
  VolterraProblem(PrabhakarKernel k, double coupling_, double f0_ = 1.0)
      : kernel(k), coupling(coupling_), f0(f0_) {
    if (!(coupling >= 0.0)) {
      throw InvalidParam("VolterraProblem: coupling B must be non-negative");
    }
  }
};

enum class SolveMethod {
  series_f1,
  series_f2,
  closed_cc,
  integral_rep,
  laplace_numeric,
  integral_eq1,
};

const char* to_string(SolveMethod m);

struct RelaxationCurve {
  std::vector<double> t_grid;
  std::vector<double> values;
  SolveMethod method;
};

struct SeriesSolveResult {
  double value;
  int terms;             // number of series terms actually summed
  double tail_estimate;  // magnitude of the first omitted term
  double max_term;       // largest |term|, for cancellation accounting
};

/// Small-t series: f1 = sum_r (-B)^r e^{nu r}_{alpha,1+mu r}(-a,t) f(0).
/// NonConvergent when the terms are still growing at the cap, which signals
/// the f2 regime.
SeriesSolveResult solve_series_f1_detailed(const VolterraProblem& p, double t,
                                           int max_terms = 256,
                                           double tol = 1e-13);
double solve_series_f1(const VolterraProblem& p, double t,
                       int max_terms = 256);

/// Large-t series: f2 = -sum_r (-B)^{-1-r} e^{-nu(1+r)}_{alpha,1-mu(1+r)}(-a,t) f(0).
/// The sum is of asymptotic type; it is truncated at its smallest term and
/// accepted only when that term is negligible, otherwise NonConvergent
/// signals the f1 regime.
SeriesSolveResult solve_series_f2_detailed(const VolterraProblem& p, double t,
                                           int max_terms = 256,
                                           double tol = 1e-13);
double solve_series_f2(const VolterraProblem& p, double t,
                       int max_terms = 256);

/// Closed form for the nu = 1, mu = alpha kernel:
/// f = B/(B+a) (E_alpha[-(B+a) t^alpha] - 1) f(0) + f(0).
double solve_closed_cc(const VolterraProblem& p, double t);

/// Integral representation for the mu = alpha*nu family:
/// f = f(0) + f(0) integral_0^inf e^{-a xi} e^1_{nu,0}(-B,xi) Phi_alpha(xi,t) dxi.
double solve_integral_rep(const VolterraProblem& p, double t);

/// Image of the relaxation response: k^(s) f(0) / (s k^(s) + B).
LaplaceImage relaxation_image(const VolterraProblem& p);

/// Universal route: numerical inversion of the response image; valid for
/// every admissible (alpha, nu, mu) triple.
double solve_laplace_numeric(const VolterraProblem& p, double t,
                             InversionMethod method = InversionMethod::talbot,
                             int n_nodes = kTalbotDefaultNodes);

/// Memory kernel of the inhomogeneous reformulation:
/// kappa(t) = L^{-1}[(s k^(s))^{-1}; t] = t^{mu-1} E^nu_{alpha,mu}(-a t^alpha)
/// (reduces to t^{mu-1}/Gamma(mu) at a = 0).
double kappa_memory(const PrabhakarKernel& kernel, double t);

/// Product-integration solution of
/// f(t) = f(0) - B integral_0^t kappa(t-xi) f(xi) dxi
/// on the given grid (t_grid[0] must be 0). Piecewise-linear f against the
/// exact moments of the weakly singular kappa; a step-halving pass guards
/// the discretization and GridTooCoarse is raised when the halved-step
/// change exceeds 1e-4.
RelaxationCurve solve_integral_eq1(const VolterraProblem& p,
                                   std::span<const double> t_grid);

/// Graded mesh t_j = t_max (j/(n-1))^power. The solution behaves like
/// f0 - c t^mu near zero, so a power-2..3 grading restores the accuracy a
/// uniform grid loses to that kink.
std::vector<double> graded_grid(double t_max, std::size_t n,
                                double power = 2.0);

/// Caputo fractional derivative of order alpha in (0,1):
/// (1/Gamma(1-alpha)) integral_0^t (t-xi)^{-alpha} f'(xi) dxi.
/// Below t/2 the integral is taken by parts so a merely-integrable f' never
/// meets the quadrature; above, the substitution xi = t - w^{1/(1-alpha)}
/// removes the kernel endpoint and f' is sampled by high-order differences.
/// quad_abs_tol exists because f built from numerical inversions carries
/// noise that a 1e-9 target would chase forever.
double caputo_derivative(const std::function<double(double)>& f, double alpha,
                         double t, double quad_abs_tol = 1e-9);

/// Riemann-Liouville fractional integral of order eta in (0,1):
/// (1/Gamma(eta)) integral_0^t (t-xi)^{eta-1} f(xi) dxi.
double rl_fractional_integral(const std::function<double(double)>& f,
                              double eta, double t);

}  // namespace mlrelax
