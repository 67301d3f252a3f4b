#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace hh::numerics {

using RealFn = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

enum class Endpoint { left, right };

// Integrand behaves like dist^exponent at one endpoint. The integrator
// substitutes s = dist^(exponent + 1), which turns a pure power into a
// constant, and never evaluates the integrand closer to the endpoint than
// min_distance (below that the transformed integrand is frozen at its
// limiting value).
struct EndpointSingularity {
  Endpoint endpoint = Endpoint::right;
  double exponent = 0.0;
  double min_distance = 1e-30;
};

struct QuadOptions {
  double abs_tol = 1e-8;
  double rel_tol = 0.0;
  long max_evals = 1'000'000;
};

// Adaptive 7/15-point Gauss-Kronrod bisection, worst interval first.
// Succeeds when the error estimate is below max(abs_tol, rel_tol * |I|);
// otherwise throws numerical_error. Throws domain_error when a >= b or the
// singular exponent is <= -1.
QuadResult integrate(const RealFn& f, double a, double b, const QuadOptions& opts = {});
QuadResult integrate(const RealFn& f, double a, double b,
                     const std::optional<EndpointSingularity>& singularity,
                     const QuadOptions& opts = {});

// Integral over (0, length) of f(d), where f(d) ~ d^exponent as d -> 0.
// The integrand receives the distance d itself, so callers can evaluate it
// without the rounding of "endpoint - d".
QuadResult integrate_from_endpoint(const RealFn& f_of_distance, double length, double exponent,
                                   const QuadOptions& opts = {}, double min_distance = 1e-30);

struct RootOptions {
  double f_tol = 1e-14;          // stop once |f(x)| <= f_tol
  double bracket_width = 1e-4;   // bisect until the bracket is this narrow
  int max_iter = 300;
};

// Root of a monotone f on [lo, hi] with f(lo) * f(hi) <= 0. Bisects down to
// opts.bracket_width, then runs Newton safeguarded by the bracket when df is
// given (pure bisection otherwise). Stops on |f| <= f_tol or when the
// bracket can no longer shrink in floating point.
double find_root_monotone(const RealFn& f, double lo, double hi, const RootOptions& opts = {},
                          const RealFn& df = {});

// Minimise  int p v'^2 / int q v^2  over v with v(a) = 0 (and v(b) = 0 when
// right_dirichlet is set; the right end is free otherwise).
struct SLProblem {
  RealFn p_coeff;
  RealFn q_coeff;
  double a = 0.0;
  double b = 1.0;
  bool right_dirichlet = false;
  int grid_n = 256;
};

struct EigResult {
  double lambda_min = 0.0;
  std::vector<double> grid;    // node abscissae, including the Dirichlet node(s)
  std::vector<double> eigvec;  // nodal values, M-normalised, positive maximum
  int grid_n = 0;
  double rayleigh_quotient = 0.0;
};

// Piecewise-linear Galerkin discretisation on a uniform grid of grid_n
// cells: tridiagonal stiffness (weight p) and tridiagonal mass (weight q),
// both integrated with 4-point Gauss-Legendre per cell. The minimal
// eigenvalue of the pencil is located by Sturm-sequence bisection and the
// eigenvector by inverse iteration.
EigResult sl_min_eig(const SLProblem& prob, double rel_tol = 1e-13);

}  // namespace hh::numerics
