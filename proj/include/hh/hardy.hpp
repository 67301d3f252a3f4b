#pragma once

#include "hh/geometry.hpp"
#include "hh/numerics.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace hh::hardy {

// Quadrature settings used by the quotient and bound calculators.
inline numerics::QuadOptions quad_defaults(double rel_tol) {
  numerics::QuadOptions o;
  o.abs_tol = 1e-15;
  o.rel_tol = rel_tol;
  o.max_evals = 4'000'000;
  return o;
}

// Homogeneous cone {|xi|^2 < alpha z} of H^n, or r > rho in polar
// coordinates with rho = invert_phi(alpha). alpha = +inf is the half-space
// (rho = 0). The whole group is represented by rho = -2 pi.
struct ConeSpec {
  int n = 1;
  double alpha = 0.0;
  double rho = 0.0;

  static ConeSpec from_alpha(int n, double alpha);
  static ConeSpec from_rho(int n, double rho);
  static ConeSpec whole_space(int n);
  bool is_whole_space() const;
  int homogeneous_dimension() const { return 2 * n + 2; }
};

// Profile g(t) with its derivative. support = [lo, hi] is required by the
// Rayleigh quotients; breaks are kinks the integrator should split at.
struct TProfile {
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::optional<std::pair<double, double>> support;
  std::vector<double> breaks;
};

// Profile h(r) with its derivative. Both receive (r, d) with
// d = 2 pi - |r|, so values near the end can be computed from d directly.
// endpoint_power kappa declares h ~ d^kappa as d -> 0 (default: h smooth).
struct RProfile {
  std::function<double(double, double)> h;
  std::function<double(double, double)> dh;
  std::optional<double> endpoint_power;
};

// C^1 cubic smoothstep rising from 0 at rho to 1 at rho + width.
struct Cutoff {
  double rho = 0.0;
  double width = 0.0;
  double value(double r) const;
  double derivative(double r) const;
};

// u o Phi(t, varpi, r) = g(t) chi(r) h(r).
struct SeparableFn {
  TProfile g;
  RProfile h;
  std::optional<Cutoff> cutoff;
};

TProfile bump_profile(double t0, double t1);
TProfile constant_profile();
TProfile power_profile(double p);
// Two-sided logarithmic cutoff: 1 - |log t| / log k on (1/k, k).
TProfile log_cutoff_profile(double k);
// t^p g(t).
TProfile times_power(const TProfile& g, double p);

RProfile constant_r();
RProfile r_power(int p);
// (r w(r) mu(r))^gamma, behaving like d^{2 n gamma} at the end.
RProfile flux_power(int n, double gamma);
RProfile from_functions(std::function<double(double)> h, std::function<double(double)> dh);
Cutoff default_cutoff(double rho);

enum class Variant { full, radial, perp, perp_weighted, garofalo };
const char* variant_name(Variant v);
Variant variant_from_name(const char* name);

struct QuotientParts {
  double numerator = 0.0;
  double denominator = 0.0;
  double value = 0.0;
};

// Rayleigh quotient of u = g(t) chi(r) h(r) on the cone with the frame
// derivatives V_1 u = g' h + (r/t) g h', V_2 u = (r/t) w g h', V_j u = 0,
// measure t^{2n+1} mu(r) dt dr (the sphere factor cancels).
//   full:           int (V_1 u)^2 + (V_2 u)^2   /  int u^2 / delta^2
//   radial:         int (V_1 u)^2               /  int u^2 / delta^2
//   perp:           int (V_2 u)^2               /  int u^2 / delta^2
//   perp_weighted:  int (V_2 u)^2 / r           /  int r u^2 / delta^2
//   garofalo:       int (V_1 u)^2 + (V_2 u)^2   /  int u^2 |grad N|^2 / N^2
QuotientParts separable_quotient_parts(const SeparableFn& u, const ConeSpec& cone, Variant variant,
                                       const numerics::QuadOptions& quad = quad_defaults(1e-11));
double separable_quotient(const SeparableFn& u, const ConeSpec& cone, Variant variant, const numerics::QuadOptions& quad = quad_defaults(1e-11));

// Radial quotient of (r/t)^n h_k(t): int h_k'^2 t dt / int h_k^2 t^{-1} dt.
double radial_sequence_quotient(double k, const numerics::QuadOptions& quad = quad_defaults(1e-12));
std::vector<double> default_radial_schedule(double kmax = 4096.0);

// n^2 int gamma^{-2n} eta mu / int gamma^{-2n} mu over (-2 pi, 2 pi).
double koranyi_upper_bound(int n, const numerics::QuadOptions& quad = quad_defaults(1e-13));

struct SharpnessPoint {
  double gamma = 0.0;
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double tail = 0.0;  // int over the plateau of (r w mu)^{2 gamma} r mu
};

// R(gamma) = int r F^{2 gamma} (chi' w - n gamma chi)^2 mu / int chi^2 F^{2 gamma} r mu
// over (rho, 2 pi), F = r w mu, chi the default cutoff.
std::vector<SharpnessPoint> sharpness_sweep(const ConeSpec& cone, const std::vector<double>& gammas,
                                            const numerics::QuadOptions& quad = quad_defaults(1e-12));
std::vector<double> default_gamma_schedule(int steps = 12);

struct BoundReport {
  int n = 1;
  double alpha = 0.0;
  double rho = 0.0;
  double lower_dir = 0.0;  // n^2 rho^2 / 4
  double upper_dir = 0.0;  // pi^2 n^2
  double santalo = 0.0;    // (n / alpha) 16 pi^3 / (16 + alpha^2)
  double koranyi_upper = 0.0;
};

BoundReport cone_bounds(const ConeSpec& cone);
double santalo_bound(int n, double alpha);

struct SantaloReport {
  double argmax = 0.0;            // of (r - sin r) / (2 r^2) on (0, 2 pi)
  double max_value = 0.0;
  double expected_value = 0.0;    // 1 / (2 pi)
  int samples = 0;
  double max_diameter_ratio = 0.0;  // translated-section diameter / (sqrt(z0)/2) sqrt(alpha (16 + alpha^2))
  double max_height_ratio = 0.0;    // z0 / (delta^2 / (2 pi))
  int membership_failures = 0;      // sampled points misclassified by the section formula
};

// Maximiser of (r - sin r) / (2 r^2): root of 2 sin r - r - r cos r on [2.5, 3.5].
double santalo_argmax();
SantaloReport santalo_geometry_check(std::uint64_t seed = 0, int samples = 200);

// Minimal eigenvalue of the separable perpendicular problem on (rho, 2 pi):
// weighted: p = r w^2 mu, q = r mu; unweighted: p = r^2 w^2 mu, q = mu.
numerics::EigResult sl_perp_estimate(const ConeSpec& cone, int grid_n, bool weighted);

struct AnnulusReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

// Both sides of the annulus identity for f o Phi = g(t) h(r) on
// B_{R2} \ B_{R1}: boundary integrals at t = R2 and t = R1 against
// the integral of <grad_H f, T> delta^{-(2n+1)}. The integrand T f is
// taken as a Cartesian directional difference of f along T.
AnnulusReport annulus_identity_check(const SeparableFn& f, double r1, double r2, int n, const numerics::QuadOptions& quad = quad_defaults(1e-10));

// |grad_H N|^2 / N^2 = eta(r) / t^2 for the Koranyi gauge N.
double garofalo_weight(const geometry::Point& p);
// Cartesian horizontal gradient of N, (X_1 N, Y_1 N, ...).
Eigen::VectorXd koranyi_horizontal_gradient(const geometry::Point& p);

// Weighted quotient of u = b(t) cos^gamma(phi) on the Euclidean cone
// {phi > a} of R^d, with the polar field (1/t) d_phi and psi = tan phi.
double euclid_quotient(int d, double a, double gamma, const numerics::QuadOptions& quad = quad_defaults(1e-12));
double euclid_cone_lower_bound(int d, double a);

struct DivergenceReport {
  int n = 1;
  int count = 0;
  double max_abs_integral = 0.0;  // max over f of |int_S V f|
  double max_scale = 0.0;         // max over f of int_S |f| bound used for scaling
};

// Integral over S^{2n-1} of the rotation derivative of random polynomials.
DivergenceReport sphere_divergence_check(int n, int count, std::uint64_t seed, int max_degree = 6);

}  // namespace hh::hardy
