#pragma once

#include <numbers>

namespace hh::special {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Even, cancellation-free building blocks in the angle r. Every special
// function of the Heisenberg polar coordinates is a rational expression in
// these:
//   chord    = 2 sin(r/2) / r
//   sine_gap = (r - sin r) / r^3
//   mu_core  = (2 - 2 cos r - r sin r) / r^4
//   w_core   = (2 sin(r/2) - r cos(r/2)) / r^3
//   dz_core  = (2 sin r - r - r cos r) / r^3
struct Kernels {
  double chord = 1.0;
  double sine_gap = 1.0 / 6.0;
  double mu_core = 1.0 / 12.0;
  double w_core = 1.0 / 12.0;
  double dz_core = 1.0 / 6.0;
};

// |r| <= 2 pi. Below |r| = 1 the kernels come from their Taylor series; for
// |r| > pi the trigonometric factors are taken from the distance to 2 pi.
Kernels kernels(double r);
// Kernels at |r| = 2 pi - d, computed from d without forming r first.
Kernels kernels_from_end(double d);

// phi(r) = 4 (1 - cos r) / (r - sin r); odd, strictly decreasing on
// (0, 2 pi], phi(2 pi) = 0. Domain error at r = 0 and for |r| > 2 pi.
double phi(double r);
double phi_derivative(double r);
// Inverse of phi on [0, 2 pi]: a = 0 gives 2 pi, a = +inf gives 0.
double invert_phi(double a);

struct SpecialValue {
  double r = 0.0;
  int n = 1;
  double phi = 0.0;
  double mu = 0.0;
  double v = 0.0;   // pole (NaN) at r = 0, infinite at |r| = 2 pi
  double w = 0.0;   // pole (NaN) at r = 0
  double rv = 0.0;  // r v(r), even, 2 at r = 0
  double rw = 0.0;  // r w(r), even, 6 at r = 0
  double gamma = 0.0;
  double eta = 0.0;
  double psi_weight = 0.0;  // psi = r
};

// mu(r) = (2 - 2cos r - r sin r)(2 - 2cos r)^{n-1} / r^{2n+2},
// w(r) = r / (2 - r cot(r/2)), v(r) = (r - sin r) / (2 - r sin r - 2 cos r),
// gamma(r) = sqrt(2) (r^2 - 2r sin r - 2cos r + 2)^{1/4} / |r|,
// eta(r) = r^2 (1 - cos r) / (2 (r^2 - 2r sin r - 2cos r + 2)).
SpecialValue eval_weights(double r, int n);
SpecialValue eval_weights_from_end(double d, int n);  // at r = 2 pi - d

double mu(double r, int n);
double mu_from_end(double d, int n);
double eval_v(double r);  // domain error at r = 0
double eval_w(double r);  // domain error at r = 0
double rv(double r);
double rw(double r);
double gamma(double r);
double eta(double r);
// Even-in-r helper values from the kernels: gamma^4 / 4 r^{-4} form.
double q_normalized(const Kernels& k, double r);  // (r^2 - 2r sin r - 2cos r + 2) / r^4

struct IdentityReport {
  int n = 1;
  int grid_size = 0;
  double fd_step = 1e-5;
  double max_flux_residual = 0.0;      // |d/dr (r w mu) + n r mu|, central differences
  double max_garofalo_residual = 0.0;  // relative, (1 + w^2)/w^2 against 1/eta
  double max_parity_residual = 0.0;    // v, w odd; mu, gamma, eta even
  double min_gamma_margin = 0.0;       // min gamma - 1/sqrt(pi), endpoints included
  double gamma_argmin = 0.0;           // |r| at the sampled minimum of gamma
  double max_eta_increase = 0.0;       // largest increase of eta along |r|
};

// Samples (0, 2 pi) uniformly, keeping 1e-3 away from both endpoints.
IdentityReport check_identities(int n, int grid_size);

}  // namespace hh::special
