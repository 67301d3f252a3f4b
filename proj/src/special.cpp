#include "hh/special.hpp"

#include "hh/errors.hpp"
#include "hh/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hh::special {

namespace {

// Below this |r| the kernels are summed from their Taylor series. At
// |r| = 1 fourteen terms leave a truncation error under 1e-30, and the
// direct formulas lose at most about one digit just above the switch.
constexpr double kSeriesSwitch = 1.0;
constexpr int kSeriesTerms = 14;

Kernels series_kernels(double r) {
  const double r2 = r * r;
  Kernels k;
  k.chord = r == 0.0 ? 1.0 : 2.0 * std::sin(0.5 * r) / r;

  // a_k = (-1)^{k+1} r^{2k-2} / (2k+1)!
  double a = 1.0 / 6.0;
  double sine_gap = 0.0;
  double dz = 0.0;
  for (int j = 1; j <= kSeriesTerms; ++j) {
    sine_gap += a;
    dz += (2 * j - 1) * a;
    a *= -r2 / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
  }
  // b_k = (-1)^k r^{2k-4} / (2k)!, k >= 2
  double b = 1.0 / 24.0;
  double mu_core = 0.0;
  for (int j = 2; j < kSeriesTerms + 2; ++j) {
    mu_core += (2 * j - 2) * b;
    b *= -r2 / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
  }
  // c_k = (-1)^{k+1} r^{2k-2} / (4^k (2k+1)!)
  double c = 1.0 / 24.0;
  double w_core = 0.0;
  for (int j = 1; j <= kSeriesTerms; ++j) {
    w_core += 2 * j * c;
    c *= -r2 / (4.0 * (2.0 * j + 2.0) * (2.0 * j + 3.0));
  }
  k.sine_gap = sine_gap;
  k.dz_core = dz;
  k.mu_core = mu_core;
  k.w_core = w_core;
  return k;
}

// r >= 0 and d = 2 pi - r, both supplied so that the trigonometric
// factors past pi come from the (exact) distance to the end.
Kernels kernels_rd(double r, double d) {
  if (r < kSeriesSwitch) return series_kernels(r);
  double s_half, c_half, s_full, c_full;
  if (r <= kPi) {
    s_half = std::sin(0.5 * r);
    c_half = std::cos(0.5 * r);
    s_full = std::sin(r);
    c_full = std::cos(r);
  } else {
    s_half = std::sin(0.5 * d);
    c_half = -std::cos(0.5 * d);
    s_full = -std::sin(d);
    c_full = std::cos(d);
  }
  const double r3 = r * r * r;
  Kernels k;
  k.chord = 2.0 * s_half / r;
  k.sine_gap = (r - s_full) / r3;
  k.w_core = (2.0 * s_half - r * c_half) / r3;
  k.mu_core = 2.0 * s_half * k.w_core / r;
  k.dz_core = (2.0 * s_full - r - r * c_full) / r3;
  return k;
}

void check_angle(double r, const char* who) {
  if (!(std::abs(r) <= kTwoPi)) {
    throw domain_error(std::string(who) + ": |r| must not exceed 2 pi, got r = " + std::to_string(r));
  }
}

void check_end_distance(double d, const char* who) {
  if (!(d >= 0.0 && d <= kTwoPi)) {
    throw domain_error(std::string(who) + ": distance to 2 pi must lie in [0, 2 pi]");
  }
}

void check_n(int n, const char* who) {
  if (n < 1) throw domain_error(std::string(who) + ": n must be >= 1");
}

double sin_of(double r) {
  const double a = std::abs(r);
  const double s = a <= kPi ? std::sin(a) : -std::sin(kTwoPi - a);
  return r < 0 ? -s : s;
}

SpecialValue assemble(double r, int n, const Kernels& k) {
  const double a = std::abs(r);
  const double sign = r < 0 ? -1.0 : 1.0;
  SpecialValue out;
  out.r = r;
  out.n = n;
  out.psi_weight = r;
  out.phi = a == 0.0 ? std::numeric_limits<double>::infinity()
                     : sign * 2.0 * k.chord * k.chord / (a * k.sine_gap);
  out.mu = k.mu_core * std::pow(k.chord, 2 * (n - 1));
  out.rw = k.chord / (2.0 * k.w_core);
  out.rv = k.mu_core == 0.0 ? std::numeric_limits<double>::infinity() : k.sine_gap / k.mu_core;
  const double qn = q_normalized(k, a);
  out.gamma = std::sqrt(2.0 * std::sqrt(qn));
  out.eta = k.chord * k.chord / (4.0 * qn);
  if (a == 0.0) {
    out.v = std::numeric_limits<double>::quiet_NaN();
    out.w = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.v = out.rv / r;
    out.w = out.rw / r;
  }
  return out;
}

}  // namespace

Kernels kernels(double r) {
  check_angle(r, "kernels");
  const double a = std::abs(r);
  return kernels_rd(a, kTwoPi - a);
}

Kernels kernels_from_end(double d) {
  check_end_distance(d, "kernels_from_end");
  return kernels_rd(kTwoPi - d, d);
}

double q_normalized(const Kernels& k, double r) {
  const double c2 = k.chord * k.chord;
  const double g = r * k.sine_gap;
  return g * g + 0.25 * c2 * c2;
}

double phi(double r) {
  check_angle(r, "phi");
  if (r == 0.0) throw domain_error("phi: pole at r = 0");
  const Kernels k = kernels(r);
  const double a = std::abs(r);
  const double value = 2.0 * k.chord * k.chord / (a * k.sine_gap);
  return r < 0 ? -value : value;
}

double phi_derivative(double r) {
  check_angle(r, "phi_derivative");
  if (r == 0.0) throw domain_error("phi_derivative: pole at r = 0");
  const Kernels k = kernels(r);
  const double a = std::abs(r);
  const double c4 = std::pow(k.chord, 4);
  return 4.0 * (sin_of(a) * k.sine_gap - 0.25 * a * c4) / (a * a * a * k.sine_gap * k.sine_gap);
}

double invert_phi(double a) {
  if (std::isnan(a) || a < 0.0) throw domain_error("invert_phi: need a >= 0");
  if (a == 0.0) return kTwoPi;
  if (std::isinf(a)) return 0.0;

  double lo = kTwoPi;
  for (int i = 0; i < 1100 && phi(lo) <= a; ++i) lo *= 0.5;
  if (!(phi(lo) > a)) throw numerical_error("invert_phi: could not bracket a = " + std::to_string(a));

  const double scale = std::max(1.0, a);
  numerics::RootOptions opts;
  // Near 2 pi phi is tiny and flat, so an f-tolerance would leave r loose;
  // iterate until the bracket or the Newton step stalls instead.
  opts.f_tol = 0.0;
  opts.bracket_width = 1e-4;
  opts.max_iter = 2000;
  const double root = numerics::find_root_monotone([a](double r) { return phi(r) - a; }, lo, kTwoPi, opts,
                                                   [](double r) { return phi_derivative(r); });
  const double residual = std::abs(phi(root) - a);
  if (residual > 1e-12 * scale) {
    throw numerical_error("invert_phi: residual " + std::to_string(residual) + " above tolerance");
  }
  return root;
}

SpecialValue eval_weights(double r, int n) {
  check_angle(r, "eval_weights");
  check_n(n, "eval_weights");
  return assemble(r, n, kernels(r));
}

SpecialValue eval_weights_from_end(double d, int n) {
  check_end_distance(d, "eval_weights_from_end");
  check_n(n, "eval_weights_from_end");
  return assemble(kTwoPi - d, n, kernels_from_end(d));
}

double mu(double r, int n) {
  check_n(n, "mu");
  const Kernels k = kernels(r);
  return k.mu_core * std::pow(k.chord, 2 * (n - 1));
}

double mu_from_end(double d, int n) {
  check_n(n, "mu_from_end");
  const Kernels k = kernels_from_end(d);
  return k.mu_core * std::pow(k.chord, 2 * (n - 1));
}

double rv(double r) {
  const Kernels k = kernels(r);
  return k.mu_core == 0.0 ? std::numeric_limits<double>::infinity() : k.sine_gap / k.mu_core;
}

double rw(double r) {
  const Kernels k = kernels(r);
  return k.chord / (2.0 * k.w_core);
}

double eval_v(double r) {
  check_angle(r, "eval_v");
  if (r == 0.0) throw domain_error("eval_v: pole at r = 0 (only r v(r) is finite there)");
  return rv(r) / r;
}

double eval_w(double r) {
  check_angle(r, "eval_w");
  if (r == 0.0) throw domain_error("eval_w: pole at r = 0 (only r w(r) is finite there)");
  return rw(r) / r;
}

double gamma(double r) {
  const Kernels k = kernels(r);
  return std::sqrt(2.0 * std::sqrt(q_normalized(k, std::abs(r))));
}

double eta(double r) {
  const Kernels k = kernels(r);
  return k.chord * k.chord / (4.0 * q_normalized(k, std::abs(r)));
}

IdentityReport check_identities(int n, int grid_size) {
  check_n(n, "check_identities");
  if (grid_size < 16) throw domain_error("check_identities: grid_size must be >= 16");
  IdentityReport rep;
  rep.n = n;
  rep.grid_size = grid_size;
  const double h = rep.fd_step;
  const double lo = 1e-3;
  const double hi = kTwoPi - 1e-3;
  const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);

  auto flux = [n](double r) { return rw(r) * mu(r, n); };
  rep.min_gamma_margin = gamma(kTwoPi) - inv_sqrt_pi;
  rep.gamma_argmin = kTwoPi;
  double prev_eta = eta(0.0);
  for (int i = 0; i < grid_size; ++i) {
    const double r = lo + (hi - lo) * i / (grid_size - 1);
    const SpecialValue sv = eval_weights(r, n);
    const SpecialValue sm = eval_weights(-r, n);

    const double dflux = (flux(r + h) - flux(r - h)) / (2.0 * h);
    rep.max_flux_residual = std::max(rep.max_flux_residual, std::abs(dflux + n * r * sv.mu));

    const double lhs = 1.0 + 1.0 / (sv.w * sv.w);
    const double rhs = 1.0 / sv.eta;
    rep.max_garofalo_residual =
        std::max(rep.max_garofalo_residual, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));

    const double parity = std::max({std::abs(sv.v + sm.v), std::abs(sv.w + sm.w), std::abs(sv.mu - sm.mu),
                                    std::abs(sv.gamma - sm.gamma), std::abs(sv.eta - sm.eta)});
    rep.max_parity_residual = std::max(rep.max_parity_residual, parity);

    if (sv.gamma - inv_sqrt_pi < rep.min_gamma_margin) {
      rep.min_gamma_margin = sv.gamma - inv_sqrt_pi;
      rep.gamma_argmin = r;
    }
    rep.max_eta_increase = std::max(rep.max_eta_increase, sv.eta - prev_eta);
    prev_eta = sv.eta;
  }
  rep.max_eta_increase = std::max(rep.max_eta_increase, eta(kTwoPi) - prev_eta);
  return rep;
}

}  // namespace hh::special
