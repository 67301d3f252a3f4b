#include "hh/errors.hpp"
#include "hh/hardy.hpp"
#include "hh/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hh::hardy {

using special::kPi;
using special::kTwoPi;

namespace {

using RFn = std::function<double(double, double)>;

struct EvenWeights {
  double mu = 0.0;
  double rw = 0.0;
  double eta = 0.0;
};

// Even special functions at (r, d = 2 pi - |r|), taken from d near the end.
EvenWeights even_weights(double r, double d, int n) {
  const special::Kernels k = d < kPi ? special::kernels_from_end(d) : special::kernels(r);
  const double a = d < kPi ? kTwoPi - d : std::abs(r);
  EvenWeights w;
  w.mu = k.mu_core * std::pow(k.chord, 2 * (n - 1));
  w.rw = k.chord / (2.0 * k.w_core);
  w.eta = k.chord * k.chord / (4.0 * special::q_normalized(k, a));
  return w;
}

void require_integrable(double exponent, const char* what) {
  if (!(exponent > -1.0)) {
    throw domain_error(std::string("non-integrable ") + what + ": local exponent " + std::to_string(exponent) +
                       " at |r| = 2 pi");
  }
}

// Integral of f(r, 2 pi - r) over (lo, 2 pi) for 0 <= lo < 2 pi; the part
// beyond `split` is integrated in d = 2 pi - r with the declared exponent.
double to_end(const RFn& f, double lo, double split, double exponent, const numerics::QuadOptions& opts) {
  double total = 0.0;
  if (split > lo) {
    total += numerics::integrate([&](double r) { return f(r, kTwoPi - r); }, lo, split, opts).value;
  }
  total += numerics::integrate_from_endpoint([&](double d) { return f(kTwoPi - d, d); }, kTwoPi - split, exponent,
                                             opts)
               .value;
  return total;
}

// Integral over (a, 2 pi), -2 pi <= a < 2 pi, of f(r, 2 pi - |r|).
double integrate_r(const RFn& f, double a, std::optional<double> split, double exponent,
                   const numerics::QuadOptions& opts) {
  const double lo = std::max(a, 0.0);
  const double s = split ? std::clamp(*split, lo, kTwoPi) : lo + 0.5 * (kTwoPi - lo);
  double total = to_end(f, lo, s, exponent, opts);
  if (a < 0.0) {
    const RFn mirrored = [&](double r, double d) { return f(-r, d); };
    if (a <= -kTwoPi) {
      total += to_end(mirrored, 0.0, kPi, exponent, opts);
    } else {
      total += numerics::integrate([&](double r) { return f(-r, kTwoPi - r); }, 0.0, -a, opts).value;
    }
  }
  return total;
}

double integrate_t(const std::function<double(double)>& f, const TProfile& g, const numerics::QuadOptions& opts) {
  if (!g.support) throw domain_error("separable quotient: the t-profile needs a compact support");
  const auto [lo, hi] = *g.support;
  if (!(lo >= 0.0 && lo < hi && std::isfinite(hi))) throw domain_error("separable quotient: bad t-support");
  std::vector<double> pts{lo};
  for (double b : g.breaks) {
    if (b > lo && b < hi) pts.push_back(b);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i]) total += numerics::integrate(f, pts[i], pts[i + 1], opts).value;
  }
  return total;
}

double smoothstep(double s) { return s <= 0.0 ? 0.0 : s >= 1.0 ? 1.0 : s * s * (3.0 - 2.0 * s); }
double smoothstep_derivative(double s) { return (s <= 0.0 || s >= 1.0) ? 0.0 : 6.0 * s * (1.0 - s); }

}  // namespace

// ---------------------------------------------------------------- cones

ConeSpec ConeSpec::from_alpha(int n, double alpha) {
  if (n < 1) throw domain_error("ConeSpec: n must be >= 1");
  if (std::isnan(alpha) || !(alpha > 0.0)) throw domain_error("ConeSpec: alpha must be positive (or +inf)");
  return ConeSpec{n, alpha, special::invert_phi(alpha)};
}

ConeSpec ConeSpec::from_rho(int n, double rho) {
  if (n < 1) throw domain_error("ConeSpec: n must be >= 1");
  if (!(rho >= 0.0 && rho < kTwoPi)) throw domain_error("ConeSpec: rho must lie in [0, 2 pi)");
  const double alpha = rho == 0.0 ? std::numeric_limits<double>::infinity() : special::phi(rho);
  return ConeSpec{n, alpha, rho};
}

ConeSpec ConeSpec::whole_space(int n) {
  if (n < 1) throw domain_error("ConeSpec: n must be >= 1");
  return ConeSpec{n, std::numeric_limits<double>::quiet_NaN(), -kTwoPi};
}

bool ConeSpec::is_whole_space() const { return rho <= -kTwoPi; }

// ---------------------------------------------------------------- profiles

double Cutoff::value(double r) const { return smoothstep((r - rho) / width); }
double Cutoff::derivative(double r) const { return smoothstep_derivative((r - rho) / width) / width; }

Cutoff default_cutoff(double rho) { return Cutoff{rho, 0.1 * (kTwoPi - rho)}; }

TProfile bump_profile(double t0, double t1) {
  if (!(t0 >= 0.0 && t0 < t1)) throw domain_error("bump_profile: need 0 <= t0 < t1");
  const double len = t1 - t0;
  TProfile p;
  p.g = [=](double t) {
    const double s = (t - t0) / len;
    return (s <= 0.0 || s >= 1.0) ? 0.0 : s * s * (1.0 - s) * (1.0 - s);
  };
  p.dg = [=](double t) {
    const double s = (t - t0) / len;
    return (s <= 0.0 || s >= 1.0) ? 0.0 : 2.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / len;
  };
  p.support = std::make_pair(t0, t1);
  return p;
}

TProfile constant_profile() {
  TProfile p;
  p.g = [](double) { return 1.0; };
  p.dg = [](double) { return 0.0; };
  return p;
}

TProfile power_profile(double q) {
  TProfile p;
  p.g = [q](double t) { return std::pow(t, q); };
  p.dg = [q](double t) { return q == 0.0 ? 0.0 : q * std::pow(t, q - 1.0); };
  return p;
}

TProfile log_cutoff_profile(double k) {
  if (!(k > 1.0)) throw domain_error("log_cutoff_profile: need k > 1");
  const double lk = std::log(k);
  TProfile p;
  p.g = [=](double t) {
    if (!(t > 0.0)) return 0.0;
    const double a = std::clamp(std::log(t * k) / lk, 0.0, 1.0);
    const double b = std::clamp(std::log(k / t) / lk, 0.0, 1.0);
    return a * b;
  };
  p.dg = [=](double t) {
    if (!(t > 1.0 / k && t < k)) return 0.0;
    return t < 1.0 ? 1.0 / (t * lk) : -1.0 / (t * lk);
  };
  p.support = std::make_pair(1.0 / k, k);
  p.breaks = {1.0};
  return p;
}

TProfile times_power(const TProfile& g, double q) {
  TProfile p = g;
  auto gg = g.g;
  auto dg = g.dg;
  p.g = [=](double t) { return std::pow(t, q) * gg(t); };
  p.dg = [=](double t) { return std::pow(t, q) * dg(t) + q * std::pow(t, q - 1.0) * gg(t); };
  return p;
}

RProfile constant_r() {
  RProfile p;
  p.h = [](double, double) { return 1.0; };
  p.dh = [](double, double) { return 0.0; };
  return p;
}

RProfile r_power(int q) {
  RProfile p;
  p.h = [q](double r, double) { return std::pow(r, q); };
  p.dh = [q](double r, double) { return q == 0 ? 0.0 : q * std::pow(r, q - 1); };
  return p;
}

RProfile flux_power(int n, double gamma) {
  if (n < 1) throw domain_error("flux_power: n must be >= 1");
  RProfile p;
  p.h = [=](double r, double d) {
    const EvenWeights w = even_weights(r, d, n);
    return std::pow(w.rw * w.mu, gamma);
  };
  p.dh = [=](double r, double d) {
    const EvenWeights w = even_weights(r, d, n);
    // d/dr (r w mu) = -n r mu
    return -gamma * n * r * w.mu * std::pow(w.rw * w.mu, gamma - 1.0);
  };
  p.endpoint_power = 2.0 * n * gamma;
  return p;
}

RProfile from_functions(std::function<double(double)> h, std::function<double(double)> dh) {
  RProfile p;
  p.h = [h](double r, double) { return h(r); };
  p.dh = [dh](double r, double) { return dh(r); };
  return p;
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::radial: return "radial";
    case Variant::perp: return "perp";
    case Variant::perp_weighted: return "perp_weighted";
    case Variant::garofalo: return "garofalo";
  }
  return "full";
}

Variant variant_from_name(const char* name) {
  const std::string s(name);
  for (Variant v : {Variant::full, Variant::radial, Variant::perp, Variant::perp_weighted, Variant::garofalo}) {
    if (s == variant_name(v)) return v;
  }
  throw domain_error("unknown quotient variant '" + s + "'");
}

// ---------------------------------------------------------------- quotients

QuotientParts separable_quotient_parts(const SeparableFn& u, const ConeSpec& cone, Variant variant,
                                       const numerics::QuadOptions& quad) {
  const int n = cone.n;
  if (n < 1) throw domain_error("separable_quotient: n must be >= 1");
  if (variant == Variant::perp_weighted && cone.rho < 0.0) {
    throw domain_error("separable_quotient: perp_weighted needs psi = r > 0 on the cone (rho >= 0)");
  }
  const numerics::QuadOptions& opts = quad;

  // Local exponents at |r| = 2 pi.
  const double kappa = u.h.endpoint_power.value_or(0.0);
  const double kappa_d = (u.h.endpoint_power && kappa != 0.0) ? kappa - 1.0 : 0.0;
  const double e_h2 = 2.0 * kappa + 2.0 * n - 1.0;
  const double e_cross = kappa + kappa_d + 2.0 * n - 1.0;
  const double e_dh2 = 2.0 * kappa_d + 2.0 * n - 1.0;
  const double e_perp = e_dh2 + 2.0;
  const double e_eta = e_h2 + 2.0;

  const double a = cone.rho;
  const std::optional<Cutoff> cut = u.cutoff;
  const std::optional<double> split =
      cut ? std::optional<double>(cut->rho + cut->width) : std::nullopt;

  auto h_eff = [&](double r, double d) {
    const double h = u.h.h(r, d);
    return cut ? cut->value(r) * h : h;
  };
  auto dh_eff = [&](double r, double d) {
    const double dh = u.h.dh(r, d);
    if (!cut) return dh;
    const double chi_d = cut->derivative(r);
    return cut->value(r) * dh + (chi_d == 0.0 ? 0.0 : chi_d * u.h.h(r, d));
  };
  auto r_integral = [&](double exponent, const char* what, auto&& integrand) {
    require_integrable(exponent, what);
    return integrate_r(
        [&](double r, double d) {
          const EvenWeights w = even_weights(r, d, n);
          return integrand(r, d, w);
        },
        a, split, exponent, opts);
  };

  const TProfile& g = u.g;
  auto t_integral = [&](int power, auto&& integrand) {
    return integrate_t([&](double t) { return integrand(t) * std::pow(t, power); }, g, opts);
  };
  const double i_g0 = t_integral(2 * n - 1, [&](double t) { const double v = g.g(t); return v * v; });

  auto radial_numerator = [&]() {
    const double i_g1 = t_integral(2 * n + 1, [&](double t) { const double v = g.dg(t); return v * v; });
    const double i_gx = t_integral(2 * n, [&](double t) { return g.g(t) * g.dg(t); });
    const double a0 = r_integral(e_h2, "numerator", [&](double r, double d, const EvenWeights& w) {
      const double h = h_eff(r, d);
      return h * h * w.mu;
    });
    const double ax = r_integral(e_cross, "numerator", [&](double r, double d, const EvenWeights& w) {
      return r * h_eff(r, d) * dh_eff(r, d) * w.mu;
    });
    const double a2 = r_integral(e_dh2, "numerator", [&](double r, double d, const EvenWeights& w) {
      const double dh = dh_eff(r, d);
      return r * r * dh * dh * w.mu;
    });
    return i_g1 * a0 + 2.0 * i_gx * ax + i_g0 * a2;
  };
  auto perp_numerator = [&]() {
    return i_g0 * r_integral(e_perp, "numerator", [&](double r, double d, const EvenWeights& w) {
             const double dh = dh_eff(r, d);
             return w.rw * w.rw * dh * dh * w.mu;
           });
  };
  auto plain_denominator = [&]() {
    return i_g0 * r_integral(e_h2, "denominator", [&](double r, double d, const EvenWeights& w) {
             const double h = h_eff(r, d);
             return h * h * w.mu;
           });
  };

  QuotientParts out;
  switch (variant) {
    case Variant::full:
      out.numerator = radial_numerator() + perp_numerator();
      out.denominator = plain_denominator();
      break;
    case Variant::radial:
      out.numerator = radial_numerator();
      out.denominator = plain_denominator();
      break;
    case Variant::perp:
      out.numerator = perp_numerator();
      out.denominator = plain_denominator();
      break;
    case Variant::perp_weighted:
      out.numerator = i_g0 * r_integral(e_perp, "numerator", [&](double r, double d, const EvenWeights& w) {
                        const double dh = dh_eff(r, d);
                        return w.rw * w.rw / r * dh * dh * w.mu;
                      });
      out.denominator = i_g0 * r_integral(e_h2, "denominator", [&](double r, double d, const EvenWeights& w) {
                          const double h = h_eff(r, d);
                          return r * h * h * w.mu;
                        });
      break;
    case Variant::garofalo:
      out.numerator = radial_numerator() + perp_numerator();
      out.denominator = i_g0 * r_integral(e_eta, "denominator", [&](double r, double d, const EvenWeights& w) {
                          const double h = h_eff(r, d);
                          return w.eta * h * h * w.mu;
                        });
      break;
  }
  if (!(out.denominator > 0.0)) throw numerical_error("separable_quotient: denominator is not positive");
  out.value = out.numerator / out.denominator;
  return out;
}

double separable_quotient(const SeparableFn& u, const ConeSpec& cone, Variant variant, const numerics::QuadOptions& quad) {
  return separable_quotient_parts(u, cone, variant, quad).value;
}

double radial_sequence_quotient(double k, const numerics::QuadOptions& quad) {
  if (!(k >= 2.0)) throw domain_error("radial_sequence_quotient: need k >= 2");
  const TProfile g = log_cutoff_profile(k);
  const numerics::QuadOptions& opts = quad;
  // Integrate in s = log t over (-log k, 0) and (0, log k).
  const double lk = std::log(k);
  auto in_log = [&](auto&& f) {
    auto ft = [&](double s) {
      const double t = std::exp(s);
      return f(t) * t;
    };
    return numerics::integrate(ft, -lk, 0.0, opts).value + numerics::integrate(ft, 0.0, lk, opts).value;
  };
  const double num = in_log([&](double t) { const double v = g.dg(t); return v * v * t; });
  const double den = in_log([&](double t) { const double v = g.g(t); return v * v / t; });
  return num / den;
}

std::vector<double> default_radial_schedule(double kmax) {
  std::vector<double> ks;
  for (double k = 4.0; k <= kmax; k *= 4.0) ks.push_back(k);
  return ks;
}

double koranyi_upper_bound(int n, const numerics::QuadOptions& quad) {
  if (n < 1) throw domain_error("koranyi_upper_bound: n must be >= 1");
  const numerics::QuadOptions& opts = quad;
  auto weight = [n](double r, double d) {
    const special::Kernels k = d < kPi ? special::kernels_from_end(d) : special::kernels(r);
    const double a = d < kPi ? kTwoPi - d : std::abs(r);
    const double qn = special::q_normalized(k, a);
    const double gamma = std::sqrt(2.0 * std::sqrt(qn));
    const double mu = k.mu_core * std::pow(k.chord, 2 * (n - 1));
    const double eta = k.chord * k.chord / (4.0 * qn);
    return std::make_pair(std::pow(gamma, -2.0 * n) * mu, eta);
  };
  const double num = integrate_r(
      [&](double r, double d) {
        const auto [gm, eta] = weight(r, d);
        return gm * eta;
      },
      0.0, kPi, 2.0 * n + 1.0, opts);
  const double den = integrate_r([&](double r, double d) { return weight(r, d).first; }, 0.0, kPi, 2.0 * n - 1.0, opts);
  return n * n * num / den;
}

std::vector<SharpnessPoint> sharpness_sweep(const ConeSpec& cone, const std::vector<double>& gammas, const numerics::QuadOptions& quad) {
  const int n = cone.n;
  if (!(cone.rho >= 0.0 && cone.rho < kTwoPi)) throw domain_error("sharpness_sweep: need 0 <= rho < 2 pi");
  const Cutoff chi = default_cutoff(cone.rho);
  const double plateau = chi.rho + chi.width;
  const numerics::QuadOptions& opts = quad;

  std::vector<SharpnessPoint> out;
  out.reserve(gammas.size());
  for (double gamma : gammas) {
    if (!(gamma > -0.5)) {
      throw domain_error("sharpness_sweep: gamma must exceed -1/2 (denominator non-integrable), got " +
                         std::to_string(gamma));
    }
    auto flux = [&](double r, double d) {
      const EvenWeights w = even_weights(r, d, n);
      return std::make_pair(w.rw * w.mu, w);
    };
    // Cutoff band: both integrands in full.
    const double band_num = numerics::integrate(
        [&](double r) {
          const auto [f, w] = flux(r, kTwoPi - r);
          const double wr = w.rw / r;
          const double m = chi.derivative(r) * wr - n * gamma * chi.value(r);
          return r * std::pow(f, 2.0 * gamma) * m * m * w.mu;
        },
        chi.rho, plateau, opts).value;
    const double band_den = numerics::integrate(
        [&](double r) {
          const auto [f, w] = flux(r, kTwoPi - r);
          const double c = chi.value(r);
          return c * c * std::pow(f, 2.0 * gamma) * r * w.mu;
        },
        chi.rho, plateau, opts).value;
    // Plateau chi = 1: the numerator integrand is n^2 gamma^2 times the denominator one.
    const double exponent = 2.0 * n * (2.0 * gamma + 1.0) - 1.0;
    const double tail = numerics::integrate_from_endpoint(
        [&](double d) {
          const auto [f, w] = flux(kTwoPi - d, d);
          return std::pow(f, 2.0 * gamma) * (kTwoPi - d) * w.mu;
        },
        kTwoPi - plateau, exponent, opts).value;
    SharpnessPoint p;
    p.gamma = gamma;
    p.tail = tail;
    p.numerator = band_num + n * n * gamma * gamma * tail;
    p.denominator = band_den + tail;
    p.value = p.numerator / p.denominator;
    out.push_back(p);
  }
  return out;
}

std::vector<double> default_gamma_schedule(int steps) {
  std::vector<double> g;
  for (int k = 1; k <= steps; ++k) g.push_back(-0.5 + std::ldexp(1.0, -k));
  return g;
}

numerics::EigResult sl_perp_estimate(const ConeSpec& cone, int grid_n, bool weighted) {
  if (grid_n < 64) throw domain_error("sl_perp_estimate: grid_n must be >= 64");
  if (!(cone.rho > 0.0 && cone.rho < kTwoPi)) throw domain_error("sl_perp_estimate: need 0 < rho < 2 pi");
  const int n = cone.n;
  numerics::SLProblem prob;
  prob.a = cone.rho;
  prob.b = kTwoPi;
  prob.grid_n = grid_n;
  if (weighted) {
    prob.p_coeff = [n](double r) {
      const EvenWeights w = even_weights(r, kTwoPi - r, n);
      return w.rw * w.rw / r * w.mu;
    };
    prob.q_coeff = [n](double r) { return r * even_weights(r, kTwoPi - r, n).mu; };
  } else {
    prob.p_coeff = [n](double r) {
      const EvenWeights w = even_weights(r, kTwoPi - r, n);
      return w.rw * w.rw * w.mu;
    };
    prob.q_coeff = [n](double r) { return even_weights(r, kTwoPi - r, n).mu; };
  }
  return numerics::sl_min_eig(prob);
}

}  // namespace hh::hardy
