// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "hh/geometry.hpp"
#include "hh/hardy.hpp"
#include "hh/random.hpp"
#include "hh/special.hpp"
#include "hh/sphere.hpp"
#include "oracle_values.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

namespace {

using hh::special::kPi;
using hh::special::kTwoPi;
using namespace hh::geometry;
using namespace hh::hardy;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Halton sequence in the given prime base.
double halton(unsigned index, unsigned base) {
  double f = 1.0, r = 0.0;
  for (unsigned i = index; i > 0; i /= base) {
    f /= base;
    r += f * (i % base);
  }
  return r;
}

Eigen::VectorXd unit(hh::Sampler& s, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = s.normal();
  return v / v.norm();
}

// Quasi-random polar samples: t and |r| from Halton bases 2 and 3, the sign
// of r alternating, varpi from seeded normals.
std::vector<Polar> quasi_random(int n, int count, double t_lo, double t_hi, double r_lo, double r_hi, std::uint64_t seed) {
  hh::Sampler s(seed);
  std::vector<Polar> out;
  for (int i = 0; i < count; ++i) {
    const double a = r_lo + (r_hi - r_lo) * halton(i + 1, 3);
    out.push_back(Polar{t_lo + (t_hi - t_lo) * halton(i + 1, 2), unit(s, 2 * n), i % 2 ? -a : a});
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome frame_validity() {
  const auto t0 = std::chrono::steady_clock::now();
  double gram = 0.0, horiz = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (const Polar& c : quasi_random(n, 1000, 0.1, 10.0, 1e-6, kTwoPi - 1e-6, 100 + n)) {
      const FrameAtPoint f = frame(c, n);
      for (std::size_t a = 0; a < f.vectors.size(); ++a) {
        horiz = std::max(horiz, is_horizontal(f.vectors[a]));
        for (std::size_t b = 0; b < f.vectors.size(); ++b) {
          gram = std::max(gram, std::abs(sr_inner(f.vectors[a], f.vectors[b]) - (a == b ? 1.0 : 0.0)));
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {gram < 1e-9 && horiz < 1e-9 && secs < 10.0,
          fmt("max |G - I| = %.2e, max horizontality = %.2e, %.2f s", gram, horiz, secs)};
}

Outcome jacobian_check() {
  hh::Sampler s(7);
  double analytic = 0.0, fd = 0.0;
  for (int n = 1; n <= 2; ++n) {
    for (int i = 0; i < 100; ++i) {
      const double a = s.uniform(1e-2, kTwoPi - 1e-2);
      const Polar c{s.uniform(0.1, 10.0), unit(s, 2 * n), s.uniform() < 0.5 ? -a : a};
      const double ref = std::pow(c.t, 2 * n + 1) * hh::special::mu(c.r, n);
      analytic = std::max(analytic, std::abs(std::abs(jacobian(c, n).det) - ref) / ref);
      fd = std::max(fd, std::abs(std::abs(jacobian_finite_difference(c, n).det) - ref) / ref);
    }
  }
  return {analytic < 1e-6 && fd < 1e-6, fmt("max rel. error analytic %.2e, finite difference %.2e", analytic, fd)};
}

Outcome round_trip() {
  hh::Sampler s(11);
  double err = 0.0;
  int count = 0;
  auto compare = [&](const Polar& c, int n) {
    const Polar back = to_polar(from_polar(c, n));
    err = std::max({err, std::abs(back.t - c.t), std::abs(back.r - c.r), (back.varpi - c.varpi).cwiseAbs().maxCoeff()});
    ++count;
  };
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 3;
    double a = s.uniform(0.0, kTwoPi);
    if (i % 10 == 0) a = 1e-6;
    if (i % 10 == 1) a = 1e-12;
    if (i % 10 == 2) a = kTwoPi - 1e-6;
    compare(Polar{s.uniform(0.1, 10.0), unit(s, 2 * n), i % 2 ? -a : a}, n);
  }
  // Conventions: the center, the plane z = 0 and the origin.
  for (int n = 1; n <= 3; ++n) {
    const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(2 * n, 0);
    compare(Polar{2.0, e1, kTwoPi}, n);
    compare(Polar{2.0, e1, -kTwoPi}, n);
    compare(Polar{2.0, unit(s, 2 * n), 0.0}, n);
    compare(Polar{0.0, e1, 0.0}, n);
  }
  return {err < 1e-9, fmt("max componentwise error %.2e over %.0f points", err, count)};
}

Outcome flux_identity() {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) worst = std::max(worst, hh::special::check_identities(n, 10000).max_flux_residual);
  return {worst < 1e-6, fmt("max |d/dr (r w mu) + n r mu| = %.2e on 10^4 points", worst)};
}

Outcome garofalo_identity() {
  double ident = 0.0;
  for (int n = 1; n <= 3; ++n) ident = std::max(ident, hh::special::check_identities(n, 10000).max_garofalo_residual);
  hh::Sampler s(13);
  double pointwise = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 2;
    const double a = s.uniform(1e-3, kTwoPi - 1e-3);
    const Polar c{s.uniform(0.1, 10.0), unit(s, 2 * n), s.uniform() < 0.5 ? -a : a};
    const FrameAtPoint f = frame(c, n);
    const double lhs = sr_inner(f.t_field, f.t_field) * c.t * c.t;
    const Point p = from_polar(c, n);
    const double gauge = koranyi(p);
    const double rhs = gauge * gauge / koranyi_horizontal_gradient(p).squaredNorm();
    pointwise = std::max(pointwise, std::abs(lhs - rhs) / rhs);
  }
  return {ident < 1e-10 && pointwise < 1e-9,
          fmt("identity residual %.2e, max rel. |T|^2 delta^2 vs N^2/|grad N|^2 = %.2e", ident, pointwise)};
}

Outcome koranyi_bound() {
  const auto t0 = std::chrono::steady_clock::now();
  const double v1 = koranyi_upper_bound(1);
  const double v2 = koranyi_upper_bound(2);
  const double secs = seconds_since(t0);
  const double d1 = std::abs(v1 - hh::oracle::kKoranyiUpperN1);
  const double d2 = std::abs(v2 - hh::oracle::kKoranyiUpperN2);
  const bool pass = v1 < 1.0 - 0.01 && v2 < 4.0 - 0.04 && d1 < 1e-8 && d2 < 1e-8 && secs < 5.0;
  char buf[256];
  std::snprintf(buf, sizeof buf, "n=1: %.12f, n=2: %.12f, oracle gaps %.1e / %.1e, %.2f s", v1, v2, d1, d2, secs);
  return {pass, buf};
}

Outcome radial_degeneration() {
  bool decreasing = true;
  double prev = INFINITY, last = 0.0;
  for (double k : {4.0, 16.0, 256.0, 4096.0}) {
    last = radial_sequence_quotient(k);
    decreasing = decreasing && last < prev;
    prev = last;
  }
  return {decreasing && last < 0.1, fmt("strictly decreasing: %.0f, value at k = 4096: %.6f", decreasing, last)};
}

Outcome weighted_sl() {
  bool pass = true;
  std::string detail;
  for (int n = 1; n <= 2; ++n) {
    const double target = n * n / 4.0;
    double prev = INFINITY;
    bool above = true, monotone = true;
    for (int g : {256, 512, 1024, 2048, 4096}) {
      const double lambda = sl_perp_estimate(ConeSpec::from_rho(n, kPi / 2), g, true).lambda_min;
      above = above && lambda >= target - 1e-6;
      monotone = monotone && lambda <= prev;
      prev = lambda;
    }
    // n = 1 asks for lambda(4096) < 0.40 = 1.6 n^2/4; the same ratio is used for n = 2.
    const bool close = prev < 1.6 * target;
    pass = pass && above && monotone && close;
    detail += fmt("n=%.0f: lambda(4096) = %.6f (target %.2f)", n, prev, target);
    if (!(above && monotone)) detail += " [pattern broken]";
    detail += n == 1 ? "; " : "";
  }
  return {pass, detail};
}

Outcome sharpness() {
  bool above = true;
  double worst = INFINITY;
  for (int n = 1; n <= 2; ++n) {
    for (const auto& p : sharpness_sweep(ConeSpec::from_rho(n, kPi / 2), default_gamma_schedule(12))) {
      const double ratio = p.value / (n * n / 4.0);
      worst = std::min(worst, ratio);
      above = above && ratio >= 1.0 - 1e-6;
    }
  }
  const double near = sharpness_sweep(ConeSpec::from_rho(1, kPi / 2), {-0.5 + 1e-3}).front().value;
  return {above && std::abs(near - 0.25) < 0.05,
          fmt("min R / (n^2/4) = %.6f, R(-1/2 + 1e-3) = %.6f for n = 1", worst, near)};
}

Outcome cone_consistency() {
  bool pass = true;
  std::string detail;
  for (auto [n, rho] : {std::pair{1, kPi / 2}, std::pair{1, kPi}, std::pair{2, kPi}}) {
    const double lambda = sl_perp_estimate(ConeSpec::from_rho(n, rho), 1024, false).lambda_min;
    const double lo = n * n * rho * rho / 4.0, hi = kPi * kPi * n * n;
    pass = pass && lambda >= lo - 1e-6 && lambda <= hi + 1e-6;
    detail += fmt("%.3f in [%.3f, %.3f]; ", lambda, lo, hi);
  }
  return {pass, detail.substr(0, detail.size() - 2)};
}

Outcome santalo() {
  const double s4 = cone_bounds(ConeSpec::from_alpha(1, 4.0)).santalo;
  const double small = santalo_bound(1, 0.01);
  const double r = santalo_argmax();
  const double maxv = (r - std::sin(r)) / (2 * r * r);
  const bool pass = std::abs(s4 - std::pow(kPi, 3) / 8) < 1e-12 && small > 1e3 && std::abs(r - kPi) < 1e-8 &&
                    std::abs(maxv - 1 / (2 * kPi)) < 1e-8;
  return {pass, fmt("santalo(4) - pi^3/8 = %.1e, santalo(0.01) = %.1f, argmax - pi = %.1e", s4 - std::pow(kPi, 3) / 8, small,
                    r - kPi)};
}

Outcome annulus() {
  double worst = 0.0;
  for (int n = 1; n <= 2; ++n) {
    const std::vector<SeparableFn> fs = {
        {constant_profile(), constant_r(), std::nullopt},
        {power_profile(2.0), constant_r(), std::nullopt},
        {power_profile(2.0),
         from_functions([](double r) { return 2.0 + std::cos(0.5 * r); }, [](double r) { return -0.5 * std::sin(0.5 * r); }),
         std::nullopt}};
    for (const auto& f : fs) worst = std::max(worst, annulus_identity_check(f, 1.0, 2.0, n).residual);
  }
  return {worst < 1e-6, fmt("max relative residual %.2e", worst)};
}

Outcome divergence() {
  double worst = 0.0;
  for (int n = 1; n <= 2; ++n) worst = std::max(worst, sphere_divergence_check(n, 20, 0).max_abs_integral);
  return {worst < 1e-12, fmt("max |int V f| = %.2e", worst)};
}

Outcome euclid() {
  double worst = 0.0;
  for (auto [d, g] : {std::pair{3, 1.0}, std::pair{4, 0.5}, std::pair{5, 2.0}}) {
    worst = std::max(worst, std::abs(euclid_quotient(d, kPi / 4, g) - g * g));
  }
  const double lb = euclid_cone_lower_bound(3, kPi / 4);
  return {worst < 1e-8 && std::abs(lb - 0.25) < 1e-15, fmt("max |quotient - gamma^2| = %.2e, lower bound %.17g", worst, lb)};
}

Outcome geodesics() {
  hh::Sampler s(17);
  double dist = 0.0, length = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 2;
    const Eigen::VectorXd w = unit(s, 2 * n);
    const double pz = s.uniform(-4.0, 4.0);
    const double cap = std::abs(pz) > 0 ? (kTwoPi - 1e-3) / std::abs(pz) : 10.0;
    const double len = s.uniform(0.0, std::min(10.0, cap));
    dist = std::max(dist, std::abs(cc_distance(geodesic(w, pz, len)) - len));
    if (len > 0) length = std::max(length, std::abs(geodesic_length(w, pz, len) - len));
  }
  return {dist < 1e-9 && length < 1e-6, fmt("max |delta - s| = %.2e, max |length - s| = %.2e", dist, length)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"frame validity", frame_validity},
      {"Jacobian determinant", jacobian_check},
      {"polar round trip", round_trip},
      {"flux identity", flux_identity},
      {"Garofalo identity", garofalo_identity},
      {"Koranyi upper bound", koranyi_bound},
      {"radial degeneration", radial_degeneration},
      {"weighted Sturm-Liouville sharpness", weighted_sl},
      {"sharpness sweep", sharpness},
      {"cone bounds consistency", cone_consistency},
      {"Santalo bound", santalo},
      {"annulus identity", annulus},
      {"sphere divergence", divergence},
      {"Euclidean cone", euclid},
      {"geodesics", geodesics},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
