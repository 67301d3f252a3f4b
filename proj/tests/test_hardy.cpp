#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hh/errors.hpp"
#include "hh/hardy.hpp"
#include "hh/numerics.hpp"
#include "hh/special.hpp"
#include "hh/sphere.hpp"
#include "oracle_values.hpp"

#include <cmath>
#include <string>

using namespace hh::hardy;
using hh::special::kPi;
using hh::special::kTwoPi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// A few admissible test functions on the cone r > rho.
std::vector<SeparableFn> sample_functions(int n, double rho) {
  std::vector<SeparableFn> out;
  const Cutoff cut = default_cutoff(rho);
  out.push_back({bump_profile(0.5, 2.0), constant_r(), cut});
  out.push_back({bump_profile(1.0, 3.0), r_power(2), cut});
  out.push_back({bump_profile(0.2, 1.0),
                 from_functions([](double r) { return 1.0 + 0.5 * std::sin(r); }, [](double r) { return 0.5 * std::cos(r); }),
                 cut});
  // Negative powers would make the radial energy infinite at 2 pi.
  out.push_back({bump_profile(0.5, 2.0), flux_power(n, 0.3), cut});
  return out;
}

}  // namespace

TEST_CASE("cone parameters") {
  const ConeSpec half = ConeSpec::from_alpha(1, INFINITY);
  CHECK(half.rho == 0.0);
  CHECK(std::abs(ConeSpec::from_alpha(1, 8.0 / kPi).rho - kPi) < 1e-10);
  const ConeSpec c = ConeSpec::from_rho(2, 2.0);
  CHECK(std::abs(hh::special::invert_phi(c.alpha) - c.rho) < 1e-10);
  CHECK(c.homogeneous_dimension() == 6);
  CHECK(ConeSpec::whole_space(1).is_whole_space());
  CHECK_THROWS_AS(ConeSpec::from_alpha(1, 0.0), hh::domain_error);
  CHECK_THROWS_AS(ConeSpec::from_alpha(1, -2.0), hh::domain_error);
}

TEST_CASE("cutoff is a C1 smoothstep") {
  const Cutoff c = default_cutoff(kPi / 2);
  CHECK(c.width == doctest::Approx(0.1 * (kTwoPi - kPi / 2)));
  CHECK(c.value(kPi / 2) == 0.0);
  CHECK(c.value(kPi / 2 + c.width) == 1.0);
  CHECK(c.value(kPi / 2 + 0.5 * c.width) == doctest::Approx(0.5));
  CHECK(c.derivative(kPi / 2) == 0.0);
  CHECK(c.derivative(kPi / 2 + c.width) == 0.0);
  CHECK(c.derivative(kPi / 2 + 0.5 * c.width) == doctest::Approx(1.5 / c.width));
}

TEST_CASE("bounds for a few cones") {
  const BoundReport half = cone_bounds(ConeSpec::from_alpha(1, INFINITY));
  CHECK(half.rho == 0.0);
  CHECK(half.lower_dir == 0.0);
  CHECK(half.santalo == 0.0);
  const BoundReport b = cone_bounds(ConeSpec::from_alpha(1, 8.0 / kPi));
  CHECK(std::abs(b.lower_dir - kPi * kPi / 4) < 1e-9);
  CHECK(b.upper_dir == doctest::Approx(kPi * kPi));
  CHECK(b.lower_dir <= b.upper_dir);
  const BoundReport s = cone_bounds(ConeSpec::from_alpha(1, 4.0));
  CHECK(std::abs(s.santalo - std::pow(kPi, 3) / 8) < 1e-12);
  CHECK(santalo_bound(1, 0.01) > 1e3);
  CHECK(s.koranyi_upper < 1.0);
}

TEST_CASE("Santalo maximiser and translated-cone geometry") {
  const double r = santalo_argmax();
  CHECK(std::abs(r - kPi) < 1e-8);
  CHECK(std::abs((r - std::sin(r)) / (2 * r * r) - 1.0 / (2 * kPi)) < 1e-8);
  const SantaloReport rep = santalo_geometry_check(0, 200);
  CHECK(rep.samples == 200);
  CHECK(rep.max_diameter_ratio <= 1.0 + 1e-12);
  CHECK(rep.max_height_ratio <= 1.0 + 1e-12);
  CHECK(rep.membership_failures == 0);
  // Small r: (r - sin r)/(2 r^2) ~ r / 12.
  const double small = 1e-3;
  CHECK(std::abs((small - std::sin(small)) / (2 * small * small) - small / 12) < 1e-9);
}

TEST_CASE("Koranyi upper bound matches the frozen oracle") {
  const double v1 = koranyi_upper_bound(1);
  const double v2 = koranyi_upper_bound(2);
  const double v3 = koranyi_upper_bound(3);
  CHECK(std::abs(v1 - hh::oracle::kKoranyiUpperN1) < 1e-10);
  CHECK(std::abs(v2 - hh::oracle::kKoranyiUpperN2) < 1e-10);
  CHECK(std::abs(v3 - hh::oracle::kKoranyiUpperN3) < 1e-10);
  CHECK(v1 < 0.99);
  CHECK(v2 < 0.99 * 4);
  CHECK(v3 < 0.99 * 9);
}

TEST_CASE("radial sequence degenerates") {
  double prev = INFINITY;
  for (double k : {4.0, 16.0, 64.0, 256.0, 1024.0, 4096.0}) {
    const double q = radial_sequence_quotient(k);
    const double lk = std::log(k);
    CHECK(rel(q, 3.0 / (lk * lk)) < 1e-10);
    CHECK(q < prev);
    prev = q;
  }
  CHECK(prev < 0.1);
  CHECK(default_radial_schedule(4096).back() == 4096.0);
  CHECK_THROWS_AS(radial_sequence_quotient(1.5), hh::domain_error);
}

TEST_CASE("radial quotient of a pure t profile in the whole space") {
  // u = t^{-n} h_k(t): V_1 u = g', the cross term integrates to zero and the
  // quotient is n^2 + 3 / log(k)^2.
  for (int n = 1; n <= 2; ++n) {
    const double k = 16.0;
    const SeparableFn u{times_power(log_cutoff_profile(k), -n), constant_r(), std::nullopt};
    const double q = separable_quotient(u, ConeSpec::whole_space(n), Variant::radial);
    CHECK(rel(q, n * n + 3.0 / std::pow(std::log(k), 2)) < 1e-9);
  }
}

TEST_CASE("numerator decomposition and the weighted inequality") {
  for (int n = 1; n <= 2; ++n) {
    for (double rho : {kPi / 2, kPi}) {
      const ConeSpec cone = ConeSpec::from_rho(n, rho);
      for (const auto& u : sample_functions(n, rho)) {
        const double full = separable_quotient(u, cone, Variant::full);
        const double radial = separable_quotient(u, cone, Variant::radial);
        const double perp = separable_quotient(u, cone, Variant::perp);
        const double weighted = separable_quotient(u, cone, Variant::perp_weighted);
        const double garofalo = separable_quotient(u, cone, Variant::garofalo);
        CHECK(full >= radial);
        CHECK(full >= perp);
        CHECK(std::abs(full - radial - perp) < 1e-9 * full);
        CHECK(weighted >= n * n / 4.0 - 1e-6);
        CHECK(rho * rho * weighted <= perp * (1 + 1e-9));
        CHECK(perp <= 4 * kPi * kPi * weighted * (1 + 1e-9));
        CHECK(garofalo >= n * n - 1e-6);
      }
    }
  }
}

TEST_CASE("constant in r: only the cutoff band feeds the perpendicular numerator") {
  const double rho = kPi / 2;
  const ConeSpec cone = ConeSpec::from_rho(1, rho);
  const SeparableFn u{bump_profile(0.5, 2.0), constant_r(), default_cutoff(rho)};
  const QuotientParts p = separable_quotient_parts(u, cone, Variant::perp);
  CHECK(p.numerator > 0.0);
  SeparableFn no_cut = u;
  no_cut.cutoff.reset();
  CHECK(separable_quotient_parts(no_cut, ConeSpec::whole_space(1), Variant::perp).numerator == 0.0);
}

TEST_CASE("variant names round trip") {
  for (Variant v : {Variant::full, Variant::radial, Variant::perp, Variant::perp_weighted, Variant::garofalo}) {
    CHECK(variant_from_name(variant_name(v)) == v);
  }
  CHECK_THROWS_AS(variant_from_name("nope"), hh::domain_error);
}

TEST_CASE("non-integrable denominators name the exponent") {
  const ConeSpec cone = ConeSpec::from_rho(1, kPi / 2);
  const SeparableFn u{bump_profile(0.5, 2.0), flux_power(1, -0.6), default_cutoff(kPi / 2)};
  try {
    separable_quotient(u, cone, Variant::perp_weighted);
    FAIL("expected a domain error");
  } catch (const hh::domain_error& e) {
    CHECK(std::string(e.what()).find("exponent") != std::string::npos);
  }
  CHECK_THROWS_AS(sharpness_sweep(cone, {-0.5}), hh::domain_error);
}

TEST_CASE("sharpness quotient matches the oracle") {
  const auto p = sharpness_sweep(ConeSpec::from_rho(1, kPi / 2), {0.0, -0.25});
  CHECK(rel(p[0].value, hh::oracle::kSharpnessN1RhoHalfPiGamma0) < 1e-9);
  CHECK(rel(p[1].value, hh::oracle::kSharpnessN1RhoHalfPiGammaM0p25) < 1e-9);
  const auto q = sharpness_sweep(ConeSpec::from_rho(2, kPi), {-0.25});
  CHECK(rel(q[0].value, hh::oracle::kSharpnessN2RhoPiGammaM0p25) < 1e-9);
}

TEST_CASE("sharpness quotient equals the separable weighted quotient") {
  const double rho = kPi / 2;
  const ConeSpec cone = ConeSpec::from_rho(1, rho);
  for (double g : {0.0, -0.25, -0.4}) {
    const SeparableFn u{bump_profile(0.5, 2.0), flux_power(1, g), default_cutoff(rho)};
    const double sep = separable_quotient(u, cone, Variant::perp_weighted);
    CHECK(rel(sep, sharpness_sweep(cone, {g}).front().value) < 1e-8);
  }
}

TEST_CASE("sharpness sweep approaches n^2/4 from above") {
  const auto gammas = default_gamma_schedule(12);
  REQUIRE(gammas.size() == 12);
  CHECK(gammas.front() == 0.0);
  CHECK(gammas.back() == -0.5 + std::ldexp(1.0, -12));
  for (int n = 1; n <= 2; ++n) {
    const auto pts = sharpness_sweep(ConeSpec::from_rho(n, kPi / 2), gammas);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(pts[i].value >= n * n / 4.0 * (1 - 1e-6));
      if (i > 0) CHECK(pts[i].value < pts[i - 1].value);
    }
  }
  const double near = sharpness_sweep(ConeSpec::from_rho(1, kPi / 2), {-0.5 + 1e-3}).front().value;
  CHECK(std::abs(near - 0.25) < 0.05);
}

TEST_CASE("Sturm-Liouville estimates of the perpendicular constants") {
  for (auto [n, rho] : {std::pair{1, kPi / 2}, std::pair{2, kPi / 2}, std::pair{2, kPi}}) {
    const ConeSpec cone = ConeSpec::from_rho(n, rho);
    double prev = INFINITY;
    for (int g : {256, 512, 1024, 2048, 4096}) {
      const auto e = sl_perp_estimate(cone, g, true);
      CHECK(e.lambda_min >= n * n / 4.0 - 1e-6);
      CHECK(e.lambda_min <= prev);
      CHECK(std::abs(e.rayleigh_quotient - e.lambda_min) / e.lambda_min < 1e-10);
      prev = e.lambda_min;
    }
  }
  for (auto [n, rho] : {std::pair{1, kPi / 2}, std::pair{1, kPi}, std::pair{2, kPi}}) {
    const auto e = sl_perp_estimate(ConeSpec::from_rho(n, rho), 1024, false);
    CHECK(e.lambda_min >= n * n * rho * rho / 4 - 1e-6);
    CHECK(e.lambda_min <= kPi * kPi * n * n + 1e-6);
  }
  CHECK_THROWS_AS(sl_perp_estimate(ConeSpec::from_alpha(1, INFINITY), 256, false), hh::domain_error);
  CHECK_THROWS_AS(sl_perp_estimate(ConeSpec::from_rho(1, 1.0), 32, true), hh::domain_error);
}

TEST_CASE("annulus identity") {
  for (int n = 1; n <= 2; ++n) {
    const SeparableFn one{constant_profile(), constant_r(), std::nullopt};
    const AnnulusReport a = annulus_identity_check(one, 1.0, 2.0, n);
    CHECK(a.lhs == 0.0);
    CHECK(std::abs(a.rhs) < 1e-12);

    const SeparableFn t2{power_profile(2.0), constant_r(), std::nullopt};
    const AnnulusReport b = annulus_identity_check(t2, 1.0, 2.0, n);
    const double mass = 2 * hh::numerics::integrate([n](double r) { return hh::special::mu(r, n); }, 0.0, kTwoPi,
                                                    {1e-15, 1e-14, 1'000'000}).value;
    CHECK(rel(b.lhs, 3.0 * mass * hh::numerics::sphere_area(n)) < 1e-10);
    CHECK(b.residual < 1e-8);

    const SeparableFn t2h{power_profile(2.0),
                          from_functions([](double r) { return 2.0 + std::cos(0.5 * r); },
                                         [](double r) { return -0.5 * std::sin(0.5 * r); }),
                          std::nullopt};
    CHECK(annulus_identity_check(t2h, 1.0, 2.0, n).residual < 1e-6);
  }
  CHECK_THROWS_AS(annulus_identity_check({constant_profile(), constant_r(), std::nullopt}, 2.0, 1.0, 1),
                  hh::domain_error);
}

TEST_CASE("Garofalo weight") {
  Eigen::VectorXd xi(2);
  xi << 3.0, 4.0;
  const auto p = hh::geometry::make_point(xi, 0.0);
  CHECK(std::abs(garofalo_weight(p) - 1.0 / 25.0) < 1e-15);
  CHECK(std::abs(koranyi_horizontal_gradient(p).norm() - 1.0) < 1e-15);
  Eigen::VectorXd xi2(4);
  xi2 << 0.3, -1.2, 0.7, 0.4;
  const auto q = hh::geometry::make_point(xi2, 0.9);
  const double nrm = hh::geometry::koranyi(q);
  CHECK(rel(garofalo_weight(q), koranyi_horizontal_gradient(q).squaredNorm() / (nrm * nrm)) < 1e-12);
  CHECK_THROWS_AS(garofalo_weight(hh::geometry::make_point(Eigen::VectorXd::Zero(2), 1.0)), hh::domain_error);
}

TEST_CASE("Euclidean cone quotient") {
  CHECK(std::abs(euclid_quotient(3, kPi / 4, 1.0) - 1.0) < 1e-8);
  CHECK(std::abs(euclid_quotient(4, kPi / 4, 0.5) - 0.25) < 1e-8);
  CHECK(std::abs(euclid_quotient(5, kPi / 6, 2.0) - 4.0) < 1e-8);
  CHECK(euclid_quotient(4, kPi / 3, 0.0) == 0.0);
  CHECK_THROWS_AS(euclid_quotient(3, kPi / 4, -0.5), hh::domain_error);
  CHECK(euclid_cone_lower_bound(3, kPi / 4) == doctest::Approx(0.25).epsilon(1e-15));
  double prev = 0.0;
  for (double a = 0.1; a < kPi / 2; a += 0.1) {
    const double v = euclid_cone_lower_bound(3, a);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(euclid_cone_lower_bound(3, kPi / 2 - 1e-8) > 1e14);
  CHECK_THROWS_AS(euclid_cone_lower_bound(2, 0.5), hh::domain_error);
}

TEST_CASE("rotation derivative divergence check") {
  for (int n = 1; n <= 2; ++n) {
    const DivergenceReport r = sphere_divergence_check(n, 20, 0);
    CHECK(r.count == 20);
    CHECK(r.max_abs_integral < 1e-12);
  }
}
