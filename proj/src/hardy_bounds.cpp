#include "hh/errors.hpp"
#include "hh/hardy.hpp"
#include "hh/random.hpp"
#include "hh/special.hpp"
#include "hh/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hh::hardy {

using special::kPi;
using special::kTwoPi;

namespace {

Eigen::VectorXd random_unit(Sampler& s, int dim) {
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = s.normal();
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

}  // namespace

double santalo_bound(int n, double alpha) {
  if (n < 1) throw domain_error("santalo_bound: n must be >= 1");
  if (std::isnan(alpha) || !(alpha > 0.0)) throw domain_error("santalo_bound: alpha must be positive (or +inf)");
  if (std::isinf(alpha)) return 0.0;
  return (n / alpha) * 16.0 * kPi * kPi * kPi / (16.0 + alpha * alpha);
}

BoundReport cone_bounds(const ConeSpec& cone) {
  if (std::isnan(cone.alpha) || !(cone.alpha > 0.0)) throw domain_error("cone_bounds: alpha must be positive");
  BoundReport b;
  b.n = cone.n;
  b.alpha = cone.alpha;
  b.rho = cone.rho;
  b.lower_dir = cone.n * cone.n * cone.rho * cone.rho / 4.0;
  b.upper_dir = kPi * kPi * cone.n * cone.n;
  b.santalo = santalo_bound(cone.n, cone.alpha);
  b.koranyi_upper = koranyi_upper_bound(cone.n);
  return b;
}

double santalo_argmax() {
  // Stationarity of (r - sin r) / (2 r^2): 2 sin r - r - r cos r = 0,
  // decreasing through zero on [2.5, 3.5].
  numerics::RootOptions opts;
  opts.f_tol = 0.0;
  return numerics::find_root_monotone([](double r) { return 2.0 * std::sin(r) - r - r * std::cos(r); }, 2.5, 3.5,
                                      opts, [](double r) { return std::cos(r) - 1.0 + r * std::sin(r); });
}

SantaloReport santalo_geometry_check(std::uint64_t seed, int samples) {
  if (samples < 1) throw domain_error("santalo_geometry_check: samples must be >= 1");
  SantaloReport rep;
  rep.argmax = santalo_argmax();
  rep.max_value = (rep.argmax - std::sin(rep.argmax)) / (2.0 * rep.argmax * rep.argmax);
  rep.expected_value = 1.0 / kTwoPi;
  rep.samples = samples;

  Sampler s(seed);
  const double alphas[] = {0.25, 1.0, 4.0, 16.0};
  for (int i = 0; i < samples; ++i) {
    const int n = 1 + i % 2;
    const double alpha = alphas[(i / 2) % 4];
    const double z0 = s.uniform(0.1, 10.0);
    const double frac = s.uniform();
    const Eigen::VectorXd xi0 = std::sqrt(frac * alpha * z0) * random_unit(s, 2 * n);
    const geometry::Point p{xi0, z0};

    // Section of the translated cone by {z = 0}: ball |xi + c| < R.
    const Eigen::VectorXd c = xi0 + 0.25 * alpha * geometry::apply_j(xi0);
    const double radius = std::sqrt(alpha * z0 + alpha * alpha * xi0.squaredNorm() / 16.0);
    const double bound = 0.5 * std::sqrt(z0) * std::sqrt(alpha * (16.0 + alpha * alpha));
    rep.max_diameter_ratio = std::max(rep.max_diameter_ratio, 2.0 * radius / bound);

    const double delta = geometry::cc_distance(p);
    rep.max_height_ratio = std::max(rep.max_height_ratio, z0 * kTwoPi / (delta * delta));

    for (int j = 0; j < 4; ++j) {
      const Eigen::VectorXd e = random_unit(s, 2 * n);
      for (double scale : {0.99, 1.01}) {
        const geometry::Point q{-c + scale * radius * e, 0.0};
        const geometry::Point pq = geometry::group_mul(p, q);
        const bool inside = pq.xi.squaredNorm() < alpha * pq.z;
        if (inside != (scale < 1.0)) ++rep.membership_failures;
      }
    }
  }
  return rep;
}

AnnulusReport annulus_identity_check(const SeparableFn& f, double r1, double r2, int n, const numerics::QuadOptions& quad) {
  if (n < 1) throw domain_error("annulus_identity_check: n must be >= 1");
  if (!(r1 > 0.0 && r1 < r2 && std::isfinite(r2))) throw domain_error("annulus_identity_check: need 0 < R1 < R2");
  const numerics::QuadOptions& opts = quad;
  const double area = numerics::sphere_area(n);

  auto h_eff = [&](double r) {
    const double d = kTwoPi - std::abs(r);
    const double h = f.h.h(r, d);
    return f.cutoff ? f.cutoff->value(r) * h : h;
  };
  auto over_r = [&](auto&& integrand) {
    // mu vanishes at both ends, so plain adaptive quadrature on each half suffices.
    return numerics::integrate(integrand, -kTwoPi, 0.0, opts).value +
           numerics::integrate(integrand, 0.0, kTwoPi, opts).value;
  };

  AnnulusReport rep;
  const double g2 = f.g.g(r2);
  const double g1 = f.g.g(r1);
  rep.lhs = area * over_r([&](double r) { return (g2 - g1) * h_eff(r) * special::mu(r, n); });

  // Right side: T f from a central difference of the Cartesian function
  // p -> g(t) h(r) along T, at points on the ray varpi = e_1 (the
  // integrand does not depend on varpi).
  auto cartesian = [&](const geometry::Point& p) {
    const geometry::Polar c = geometry::to_polar(p);
    return f.g.g(c.t) * h_eff(c.r);
  };
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(2 * n, 0);
  auto t_derivative = [&](double t, double r) {
    const geometry::FrameAtPoint fr = geometry::frame(geometry::Polar{t, e1, r}, n);
    const geometry::TangentVec& v = fr.t_field;
    const double h = 1e-5 * t;
    const geometry::Point plus = geometry::make_point(v.base.xi + h * v.v_prime, v.base.z + h * v.v_z);
    const geometry::Point minus = geometry::make_point(v.base.xi - h * v.v_prime, v.base.z - h * v.v_z);
    return (cartesian(plus) - cartesian(minus)) / (2.0 * h);
  };
  numerics::QuadOptions noisy = opts;
  noisy.abs_tol = std::max(opts.abs_tol, 1e-12);
  noisy.rel_tol = std::max(opts.rel_tol, 1e-9);
  auto rhs_r = [&](double r) {
    if (std::abs(r) >= kTwoPi) return 0.0;
    const double inner = numerics::integrate([&](double t) { return t_derivative(t, r); }, r1, r2, noisy).value;
    return inner * special::mu(r, n);
  };
  rep.rhs = area * (numerics::integrate(rhs_r, -kTwoPi, 0.0, noisy).value + numerics::integrate(rhs_r, 0.0, kTwoPi, noisy).value);
  const double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  rep.residual = scale == 0.0 ? 0.0 : std::abs(rep.lhs - rep.rhs) / scale;
  return rep;
}

double garofalo_weight(const geometry::Point& p) {
  if (p.xi.squaredNorm() == 0.0) throw domain_error("garofalo_weight: undefined on the center");
  const geometry::Polar c = geometry::to_polar(p);
  return special::eta(c.r) / (c.t * c.t);
}

Eigen::VectorXd koranyi_horizontal_gradient(const geometry::Point& p) {
  const double nrm = geometry::koranyi(p);
  if (nrm == 0.0) throw domain_error("koranyi_horizontal_gradient: undefined at the origin");
  const double n3 = nrm * nrm * nrm;
  const double x2 = p.xi.squaredNorm();
  const double dz = 8.0 * p.z / n3;
  Eigen::VectorXd out(p.xi.size());
  for (Eigen::Index i = 0; i + 1 < p.xi.size(); i += 2) {
    const double x = p.xi[i];
    const double y = p.xi[i + 1];
    // X_i = d/dx_i - (y_i / 2) d/dz, Y_i = d/dy_i + (x_i / 2) d/dz.
    out[i] = x2 * x / n3 - 0.5 * y * dz;
    out[i + 1] = x2 * y / n3 + 0.5 * x * dz;
  }
  return out;
}

double euclid_quotient(int d, double a, double gamma, const numerics::QuadOptions& quad) {
  if (d < 3) throw domain_error("euclid_quotient: need d >= 3");
  if (!(a > 0.0 && a < 0.5 * kPi)) throw domain_error("euclid_quotient: need 0 < a < pi/2");
  if (!(gamma > 0.5 * (2.0 - d))) {
    throw domain_error("euclid_quotient: gamma must exceed (2 - d)/2, got " + std::to_string(gamma));
  }
  const numerics::QuadOptions& opts = quad;
  // Radial factor b(t) = bump on (1, 2); it cancels but is kept explicit.
  const TProfile b = bump_profile(1.0, 2.0);
  const double radial = numerics::integrate([&](double t) { const double v = b.g(t); return v * v * std::pow(t, d - 3); },
                                            1.0, 2.0, opts).value;
  if (gamma == 0.0) return 0.0;

  // Angular integrals in s = pi/2 - phi, so cos phi = sin s, sin phi = cos s.
  const double exponent = 2.0 * gamma + d - 3.0;
  const double length = 0.5 * kPi - a;
  const double num = numerics::integrate_from_endpoint(
      [&](double s) {
        const double c = std::sin(s);
        const double sn = std::cos(s);
        const double dphi = gamma * std::pow(c, gamma - 1.0) * sn;  // -d/dphi cos^gamma
        const double psi = sn / c;
        return dphi * dphi / psi * std::pow(c, d - 2);
      },
      length, exponent, opts).value;
  const double den = numerics::integrate_from_endpoint(
      [&](double s) {
        const double c = std::sin(s);
        const double psi = std::cos(s) / c;
        return std::pow(c, 2.0 * gamma) * psi * std::pow(c, d - 2);
      },
      length, exponent, opts).value;
  return (radial * num) / (radial * den);
}

double euclid_cone_lower_bound(int d, double a) {
  if (d < 3) throw domain_error("euclid_cone_lower_bound: need d >= 3");
  if (!(a > 0.0 && a < 0.5 * kPi)) throw domain_error("euclid_cone_lower_bound: need 0 < a < pi/2");
  const double k = 0.5 * (d - 2);
  const double t = std::tan(a);
  return k * k * t * t;
}

DivergenceReport sphere_divergence_check(int n, int count, std::uint64_t seed, int max_degree) {
  if (n < 1) throw domain_error("sphere_divergence_check: n must be >= 1");
  if (count < 1 || max_degree < 1) throw domain_error("sphere_divergence_check: need count, max_degree >= 1");
  Sampler s(seed);
  DivergenceReport rep;
  rep.n = n;
  rep.count = count;
  for (int k = 0; k < count; ++k) {
    numerics::Polynomial f(n);
    const int terms = 3 + static_cast<int>(s.next() % 6);
    double scale = 0.0;
    for (int j = 0; j < terms; ++j) {
      std::vector<int> e(2 * n, 0);
      const int degree = 1 + static_cast<int>(s.next() % max_degree);
      for (int m = 0; m < degree; ++m) e[s.next() % (2 * n)] += 1;
      const double coeff = s.uniform(-1.0, 1.0);
      f.add(e, coeff);
      scale += std::abs(coeff) * degree;
    }
    const double value = numerics::sphere_integral(numerics::rotation_derivative(f));
    rep.max_abs_integral = std::max(rep.max_abs_integral, std::abs(value));
    rep.max_scale = std::max(rep.max_scale, scale * numerics::sphere_area(n));
  }
  return rep;
}

}  // namespace hh::hardy
