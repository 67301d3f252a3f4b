#include "hh/geometry.hpp"

#include "hh/errors.hpp"
#include "hh/numerics.hpp"
#include "hh/special.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hh::geometry {

using special::kTwoPi;

namespace {

constexpr double kUnitTol = 1e-10;

void check_dim(const Eigen::VectorXd& v, const char* who) {
  if (v.size() < 2 || v.size() % 2 != 0) {
    throw domain_error(std::string(who) + ": xi must have even dimension 2n >= 2");
  }
}

void check_polar(const Polar& c, int n, const char* who) {
  if (n < 1) throw domain_error(std::string(who) + ": n must be >= 1");
  if (c.varpi.size() != 2 * n) throw domain_error(std::string(who) + ": varpi must have 2n entries");
  if (std::abs(c.varpi.norm() - 1.0) > kUnitTol) throw domain_error(std::string(who) + ": varpi is not a unit vector");
  if (!(c.t >= 0.0) || !std::isfinite(c.t)) throw domain_error(std::string(who) + ": t must be finite and >= 0");
  if (!(std::abs(c.r) <= kTwoPi)) throw domain_error(std::string(who) + ": |r| must not exceed 2 pi");
}

void check_interior(const Polar& c, const char* who) {
  if (!(c.t > 0.0)) throw domain_error(std::string(who) + ": degenerate coordinates (t = 0)");
  if (!(std::abs(c.r) < kTwoPi)) throw domain_error(std::string(who) + ": degenerate coordinates (|r| = 2 pi)");
}

Eigen::VectorXd e1(int n) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * n);
  v[0] = 1.0;
  return v;
}

// Partial derivatives of Phi at c: d xi/dt, d xi/dr, dz/dt, dz/dr, and the
// scale t chord(r) that maps a sphere direction e to t chord R_{r/2} e.
struct PhiDerivatives {
  Eigen::VectorXd dxi_dt;
  Eigen::VectorXd dxi_dr;
  double dz_dt = 0.0;
  double dz_dr = 0.0;
  double sphere_scale = 0.0;
  double half_angle = 0.0;
};

PhiDerivatives derivatives(const Polar& c) {
  const special::Kernels k = special::kernels(c.r);
  const double r = c.r;
  const double t = c.t;
  PhiDerivatives d;
  d.half_angle = 0.5 * r;
  const Eigen::VectorXd rot = rotate_pairs(c.varpi, d.half_angle);
  const Eigen::VectorXd rot_j = rotate_pairs(apply_j(c.varpi), d.half_angle);
  d.dxi_dt = k.chord * rot;
  d.dxi_dr = t * (-r * k.w_core * rot - 0.5 * k.chord * rot_j);
  d.dz_dt = t * r * k.sine_gap;
  d.dz_dr = 0.5 * t * t * k.dz_core;
  d.sphere_scale = t * k.chord;
  return d;
}

std::vector<Eigen::VectorXd> sphere_directions(const Eigen::VectorXd& varpi) {
  std::vector<Eigen::VectorXd> dirs;
  dirs.push_back(apply_j(varpi));
  for (auto& w : complement_basis(varpi)) dirs.push_back(std::move(w));
  return dirs;
}

Eigen::VectorXd flatten(const Point& p) {
  Eigen::VectorXd v(p.xi.size() + 1);
  v.head(p.xi.size()) = p.xi;
  v[p.xi.size()] = p.z;
  return v;
}

}  // namespace

Point make_point(const Eigen::VectorXd& xi, double z) {
  check_dim(xi, "make_point");
  return Point{xi, z};
}

Point identity(int n) {
  if (n < 1) throw domain_error("identity: n must be >= 1");
  return Point{Eigen::VectorXd::Zero(2 * n), 0.0};
}

Eigen::VectorXd apply_j(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i + 1 < v.size(); i += 2) {
    out[i] = v[i + 1];
    out[i + 1] = -v[i];
  }
  return out;
}

Eigen::VectorXd rotate_pairs(const Eigen::VectorXd& v, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i + 1 < v.size(); i += 2) {
    out[i] = c * v[i] - s * v[i + 1];
    out[i + 1] = s * v[i] + c * v[i + 1];
  }
  return out;
}

Point group_mul(const Point& p, const Point& q) {
  check_dim(p.xi, "group_mul");
  if (p.xi.size() != q.xi.size()) throw domain_error("group_mul: dimension mismatch");
  return Point{p.xi + q.xi, p.z + q.z + 0.5 * p.xi.dot(apply_j(q.xi))};
}

Point inverse(const Point& p) {
  check_dim(p.xi, "inverse");
  return Point{-p.xi, -p.z};
}

Point dilate(double lambda, const Point& p) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw domain_error("dilate: lambda must be positive and finite");
  return Point{lambda * p.xi, lambda * lambda * p.z};
}

double koranyi(const Point& p) {
  const double x2 = p.xi.squaredNorm();
  return std::sqrt(std::sqrt(x2 * x2 + 16.0 * p.z * p.z));
}

Point from_polar(const Polar& c, int n) {
  check_polar(c, n, "from_polar");
  const special::Kernels k = special::kernels(c.r);
  Point p;
  p.xi = c.t * k.chord * rotate_pairs(c.varpi, 0.5 * c.r);
  p.z = 0.5 * c.t * c.t * c.r * k.sine_gap;
  return p;
}

Polar to_polar(const Point& p) {
  check_dim(p.xi, "to_polar");
  const int n = p.n();
  const double norm = p.xi.norm();
  Polar c;
  if (norm == 0.0) {
    c.varpi = e1(n);
    if (p.z == 0.0) return c;
    c.r = p.z > 0 ? kTwoPi : -kTwoPi;
    c.t = std::sqrt(4.0 * special::kPi * std::abs(p.z));
    return c;
  }
  if (p.z == 0.0) {
    c.t = norm;
    c.varpi = p.xi / norm;
    return c;
  }
  const double ratio = (norm / std::abs(p.z)) * norm;
  const double a = special::invert_phi(ratio);
  c.r = p.z > 0 ? a : -a;
  const special::Kernels k = special::kernels(c.r);
  if (a <= special::kPi) {
    c.t = norm / k.chord;
  } else {
    c.t = std::sqrt(2.0 * std::abs(p.z) / (a * k.sine_gap));
  }
  c.varpi = rotate_pairs(p.xi / norm, -0.5 * c.r);
  c.varpi /= c.varpi.norm();
  return c;
}

double cc_distance(const Point& p) { return to_polar(p).t; }

std::vector<Eigen::VectorXd> complement_basis(const Eigen::VectorXd& varpi) {
  const Eigen::Index dim = varpi.size();
  std::vector<Eigen::VectorXd> accepted{varpi, apply_j(varpi)};
  std::vector<Eigen::VectorXd> out;
  std::vector<bool> used(dim, false);
  auto residual = [&](Eigen::Index i) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(dim, i);
    for (const auto& a : accepted) v -= a.dot(v) * a;
    return v;
  };
  while (static_cast<Eigen::Index>(out.size()) < dim - 2) {
    Eigen::Index best = -1;
    double best_norm = 0.0;
    Eigen::VectorXd best_vec;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (used[i]) continue;
      Eigen::VectorXd v = residual(i);
      const double nv = v.norm();
      if (nv > best_norm) {
        best_norm = nv;
        best = i;
        best_vec = std::move(v);
      }
    }
    if (best < 0 || best_norm < 1e-6) throw numerical_error("complement_basis: ran out of independent pivots");
    used[best] = true;
    // Second pass removes the round-off left by the first projection.
    for (const auto& a : accepted) best_vec -= a.dot(best_vec) * a;
    best_vec /= best_vec.norm();
    accepted.push_back(best_vec);
    out.push_back(best_vec);
  }
  return out;
}

JacobianResult jacobian(const Polar& c, int n) {
  check_polar(c, n, "jacobian");
  check_interior(c, "jacobian");
  const PhiDerivatives d = derivatives(c);
  const int dim = 2 * n + 1;
  JacobianResult out;
  out.matrix = Eigen::MatrixXd::Zero(dim, dim);
  out.matrix.col(0).head(2 * n) = d.dxi_dt;
  out.matrix(2 * n, 0) = d.dz_dt;
  const auto dirs = sphere_directions(c.varpi);
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    out.matrix.col(1 + j).head(2 * n) = d.sphere_scale * rotate_pairs(dirs[j], d.half_angle);
  }
  out.matrix.col(dim - 1).head(2 * n) = d.dxi_dr;
  out.matrix(2 * n, dim - 1) = d.dz_dr;
  out.det = out.matrix.determinant();
  return out;
}

JacobianResult jacobian_finite_difference(const Polar& c, int n) {
  check_polar(c, n, "jacobian_finite_difference");
  check_interior(c, "jacobian_finite_difference");
  const int dim = 2 * n + 1;
  JacobianResult out;
  out.matrix = Eigen::MatrixXd::Zero(dim, dim);

  auto column = [&](auto&& shifted, double h) {
    return Eigen::VectorXd((flatten(from_polar(shifted(h), n)) - flatten(from_polar(shifted(-h), n))) / (2.0 * h));
  };

  const double ht = 1e-6 * std::max(1.0, c.t);
  out.matrix.col(0) = column(
      [&](double h) {
        Polar s = c;
        s.t += h;
        return s;
      },
      ht);

  const auto dirs = sphere_directions(c.varpi);
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    out.matrix.col(1 + j) = column(
        [&](double h) {
          Polar s = c;
          s.varpi = std::cos(h) * c.varpi + std::sin(h) * dirs[j];
          s.varpi /= s.varpi.norm();
          return s;
        },
        1e-6);
  }

  const double hr = std::min(1e-6 * std::max(1.0, std::abs(c.r)), 0.5 * (kTwoPi - std::abs(c.r)));
  out.matrix.col(dim - 1) = column(
      [&](double h) {
        Polar s = c;
        s.r += h;
        return s;
      },
      hr);
  out.det = out.matrix.determinant();
  return out;
}

TangentVec push_forward(const Polar& c, const PolarVec& v, int n) {
  check_polar(c, n, "push_forward");
  const PhiDerivatives d = derivatives(c);
  TangentVec out;
  out.base = from_polar(c, n);
  out.v_prime = v.v_t * d.dxi_dt + v.v_r * d.dxi_dr;
  if (v.v_varpi.size() == 2 * n) out.v_prime += d.sphere_scale * rotate_pairs(v.v_varpi, d.half_angle);
  out.v_z = v.v_t * d.dz_dt + v.v_r * d.dz_dr;
  return out;
}

TangentVec grad_delta(const Point& p) {
  check_dim(p.xi, "grad_delta");
  if (p.xi.squaredNorm() == 0.0) throw domain_error("grad_delta: undefined on the center");
  const Polar c = to_polar(p);
  const special::Kernels k = special::kernels(c.r);
  TangentVec out;
  out.base = p;
  out.v_prime = rotate_pairs(c.varpi, c.r);
  out.v_z = 0.25 * c.t * c.r * k.chord * k.chord;
  return out;
}

FrameAtPoint frame(const Polar& c, int n) {
  check_polar(c, n, "frame");
  check_interior(c, "frame");
  const special::SpecialValue sv = special::eval_weights(c.r, n);
  const special::Kernels k = special::kernels(c.r);
  const Eigen::VectorXd jv = apply_j(c.varpi);
  const int dim = 2 * n;

  FrameAtPoint f;
  f.coords = c;
  f.polar_forms.push_back(PolarVec{1.0, Eigen::VectorXd::Zero(dim), c.r / c.t});
  f.polar_forms.push_back(PolarVec{0.0, (sv.rv / c.t) * jv, sv.rw / c.t});
  for (const auto& w : complement_basis(c.varpi)) {
    f.polar_forms.push_back(PolarVec{0.0, w / (c.t * k.chord), 0.0});
  }
  for (const auto& pv : f.polar_forms) f.vectors.push_back(push_forward(c, pv, n));

  f.xi_field = f.vectors[1];
  const TangentVec grad = f.vectors[0];
  // 1 / w = r / (r w) stays finite at r = 0.
  const double inv_w = c.r / sv.rw;
  f.t_field.base = grad.base;
  f.t_field.v_prime = grad.v_prime - inv_w * f.xi_field.v_prime;
  f.t_field.v_z = grad.v_z - inv_w * f.xi_field.v_z;
  f.t_polar = PolarVec{1.0, (sv.rv * inv_w / c.t) * jv, 0.0};
  return f;
}

double sr_inner(const TangentVec& a, const TangentVec& b) { return a.v_prime.dot(b.v_prime); }

double is_horizontal(const TangentVec& v) {
  check_dim(v.base.xi, "is_horizontal");
  if (v.v_prime.size() != v.base.xi.size()) throw domain_error("is_horizontal: dimension mismatch");
  return std::abs(v.v_z - 0.5 * v.base.xi.dot(apply_j(v.v_prime)));
}

Point geodesic(const Eigen::VectorXd& varpi, double p_z, double s) {
  check_dim(varpi, "geodesic");
  if (!(s >= 0.0) || !std::isfinite(p_z)) throw domain_error("geodesic: need s >= 0 and finite p_z");
  if (!(s * std::abs(p_z) < kTwoPi)) throw domain_error("geodesic: s |p_z| must stay below the cut time 2 pi");
  return from_polar(Polar{s, varpi, s * p_z}, static_cast<int>(varpi.size() / 2));
}

double geodesic_length(const Eigen::VectorXd& varpi, double p_z, double s, double tol) {
  const Point end = geodesic(varpi, p_z, s);  // validates the arguments
  (void)end;
  // Closed-form curve xi(sigma) = sigma chord(sigma p_z) R_{sigma p_z / 2} varpi,
  // valid for every real sigma so the difference stencil never leaves it.
  auto xi_at = [&](double sigma) {
    const double x = sigma * p_z;
    const double chord = x == 0.0 ? 1.0 : 2.0 * std::sin(0.5 * x) / x;
    return Eigen::VectorXd(sigma * chord * rotate_pairs(varpi, 0.5 * x));
  };
  constexpr double h = 1e-5;
  auto speed = [&](double sigma) { return ((xi_at(sigma + h) - xi_at(sigma - h)) / (2.0 * h)).norm(); };
  if (s == 0.0) return 0.0;
  numerics::QuadOptions opts;
  opts.abs_tol = tol;
  return numerics::integrate(speed, 0.0, s, opts).value;
}

}  // namespace hh::geometry
