#pragma once

#include <Eigen/Dense>

#include <vector>

namespace hh::geometry {

// A point (xi, z) of H^n, xi = (x_1, y_1, ..., x_n, y_n).
struct Point {
  Eigen::VectorXd xi;
  double z = 0.0;
  int n() const { return static_cast<int>(xi.size() / 2); }
};

// Geodesic polar coordinates: t is the CC distance from the origin,
// varpi a unit vector of R^{2n}, r in [-2 pi, 2 pi].
struct Polar {
  double t = 0.0;
  Eigen::VectorXd varpi;
  double r = 0.0;
};

// Tangent vector (v', v_z) attached to a base point.
struct TangentVec {
  Eigen::VectorXd v_prime;
  double v_z = 0.0;
  Point base;
};

// Tangent vector in polar coordinates: d/dt, a vector tangent to the
// sphere at varpi, and d/dr components.
struct PolarVec {
  double v_t = 0.0;
  Eigen::VectorXd v_varpi;
  double v_r = 0.0;
};

struct FrameAtPoint {
  Polar coords;
  std::vector<TangentVec> vectors;    // pushforwards of V_1, ..., V_2n
  std::vector<PolarVec> polar_forms;  // V_1, ..., V_2n themselves
  TangentVec xi_field;                // the polar field, pushforward of V_2
  TangentVec t_field;                 // grad delta - xi_field / w
  PolarVec t_polar;                   // (1, r v / (t w) J varpi, 0)
};

struct JacobianResult {
  // Columns: d/dt, the sphere directions (J varpi, W_1, ..., W_{2n-2}), d/dr.
  Eigen::MatrixXd matrix;
  double det = 0.0;
};

Point make_point(const Eigen::VectorXd& xi, double z);
Point identity(int n);

// J applied to every (x_i, y_i) pair: (a, b) -> (b, -a).
Eigen::VectorXd apply_j(const Eigen::VectorXd& v);
// Rotation by angle theta applied to every pair.
Eigen::VectorXd rotate_pairs(const Eigen::VectorXd& v, double theta);

Point group_mul(const Point& p, const Point& q);
Point inverse(const Point& p);
Point dilate(double lambda, const Point& p);
double koranyi(const Point& p);

Point from_polar(const Polar& c, int n);
Polar to_polar(const Point& p);
double cc_distance(const Point& p);

// Orthonormal basis of varpi^perp intersected with (J varpi)^perp, by
// Gram-Schmidt on the coordinate basis with largest-residual pivoting.
std::vector<Eigen::VectorXd> complement_basis(const Eigen::VectorXd& varpi);

JacobianResult jacobian(const Polar& c, int n);
// Central-difference Jacobian of from_polar in the same column basis,
// step 1e-6 max(1, |coordinate|) (shortened so r stays inside [-2 pi, 2 pi]).
JacobianResult jacobian_finite_difference(const Polar& c, int n);

TangentVec push_forward(const Polar& c, const PolarVec& v, int n);
TangentVec grad_delta(const Point& p);
FrameAtPoint frame(const Polar& c, int n);

// Sub-Riemannian inner product of the horizontal parts.
double sr_inner(const TangentVec& a, const TangentVec& b);
// |v_z - 1/2 <xi, J v'>| at the base point.
double is_horizontal(const TangentVec& v);

Point geodesic(const Eigen::VectorXd& varpi, double p_z, double s);
// Sub-Riemannian length of the geodesic on [0, s] from adaptive quadrature
// of |d xi / ds|, the velocity taken by central differences.
double geodesic_length(const Eigen::VectorXd& varpi, double p_z, double s, double tol = 1e-10);

}  // namespace hh::geometry
