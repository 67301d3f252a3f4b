#include "hh/errors.hpp"
#include "hh/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace hh::numerics {

namespace {

constexpr std::array<double, 4> kGlNodes = {-0.861136311594052575223946488892809,
                                            -0.339981043584856264802665759103245,
                                            0.339981043584856264802665759103245,
                                            0.861136311594052575223946488892809};
constexpr std::array<double, 4> kGlWeights = {0.347854845137453857373063949221999,
                                              0.652145154862546142626936050778000,
                                              0.652145154862546142626936050778000,
                                              0.347854845137453857373063949221999};

// Symmetric tridiagonal matrix: diag[i], off[i] couples i and i + 1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

struct Pencil {
  Tridiagonal stiffness;
  Tridiagonal mass;
  std::size_t size() const { return stiffness.diag.size(); }
};

// Number of pencil eigenvalues strictly below lambda (inertia of K - lambda M).
int sturm_count(const Pencil& pen, double lambda) {
  const auto& k = pen.stiffness;
  const auto& m = pen.mass;
  int negatives = 0;
  double pivot = 1.0;
  for (std::size_t i = 0; i < pen.size(); ++i) {
    double d = k.diag[i] - lambda * m.diag[i];
    if (i > 0) {
      const double e = k.off[i - 1] - lambda * m.off[i - 1];
      d -= e * e / pivot;
    }
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++negatives;
    pivot = d;
  }
  return negatives;
}

std::vector<double> multiply(const Tridiagonal& t, const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = t.diag[i] * x[i];
    if (i > 0) y[i] += t.off[i - 1] * x[i - 1];
    if (i + 1 < n) y[i] += t.off[i] * x[i + 1];
  }
  return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double rayleigh(const Pencil& pen, const std::vector<double>& x) {
  return dot(x, multiply(pen.stiffness, x)) / dot(x, multiply(pen.mass, x));
}

// Solves (K - sigma M) x = rhs; the shifted matrix is positive definite
// because sigma stays below the smallest eigenvalue.
std::vector<double> shifted_solve(const Pencil& pen, double sigma, std::vector<double> rhs) {
  const std::size_t n = pen.size();
  std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = pen.stiffness.diag[i] - sigma * pen.mass.diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = pen.stiffness.off[i] - sigma * pen.mass.off[i];
  // LDL^T elimination.
  for (std::size_t i = 1; i < n; ++i) {
    const double l = e[i - 1] / d[i - 1];
    d[i] -= l * e[i - 1];
    rhs[i] -= l * rhs[i - 1];
  }
  rhs[n - 1] /= d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - e[i] * rhs[i + 1]) / d[i];
  return rhs;
}

}  // namespace

EigResult sl_min_eig(const SLProblem& prob, double rel_tol) {
  if (prob.grid_n < 32) throw domain_error("sl_min_eig: grid_n must be >= 32");
  if (!(prob.a < prob.b)) throw domain_error("sl_min_eig: need a < b");
  const int cells = prob.grid_n;
  const double h = (prob.b - prob.a) / cells;

  std::vector<double> nodes(cells + 1);
  for (int i = 0; i <= cells; ++i) nodes[i] = prob.a + i * h;
  nodes[cells] = prob.b;

  // Full nodal system, node 0 is dropped afterwards (Dirichlet).
  Tridiagonal k_full{std::vector<double>(cells + 1, 0.0), std::vector<double>(cells, 0.0)};
  Tridiagonal m_full{std::vector<double>(cells + 1, 0.0), std::vector<double>(cells, 0.0)};
  bool any_mass = false;
  for (int c = 0; c < cells; ++c) {
    const double x0 = nodes[c];
    const double x1 = nodes[c + 1];
    const double len = x1 - x0;
    double p_int = 0.0, m00 = 0.0, m01 = 0.0, m11 = 0.0;
    for (std::size_t g = 0; g < kGlNodes.size(); ++g) {
      const double s = 0.5 * (1.0 + kGlNodes[g]);
      const double x = x0 + s * len;
      const double wgt = 0.5 * kGlWeights[g] * len;
      const double p = prob.p_coeff(x);
      const double q = prob.q_coeff(x);
      if (!std::isfinite(p) || !std::isfinite(q) || p < 0.0 || q < 0.0) {
        throw numerical_error("sl_min_eig: coefficient not finite/non-negative at x = " + std::to_string(x));
      }
      if (q > 0.0) any_mass = true;
      p_int += wgt * p;
      m00 += wgt * q * (1.0 - s) * (1.0 - s);
      m01 += wgt * q * (1.0 - s) * s;
      m11 += wgt * q * s * s;
    }
    const double kc = p_int / (len * len);
    k_full.diag[c] += kc;
    k_full.diag[c + 1] += kc;
    k_full.off[c] -= kc;
    m_full.diag[c] += m00;
    m_full.diag[c + 1] += m11;
    m_full.off[c] += m01;
  }
  if (!any_mass) throw numerical_error("sl_min_eig: singular mass matrix (q vanishes on the grid)");

  const std::size_t first = 1;
  const std::size_t last = prob.right_dirichlet ? cells - 1 : cells;  // inclusive
  Pencil pen;
  pen.stiffness.diag.assign(k_full.diag.begin() + first, k_full.diag.begin() + last + 1);
  pen.mass.diag.assign(m_full.diag.begin() + first, m_full.diag.begin() + last + 1);
  pen.stiffness.off.assign(k_full.off.begin() + first, k_full.off.begin() + last);
  pen.mass.off.assign(m_full.off.begin() + first, m_full.off.begin() + last);
  const std::size_t n = pen.size();

  // The hat-function interpolant of (x - a) (times (b - x) with two
  // Dirichlet ends) is admissible, so its quotient bounds lambda_min above.
  std::vector<double> trial(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = nodes[first + i];
    trial[i] = (x - prob.a) * (prob.right_dirichlet ? (prob.b - x) : 1.0);
  }
  double lo = 0.0;
  double hi = rayleigh(pen, trial) * (1.0 + 1e-12);
  if (sturm_count(pen, lo) != 0) throw numerical_error("sl_min_eig: stiffness is not positive definite");
  if (sturm_count(pen, hi) < 1) throw numerical_error("sl_min_eig: failed to bracket the minimal eigenvalue");
  for (int iter = 0; iter < 400 && hi - lo > rel_tol * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(pen, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  std::vector<double> x(n, 1.0);
  for (int iter = 0; iter < 6; ++iter) {
    x = shifted_solve(pen, lo, multiply(pen.mass, x));
    const double norm = std::sqrt(dot(x, multiply(pen.mass, x)));
    for (auto& v : x) v /= norm;
  }
  const auto peak = std::max_element(x.begin(), x.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*peak < 0.0) {
    for (auto& v : x) v = -v;
  }

  EigResult out;
  out.lambda_min = 0.5 * (lo + hi);
  out.grid_n = cells;
  out.rayleigh_quotient = rayleigh(pen, x);
  out.grid = nodes;
  out.eigvec.assign(nodes.size(), 0.0);
  std::copy(x.begin(), x.end(), out.eigvec.begin() + first);
  return out;
}

}  // namespace hh::numerics
