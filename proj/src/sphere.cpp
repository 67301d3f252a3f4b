#include "hh/sphere.hpp"

#include "hh/errors.hpp"

#include <cmath>
#include <numbers>

namespace hh::numerics {

void Polynomial::add(const std::vector<int>& exponents, double coeff) {
  if (static_cast<int>(exponents.size()) != dim()) {
    throw domain_error("Polynomial: exponent vector must have 2n entries");
  }
  for (int e : exponents) {
    if (e < 0) throw domain_error("Polynomial: negative exponent");
  }
  terms[exponents] += coeff;
}

double sphere_area(int n) {
  if (n < 1) throw domain_error("sphere_area: n must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, n) / std::tgamma(static_cast<double>(n));
}

double sphere_integral(const Polynomial& f) {
  if (f.n < 1) throw domain_error("sphere_integral: n must be >= 1");
  double total = 0.0;
  for (const auto& [exps, coeff] : f.terms) {
    if (coeff == 0.0) continue;
    bool odd = false;
    int degree = 0;
    double log_num = 0.0;
    for (int e : exps) {
      if (e % 2 != 0) odd = true;
      degree += e;
      log_num += std::lgamma(0.5 * (e + 1));
    }
    if (odd) continue;
    const double log_den = std::lgamma(0.5 * (degree + f.dim()));
    total += coeff * 2.0 * std::exp(log_num - log_den);
  }
  return total;
}

Polynomial rotation_derivative(const Polynomial& f) {
  Polynomial out(f.n);
  for (const auto& [exps, coeff] : f.terms) {
    for (int i = 0; i < f.n; ++i) {
      const int ix = 2 * i;
      const int iy = 2 * i + 1;
      // y_i * d/dx_i
      if (exps[ix] > 0) {
        auto e = exps;
        e[ix] -= 1;
        e[iy] += 1;
        out.add(e, coeff * exps[ix]);
      }
      // -x_i * d/dy_i
      if (exps[iy] > 0) {
        auto e = exps;
        e[iy] -= 1;
        e[ix] += 1;
        out.add(e, -coeff * exps[iy]);
      }
    }
  }
  return out;
}

}  // namespace hh::numerics
