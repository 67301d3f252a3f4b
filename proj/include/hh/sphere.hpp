#pragma once

#include <map>
#include <vector>

namespace hh::numerics {

// Polynomial in the 2n coordinates (x_1, y_1, ..., x_n, y_n) of R^{2n}:
// map from exponent vector to coefficient.
struct Polynomial {
  int n = 1;
  std::map<std::vector<int>, double> terms;

  explicit Polynomial(int n_ = 1) : n(n_) {}
  void add(const std::vector<int>& exponents, double coeff);
  int dim() const { return 2 * n; }
};

// Surface area of the unit sphere S^{2n-1}: 2 pi^n / (n-1)!.
double sphere_area(int n);

// Exact integral over S^{2n-1} from the monomial moments
// 2 prod Gamma((a_i + 1) / 2) / Gamma((|a| + 2n) / 2), zero when any a_i is odd.
double sphere_integral(const Polynomial& f);

// Derivative of f along the rotation field J varpi, i.e.
// sum_i y_i d/dx_i f - x_i d/dy_i f.
Polynomial rotation_derivative(const Polynomial& f);

}  // namespace hh::numerics
