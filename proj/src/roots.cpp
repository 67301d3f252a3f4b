#include "hh/errors.hpp"
#include "hh/numerics.hpp"

#include <cmath>
#include <limits>

namespace hh::numerics {

double find_root_monotone(const RealFn& f, double lo, double hi, const RootOptions& opts,
                          const RealFn& df) {
  if (!(lo <= hi)) throw domain_error("find_root_monotone: need lo <= hi");
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (std::isnan(f_lo) || std::isnan(f_hi)) throw numerical_error("find_root_monotone: NaN at bracket end");
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) throw domain_error("find_root_monotone: no sign change on bracket");

  const bool increasing = f_lo < 0.0;
  auto shrink = [&](double x, double fx) {
    if ((fx < 0.0) == increasing) {
      lo = x;
    } else {
      hi = x;
    }
  };

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const double fx = f(x);
    if (std::isnan(fx)) throw numerical_error("find_root_monotone: NaN inside bracket");
    if (std::abs(fx) <= opts.f_tol) return x;
    shrink(x, fx);
    if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi))) return x;

    double next = 0.5 * (lo + hi);
    if (df && hi - lo <= opts.bracket_width) {
      const double slope = df(x);
      if (slope != 0.0 && std::isfinite(slope)) {
        const double newton = x - fx / slope;
        if (newton > lo && newton < hi) next = newton;
      }
    }
    if (std::abs(next - x) <= eps * std::abs(x)) return x;
    x = next;
  }
  throw numerical_error("find_root_monotone: iteration limit reached");
}

}  // namespace hh::numerics
