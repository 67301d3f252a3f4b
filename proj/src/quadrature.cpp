#include "hh/errors.hpp"
#include "hh/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace hh::numerics {

namespace {

// QUADPACK 15-point Kronrod abscissae on [0, 1] (descending) and weights;
// odd-indexed abscissae and the centre are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool splittable;
};

struct ByError {
  bool operator()(const Segment& x, const Segment& y) const {
    // Unsplittable segments sink to the bottom of the heap.
    if (x.splittable != y.splittable) return !x.splittable;
    return x.error < y.error;
  }
};

double checked(double v, double x) {
  if (!std::isfinite(v)) {
    throw numerical_error("integrand is not finite at x = " + std::to_string(x));
  }
  return v;
}

Segment gauss_kronrod(const RealFn& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f(centre), centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = checked(f(centre - dx), centre - dx);
    const double f2 = checked(f(centre + dx), centre + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  // Splitting stops once the midpoint is no longer strictly inside.
  const bool splittable = centre > a && centre < b && (b - a) > 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
  return {a, b, kronrod, std::abs(kronrod - gauss), splittable};
}

}  // namespace

QuadResult integrate(const RealFn& f, double a, double b, const QuadOptions& opts) {
  if (!(a < b)) throw domain_error("integrate: need a < b");
  if (!(opts.abs_tol > 0.0) && !(opts.rel_tol > 0.0)) {
    throw domain_error("integrate: tolerance must be positive");
  }

  std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
  Segment first = gauss_kronrod(f, a, b);
  long evals = 15;
  double total = first.value;
  double total_err = first.error;
  heap.push(first);

  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

  while (total_err > target()) {
    if (evals + 30 > opts.max_evals) break;
    Segment worst = heap.top();
    if (!worst.splittable) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gauss_kronrod(f, worst.a, mid);
    Segment right = gauss_kronrod(f, mid, worst.b);
    evals += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum in a fixed order to drop the drift of the running totals.
  std::vector<Segment> segments;
  segments.reserve(heap.size());
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  total = 0.0;
  total_err = 0.0;
  for (const auto& s : segments) {
    total += s.value;
    total_err += s.error;
  }

  QuadResult result{total, total_err, evals};
  if (total_err > target()) {
    throw numerical_error("integrate: tolerance not reached on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "], error estimate " + std::to_string(total_err) +
                          " after " + std::to_string(evals) + " evaluations");
  }
  return result;
}

QuadResult integrate_from_endpoint(const RealFn& f_of_distance, double length, double exponent,
                                   const QuadOptions& opts, double min_distance) {
  if (!(exponent > -1.0)) {
    throw domain_error("integrate: non-integrable endpoint exponent " + std::to_string(exponent));
  }
  if (!(length > 0.0)) throw domain_error("integrate: need a < b");

  const double power = exponent + 1.0;
  const double inv_power = 1.0 / power;
  // Limit of the transformed integrand as s -> 0, evaluated once on demand.
  std::optional<double> frozen;
  auto g = [&](double s) {
    const double d = std::pow(s, inv_power);
    if (d < min_distance) {
      if (!frozen) {
        frozen = f_of_distance(min_distance) * std::pow(min_distance, -exponent) * inv_power;
      }
      return *frozen;
    }
    return f_of_distance(d) * inv_power * d / s;
  };
  return integrate(g, 0.0, std::pow(length, power), opts);
}

QuadResult integrate(const RealFn& f, double a, double b,
                     const std::optional<EndpointSingularity>& singularity,
                     const QuadOptions& opts) {
  if (!singularity) return integrate(f, a, b, opts);
  if (!(a < b)) throw domain_error("integrate: need a < b");
  const auto& sing = *singularity;
  if (sing.endpoint == Endpoint::right) {
    return integrate_from_endpoint([&](double d) { return f(b - d); }, b - a, sing.exponent, opts,
                                   sing.min_distance);
  }
  return integrate_from_endpoint([&](double d) { return f(a + d); }, b - a, sing.exponent, opts,
                                 sing.min_distance);
}

}  // namespace hh::numerics
