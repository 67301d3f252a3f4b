#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hh {

// Deterministic sampling on top of mt19937_64. The standard distributions
// are implementation-defined, so the mapping to doubles is done here to keep
// sampled checks identical across standard libraries.
class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    double u = uniform();
    while (u == 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

}  // namespace hh
