#pragma once

// Seeded generators for property tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace ymflow::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  long long integer(long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng_);
  }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

  /// Smooth, Gaussian-decaying radial function: sum of a few shifted bumps.
  std::function<double(double)> smooth_radial(double amplitude) {
    const int terms = static_cast<int>(integer(1, 4));
    std::vector<double> amp(terms);
    std::vector<double> centre(terms);
    std::vector<double> width(terms);
    for (int k = 0; k < terms; ++k) {
      amp[k] = uniform(-amplitude, amplitude);
      centre[k] = uniform(0.0, 3.0);
      width[k] = uniform(0.5, 2.0);
    }
    return [=](double r) {
      double v = 0.0;
      for (int k = 0; k < terms; ++k) {
        const double x = (r - centre[k]) / width[k];
        const double y = (r + centre[k]) / width[k];
        v += amp[k] * (std::exp(-x * x) + std::exp(-y * y));
      }
      return v;
    };
  }

  std::mt19937_64& engine() noexcept { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace ymflow::testing
