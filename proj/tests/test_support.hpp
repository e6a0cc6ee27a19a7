#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "kirchhoff/spectral.hpp"

namespace kirchhoff::testing {

// Small deterministic generator for property tests.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed * 6364136223846793005ull + 1442695040888963407ull) {}
  double uniform(double lo, double hi) {
    state_ = state_ * 6364136223846793005ull + 1442695040888963407ull;
    return lo + (hi - lo) * static_cast<double>(state_ >> 11) * 0x1.0p-53;
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0.0, 1.0) * n) % n; }

 private:
  std::uint64_t state_;
};

inline Spectrum random_spectrum(Lcg& rng, std::size_t n, double lo = 0.0, double hi = 5.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  std::sort(v.begin(), v.end());
  return Spectrum(std::move(v));
}

inline ModalVector random_vector(Lcg& rng, std::size_t n, double scale = 1.0) {
  ModalVector x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = rng.uniform(-scale, scale);
  return x;
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace kirchhoff::testing
