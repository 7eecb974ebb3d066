#pragma once

#include <cstdint>
#include <random>

#include "specshift/spectral.hpp"

namespace specshift {

/// Seeded generator with hand-rolled value mapping, so identical seeds give
/// identical streams independent of the standard library's distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(engine_() % std::uint64_t(hi - lo + 1));
  }
  Complex complex_in_square(double radius) {
    const double re = uniform(-radius, radius);
    return Complex(re, uniform(-radius, radius));
  }

  /// Random Hermitian matrix with entries of size about `scale`.
  HermitianOperator hermitian(int n, double scale);

  /// Random Hermitian perturbation scaled to the given Hilbert-Schmidt norm.
  HermitianOperator perturbation(int n, double hs_norm_target);

 private:
  std::mt19937_64 engine_;
};

}  // namespace specshift
