#pragma once

#include <cstdint>
#include <random>

#include "inexact/linalg.hpp"

namespace inexact {

/**
 * Seeded 64-bit generator. Uniforms and normals are derived from the raw
 * mt19937_64 stream with fixed formulas (53-bit mantissa fill, Box-Muller)
 * so that sampled values are identical across standard libraries.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; caches the second draw.
  double normal();

  Vector normal_vector(std::size_t n);
  Vector uniform_vector(std::size_t n, double lo, double hi);
  /// Uniform direction on the unit sphere in R^n.
  Vector unit_vector(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace inexact
