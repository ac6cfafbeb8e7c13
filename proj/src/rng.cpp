#include "inexact/rng.hpp"

#include <cmath>
#include <numbers>

namespace inexact {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

Vector Rng::normal_vector(std::size_t n) {
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Vector Rng::uniform_vector(std::size_t n, double lo, double hi) {
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

Vector Rng::unit_vector(std::size_t n) {
  for (;;) {
    Vector v = normal_vector(n);
    const double len = norm(v);
    if (len > 1e-12) {
      for (double& e : v) e /= len;
      return v;
    }
  }
}

}  // namespace inexact
