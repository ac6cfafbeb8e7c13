#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "inexact/linalg.hpp"
#include "inexact/rng.hpp"

namespace testsupport {

using inexact::Vector;

/// Dense row-major square solve by Gaussian elimination with partial pivoting.
inline Vector solve_linear(std::vector<double> a, Vector b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (a[piv * n + c] == 0.0) throw std::runtime_error("singular system");
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
      b[r] -= f * b[c];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i * n + k] * x[k];
    x[i] = s / a[i * n + i];
  }
  return x;
}

inline std::vector<double> normal_entries(inexact::Rng& rng, std::size_t count) {
  std::vector<double> v(count);
  for (double& e : v) e = rng.normal();
  return v;
}

/// argmin_v tau|v| + (v - u)^2 / 2 by scanning a grid of the given step around u.
inline double grid_argmin(const std::function<double(double)>& phi, double lo, double hi, double step) {
  double best = lo, best_val = phi(lo);
  const long steps = static_cast<long>(std::ceil((hi - lo) / step));
  for (long i = 1; i <= steps; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    const double val = phi(v);
    if (val < best_val) {
      best_val = val;
      best = v;
    }
  }
  return best;
}

}  // namespace testsupport
