#pragma once

#include <cstddef>
#include <functional>

#include "inexact/linalg.hpp"

namespace inexact {

using ValueFn = std::function<double(const Vector&)>;
using GradFn = std::function<Vector(const Vector&)>;

/**
 * A C^{1,1} objective. The exact gradient may be left empty when it must be
 * withheld from solvers; oracles and audits that need it check has_gradient().
 */
struct SmoothProblem {
  std::size_t dim = 0;
  ValueFn value;
  GradFn grad;
  double lipschitz_L = 1.0;

  bool has_gradient() const { return static_cast<bool>(grad); }
};

}  // namespace inexact
