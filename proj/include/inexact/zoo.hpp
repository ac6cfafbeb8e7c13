#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inexact/problem.hpp"

namespace inexact {

/// A smooth test problem with the constants the oracles need.
struct ZooFunction {
  std::string name;
  SmoothProblem problem;  // grad always present
  double hessian_M = 0.0; // Lipschitz constant of the Hessian (CFD step)
  double start_radius = 1.0;  // starting points are drawn with ||x1||_inf below this
  double f_star = 0.0;        // known minimum value, NaN when unknown
};

/// Names: sphere, quad, spd_quad, least_squares, logistic, logsumexp_ridge,
/// pseudo_huber, logcosh, cos_perturbed, kl_p4, smooth_l1.
std::vector<std::string> zoo_names();

/// Throws std::invalid_argument for an unknown name.
ZooFunction zoo_function(const std::string& name);

std::vector<ZooFunction> test_zoo();

/// Seeded starting point with entries uniform in [-start_radius, start_radius].
Vector zoo_start(const ZooFunction& fn, std::uint64_t seed);

}  // namespace inexact
