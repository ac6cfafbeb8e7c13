#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "inexact/linalg.hpp"
#include "inexact/oracles.hpp"
#include "inexact/problem.hpp"
#include "inexact/trace.hpp"

namespace inexact {

struct IgdConfig {
  double eps1 = 1.0;
  double theta = 0.8;
  double mu = 3.0;
  double lipschitz_L = 1.0;
  int i_max = 60;
  std::size_t max_outer = 100'000;
  double eps_tol = 0.0;
  double grad_tol = 0.0;
  double time_budget = 0.0;  // seconds; 0 disables
  bool record_iterates = false;

  /// Throws std::invalid_argument on theta outside (0,1), mu <= 1 or nonpositive eps1/L/i_max.
  void validate() const;
  /// Non-fatal diagnostics, e.g. mu <= 2 is outside the convergence theory.
  std::vector<std::string> warnings() const;

  static IgdConfig preset_mu(double mu) {
    IgdConfig cfg;
    cfg.mu = mu;
    return cfg;
  }
};

// Termination states.
struct Converged {
  enum class Reason { EpsTol, GradTol, Criterion };
  Reason reason;
};
struct StationaryCertificate {
  double bound;  // ||grad f(x^k)|| <= bound
};
struct BudgetExhausted {
  enum class Kind { Outer, Time };
  Kind kind;
};
struct OracleFailed {
  std::string message;
};
using IgdStatus = std::variant<Converged, StationaryCertificate, BudgetExhausted, OracleFailed>;

std::string describe(const IgdStatus& status);

struct InnerSearchResult {
  Vector g;
  int i_k = 0;
};

/**
 * Queries the oracle at errors theta^i eps_k for i = 0, 1, ... and accepts the
 * first answer with ||g|| > mu theta^i eps_k (strict). If i reaches i_max the
 * point is certified approximately stationary: every rejection at level i
 * implies ||grad f(x)|| <= (mu + 1) theta^i eps_k.
 */
std::variant<InnerSearchResult, StationaryCertificate> igd_inner_search(
    GradientOracle& oracle, const Vector& x, double eps_k, const IgdConfig& cfg);

/// Upper bound on i_k: 0 when eps_k < ||grad||/(mu+1), else ceil(log_theta(||grad||/(eps_k (mu+1))) + 1).
int ik_upper_bound(double grad_norm, double eps_k, double theta, double mu);

/// x - g / L
Vector igd_step(const Vector& x, const Vector& g, double lipschitz_L);

/// Optional per-iteration callback; returning true stops the run with Converged{Criterion}.
using StopCriterion = std::function<bool(std::size_t k, const Vector& x_next)>;

struct IgdResult {
  Vector x;
  IterationTrace trace;
  IgdStatus status;
};

/**
 * Inexact gradient descent with adaptive error control. Each iteration
 * records f(x^k), ||g^k||, eps_k, i_k and the oracle work of that iteration,
 * then sets x^{k+1} = x^k - g^k / L and eps_{k+1} = theta^{i_k} eps_k.
 */
IgdResult igd_solve(const SmoothProblem& problem, GradientOracle& oracle, const Vector& x1,
                    const IgdConfig& cfg, const StopCriterion& stop = {});

}  // namespace inexact
