#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>

#include "inexact/linalg.hpp"
#include "inexact/problem.hpp"
#include "inexact/rng.hpp"

namespace inexact {

/// An oracle could not deliver its accuracy guarantee.
class OracleFailure : public std::runtime_error {
 public:
  OracleFailure(const std::string& what, double achieved_bound = -1.0)
      : std::runtime_error(what), achieved_bound_(achieved_bound) {}
  /// Best certified error bound reached before giving up (negative if none).
  double achieved_bound() const { return achieved_bound_; }

 private:
  double achieved_bound_;
};

/**
 * Answers "give g with ||g - grad f(x)|| <= eps" for any eps > 0 and counts
 * the work spent (function evaluations or inner iterations).
 */
class GradientOracle {
 public:
  virtual ~GradientOracle() = default;
  virtual Vector query(const Vector& x, double eps) = 0;

  std::size_t cost() const { return cost_; }

 protected:
  void charge(std::size_t units) { cost_ += units; }

 private:
  std::size_t cost_ = 0;
};

// ---------------------------------------------------------------------------
// Finite differences

/// Step used by ffd_gradient: half the admissible maximum 2 eps / (L sqrt n).
double ffd_step(double eps, double lipschitz_L, std::size_t n);
/// Step used by cfd_gradient: delta^2 = 12 eps / (M sqrt n), capped at 1.
double cfd_step(double eps, double hessian_lipschitz_M, std::size_t n);

/// Forward differences with error <= eps/2; n + 1 evaluations.
Vector ffd_gradient(const ValueFn& f, const Vector& x, double eps, double lipschitz_L);
/// Centered differences with error <= eps/2 when the Hessian is M-Lipschitz; 2n evaluations.
Vector cfd_gradient(const ValueFn& f, const Vector& x, double eps, double hessian_lipschitz_M);

class FfdOracle final : public GradientOracle {
 public:
  explicit FfdOracle(SmoothProblem problem) : problem_(std::move(problem)) {}
  Vector query(const Vector& x, double eps) override;

 private:
  SmoothProblem problem_;
};

class CfdOracle final : public GradientOracle {
 public:
  CfdOracle(SmoothProblem problem, double hessian_lipschitz_M)
      : problem_(std::move(problem)), m_(hessian_lipschitz_M) {}
  Vector query(const Vector& x, double eps) override;

 private:
  SmoothProblem problem_;
  double m_;
};

// ---------------------------------------------------------------------------
// Test doubles

/// Returns the exact gradient; each query costs one gradient evaluation.
class ExactOracle final : public GradientOracle {
 public:
  explicit ExactOracle(SmoothProblem problem);
  Vector query(const Vector& x, double eps) override;

 private:
  SmoothProblem problem_;
};

/// grad f(x) + u, u uniform direction with radius uniform in [0, eps].
Vector noisy_oracle(const SmoothProblem& problem, const Vector& x, double eps, Rng& rng);

class NoisyOracle final : public GradientOracle {
 public:
  NoisyOracle(SmoothProblem problem, Rng rng);
  Vector query(const Vector& x, double eps) override;

 private:
  SmoothProblem problem_;
  Rng rng_;
};

/**
 * Adversarial double: returns grad f(x) + u with ||u|| = eps exactly, u
 * pointing against the gradient. Makes the inner search reject as long as
 * the guarantee allows.
 */
class AdversarialOracle final : public GradientOracle {
 public:
  explicit AdversarialOracle(SmoothProblem problem);
  Vector query(const Vector& x, double eps) override;

 private:
  SmoothProblem problem_;
};

// ---------------------------------------------------------------------------
// Moreau envelopes

/**
 * g = smooth + simple: the smooth part has a Lipschitz gradient, the simple
 * part has a cheap proximal map. Either part may be absent.
 */
struct CompositeFunction {
  std::size_t dim = 0;
  ValueFn smooth_value;
  GradFn smooth_grad;
  double smooth_L = 0.0;
  /// Simple part value; nullopt marks +infinity (outside the domain).
  std::function<std::optional<double>(const Vector&)> simple_value;
  /// prox_{t * simple}(v).
  std::function<Vector(const Vector&, double)> simple_prox;

  /// g(y), nullopt for +infinity.
  std::optional<double> value(const Vector& y) const;
};

/// phi(y) = g(y) + ||y - anchor||^2 / (2 lambda); strongly convex with modulus 1/lambda.
struct ProxSubproblem {
  const CompositeFunction* g = nullptr;
  double lambda = 1.0;
  Vector anchor;

  std::optional<double> phi(const Vector& y) const;
};

struct ProxSolve {
  Vector point;
  /// Norm of a certified subgradient of phi at point; ||point - Prox|| <= lambda * certificate.
  double certificate = 0.0;
  std::size_t iterations = 0;
};

/**
 * Proximal-gradient descent on phi with step 1 / (smooth_L + 1/lambda).
 * After every step the subgradient v = (y - y+)/t + grad s(y+) - grad s(y)
 * of phi at y+ is formed; iteration stops when accept(y+, ||v||) holds.
 * At least one step is always taken. Throws OracleFailure when max_iters
 * steps do not satisfy accept.
 */
ProxSolve solve_prox_subproblem(const ProxSubproblem& sub, const Vector& warm_start,
                                const std::function<bool(const Vector&, double)>& accept,
                                std::size_t max_iters);

/// Convenience: stop once the certificate is <= tol.
ProxSolve solve_prox_subproblem(const ProxSubproblem& sub, const Vector& warm_start, double tol,
                                std::size_t max_iters);

struct MoreauGradient {
  Vector g;
  Vector prox_point;
  std::size_t inner_iters = 0;
};

/// G = (x - ybar)/lambda with ||G - grad e_lambda g(x)|| <= eps.
MoreauGradient moreau_gradient_oracle(const ProxSubproblem& sub, double eps,
                                      const Vector& warm_start,
                                      std::size_t max_inner = 1'000'000);

/// GradientOracle for f = e_lambda g; warm-starts each inner solve from the previous ybar.
class MoreauOracle final : public GradientOracle {
 public:
  MoreauOracle(CompositeFunction g, double lambda, std::size_t max_inner = 1'000'000);
  Vector query(const Vector& x, double eps) override;
  double lambda() const { return lambda_; }

 private:
  CompositeFunction g_;
  double lambda_;
  std::size_t max_inner_;
  std::optional<Vector> last_point_;
};

}  // namespace inexact
