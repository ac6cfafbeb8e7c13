#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>

#include "inexact/igd.hpp"
#include "inexact/linalg.hpp"
#include "inexact/prox_pp.hpp"
#include "inexact/trace.hpp"

namespace inexact {

/// minimize h(x) subject to A x = b.
struct EqualityConstrainedProblem {
  /// h(x); nullopt marks +infinity. May be empty when only a SubproblemSolver knows h.
  std::function<std::optional<double>(const Vector&)> objective;
  std::shared_ptr<const LinearOperator> A;
  Vector b;

  std::size_t primal_dim() const { return A->cols(); }
  std::size_t dual_dim() const { return A->rows(); }
  /// A x - b
  Vector residual(const Vector& x) const;
};

/// l(x,y) = h(x) + <y, Ax - b>; throws std::domain_error when h(x) = +inf.
double lagrangian_value(const EqualityConstrainedProblem& prob, const Vector& x, const Vector& y);

/// L_lambda(x,y) = h(x) + <y, Ax - b> + (lambda/2) ||Ax - b||^2.
double aug_lagrangian_value(const EqualityConstrainedProblem& prob, double lambda, const Vector& x,
                            const Vector& y);

/// (1/2 lambda) ||y + lambda(Ax - b) - prox_of_dual||^2, a lower bound on the subproblem gap.
double dual_prox_gap_lower_bound(const EqualityConstrainedProblem& prob, double lambda,
                                 const Vector& x, const Vector& y, const Vector& prox_of_dual);

struct SubproblemResult {
  Vector x;
  /// Certified upper bound on L_lambda(x,y) - inf_z L_lambda(z,y).
  double gap_bound = 0.0;
  std::size_t inner_iters = 0;
  /// A x - b when the solver already has it.
  std::optional<Vector> residual;
  /// L_lambda(x, y) when the solver already has it.
  std::optional<double> aug_lag_value;
};

/**
 * Approximately minimizes x -> L_lambda(x, y) for the multiplier y. Solvers
 * may keep state between calls (warm starts); gap_target is an upper bound
 * the returned certificate must respect. Throws OracleFailure on budget
 * exhaustion.
 */
class SubproblemSolver {
 public:
  virtual ~SubproblemSolver() = default;
  virtual SubproblemResult solve(const Vector& y, double gap_target) = 0;
  virtual double lambda() const = 0;
};

/**
 * Subproblem solver for h = smooth (gradient Lipschitz constant L_h) plus an
 * optional simple part with a prox: proximal-gradient descent on
 * L_lambda(., y). When h is strongly convex with modulus sigma > 0 the gap is
 * certified by ||v||^2 / (2 sigma) for the computed subgradient v.
 */
class CompositeAugLagSolver final : public SubproblemSolver {
 public:
  CompositeAugLagSolver(EqualityConstrainedProblem prob, CompositeFunction h, double strong_convexity,
                        double lambda, std::size_t max_inner = 1'000'000);
  SubproblemResult solve(const Vector& y, double gap_target) override;
  double lambda() const override { return lambda_; }

 private:
  EqualityConstrainedProblem prob_;
  CompositeFunction h_;
  double sigma_;
  double lambda_;
  double step_;
  std::size_t max_inner_;
  std::optional<Vector> warm_;
};

/**
 * ProxOracle for g = -d induced by a subproblem solve: the subproblem is
 * solved to gap lambda eps^2 / 2 and p = y + lambda (A x - b) is returned, so
 * ||p - Prox_{lambda g}(y)|| <= lambda eps.
 */
class AugLagProxOracle final : public ProxOracle {
 public:
  AugLagProxOracle(const EqualityConstrainedProblem& prob, SubproblemSolver& sub);
  Vector query(const Vector& y, double eps) override;

  /// State of the last query.
  const std::optional<Vector>& last_y() const { return last_y_; }
  const SubproblemResult& last_solve() const { return last_; }
  /// -L_lambda(x, y) at the last solve if it was made at y, otherwise nullopt.
  std::optional<double> negated_aug_lag(const Vector& y) const;

 private:
  const EqualityConstrainedProblem& prob_;
  SubproblemSolver& sub_;
  std::optional<Vector> last_y_;
  SubproblemResult last_;
};

struct AlmResult {
  Vector x;  // last subproblem solution
  Vector y;  // final multiplier
  IterationTrace trace;
  IgdStatus status;
};

/**
 * GIALM: GIPPM on g = -d through AugLagProxOracle. Each recorded iteration
 * holds f = -L_lambda(x^{k+1}, y^k), ||A x^{k+1} - b||, eps_k, i_k and the
 * inner work. A stationarity certificate means y^k is approximately
 * dual-optimal: ||y^k - Prox_{lambda g}(y^k)|| / lambda <= (1+mu) theta^{i_max} eps_k.
 * stop receives (k, y^{k+1}).
 */
AlmResult gialm_solve(const EqualityConstrainedProblem& prob, SubproblemSolver& sub,
                      const Vector& y1, const GippmConfig& cfg, const StopCriterion& stop = {});

struct IalmConfig {
  double q = 2.0;  // omega_k = k^{-q}
  double lambda = 1.0;
  std::size_t max_outer = 100'000;
  double time_budget = 0.0;
  double residual_tol = 0.0;

  void validate() const;
};

/// omega_k = k^{-q}
double ialm_omega(double q, std::size_t k);

/**
 * Classical inexact ALM: subproblem gap delta_k^2 with delta_k = omega_k / sqrt 2,
 * then y^{k+1} = y^k + lambda (A x^{k+1} - b). Records eps_k = omega_k, i_k = 0.
 */
AlmResult ialm_baseline_solve(const EqualityConstrainedProblem& prob, SubproblemSolver& sub,
                              const Vector& y1, const IalmConfig& cfg,
                              const StopCriterion& stop = {});

}  // namespace inexact
