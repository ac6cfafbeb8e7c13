#include "inexact/alm.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace inexact {

Vector EqualityConstrainedProblem::residual(const Vector& x) const {
  Vector r = apply(*A, x);
  r -= b;
  return r;
}

double lagrangian_value(const EqualityConstrainedProblem& prob, const Vector& x, const Vector& y) {
  if (!prob.objective) throw std::invalid_argument("lagrangian_value: problem has no objective");
  const auto h = prob.objective(x);
  if (!h) throw std::domain_error("lagrangian_value: h(x) is +infinity");
  return *h + dot(y, prob.residual(x));
}

double aug_lagrangian_value(const EqualityConstrainedProblem& prob, double lambda, const Vector& x,
                            const Vector& y) {
  if (!(lambda > 0.0)) throw std::invalid_argument("aug_lagrangian_value: lambda must be positive");
  if (!prob.objective) throw std::invalid_argument("aug_lagrangian_value: problem has no objective");
  const auto h = prob.objective(x);
  if (!h) throw std::domain_error("aug_lagrangian_value: h(x) is +infinity");
  const Vector r = prob.residual(x);
  return *h + dot(y, r) + 0.5 * lambda * norm_squared(r);
}

double dual_prox_gap_lower_bound(const EqualityConstrainedProblem& prob, double lambda,
                                 const Vector& x, const Vector& y, const Vector& prox_of_dual) {
  Vector d = y + lambda * prob.residual(x);
  d -= prox_of_dual;
  return norm_squared(d) / (2.0 * lambda);
}

// ---------------------------------------------------------------------------

CompositeAugLagSolver::CompositeAugLagSolver(EqualityConstrainedProblem prob, CompositeFunction h,
                                             double strong_convexity, double lambda,
                                             std::size_t max_inner)
    : prob_(std::move(prob)), h_(std::move(h)), sigma_(strong_convexity), lambda_(lambda),
      max_inner_(max_inner) {
  if (!(sigma_ > 0.0)) throw std::invalid_argument("CompositeAugLagSolver needs strongly convex h");
  if (!(lambda_ > 0.0)) throw std::invalid_argument("CompositeAugLagSolver: lambda must be positive");
  const double a = operator_norm(*prob_.A);
  step_ = 1.0 / (h_.smooth_L + lambda_ * a * a);
}

SubproblemResult CompositeAugLagSolver::solve(const Vector& y, double gap_target) {
  if (!(gap_target > 0.0)) throw std::invalid_argument("solve: gap_target must be positive");
  const std::size_t n = prob_.primal_dim();
  // Gradient of h_smooth + <y, Ax - b> + (lambda/2)||Ax - b||^2.
  auto smooth_grad = [&](const Vector& x, Vector& r) {
    r = prob_.residual(x);
    Vector w = y + lambda_ * r;
    Vector g = apply_adjoint(*prob_.A, w);
    if (h_.smooth_grad) g += h_.smooth_grad(x);
    return g;
  };

  Vector x = warm_ ? *warm_ : Vector(n);
  Vector r;
  Vector grad = smooth_grad(x, r);
  Vector trial(n);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= max_inner_; ++it) {
    for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - step_ * grad[i];
    Vector next = h_.simple_prox ? h_.simple_prox(trial, step_) : trial;
    Vector next_r;
    Vector next_grad = smooth_grad(next, next_r);
    double v_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = (x[i] - next[i]) / step_ + next_grad[i] - grad[i];
      v_sq += v * v;
    }
    const double gap = v_sq / (2.0 * sigma_);
    if (!std::isfinite(gap)) throw OracleFailure("augmented Lagrangian subproblem diverged");
    best = std::min(best, gap);
    if (gap <= gap_target) {
      warm_ = next;
      SubproblemResult res{next, gap, it, next_r, std::nullopt};
      if (prob_.objective) res.aug_lag_value = aug_lagrangian_value(prob_, lambda_, next, y);
      return res;
    }
    x = std::move(next);
    grad = std::move(next_grad);
  }
  warm_ = x;
  throw OracleFailure("augmented Lagrangian subproblem: inner budget exhausted", best);
}

// ---------------------------------------------------------------------------

AugLagProxOracle::AugLagProxOracle(const EqualityConstrainedProblem& prob, SubproblemSolver& sub)
    : ProxOracle(sub.lambda()), prob_(prob), sub_(sub) {}

Vector AugLagProxOracle::query(const Vector& y, double eps) {
  const double lambda = this->lambda();
  SubproblemResult res = sub_.solve(y, 0.5 * lambda * eps * eps);
  charge(res.inner_iters);
  if (!res.residual) res.residual = prob_.residual(res.x);
  Vector p = y;
  axpy(lambda, res.residual->span(), p.span());
  require_finite(p.span(), "AugLagProxOracle");
  last_y_ = y;
  last_ = std::move(res);
  return p;
}

std::optional<double> AugLagProxOracle::negated_aug_lag(const Vector& y) const {
  if (!last_y_ || !(*last_y_ == y)) return std::nullopt;
  if (last_.aug_lag_value) return -*last_.aug_lag_value;
  if (prob_.objective) return -aug_lagrangian_value(prob_, lambda(), last_.x, y);
  return std::nullopt;
}

AlmResult gialm_solve(const EqualityConstrainedProblem& prob, SubproblemSolver& sub,
                      const Vector& y1, const GippmConfig& cfg, const StopCriterion& stop) {
  require_same_size(y1.size(), prob.dual_dim(), "gialm_solve");
  if (cfg.lambda != sub.lambda()) {
    throw std::invalid_argument("gialm_solve: config lambda differs from subproblem lambda");
  }
  AugLagProxOracle oracle(prob, sub);
  ValueFn value = [&oracle](const Vector& y) {
    const auto v = oracle.negated_aug_lag(y);
    if (!v) throw std::logic_error("gialm_solve: value requested away from the last query");
    return *v;
  };
  ProxRunResult run = gippm_solve(oracle, value, y1, cfg, stop);
  run.trace.method = "GIALM";
  Vector x = oracle.last_solve().x;
  return AlmResult{std::move(x), std::move(run.x), std::move(run.trace), std::move(run.status)};
}

void IalmConfig::validate() const {
  if (!(q > 1.0)) throw std::invalid_argument("IALM needs q > 1 for summable errors");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be at least 1");
  if (time_budget < 0.0 || residual_tol < 0.0) {
    throw std::invalid_argument("budgets and tolerances must be nonnegative");
  }
}

double ialm_omega(double q, std::size_t k) { return std::pow(static_cast<double>(k), -q); }

AlmResult ialm_baseline_solve(const EqualityConstrainedProblem& prob, SubproblemSolver& sub,
                              const Vector& y1, const IalmConfig& cfg, const StopCriterion& stop) {
  cfg.validate();
  require_same_size(y1.size(), prob.dual_dim(), "ialm_baseline_solve");
  if (cfg.lambda != sub.lambda()) {
    throw std::invalid_argument("ialm_baseline_solve: config lambda differs from subproblem lambda");
  }
  AlmResult result{Vector(prob.primal_dim()), y1, {}, BudgetExhausted{BudgetExhausted::Kind::Outer}};
  IterationTrace& trace = result.trace;
  trace.method = "IALM";
  trace.metadata["q"] = format_double(cfg.q);
  trace.metadata["lambda"] = format_double(cfg.lambda);

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  Vector& y = result.y;
  for (std::size_t k = 1;; ++k) {
    if (k > cfg.max_outer) {
      result.status = BudgetExhausted{BudgetExhausted::Kind::Outer};
      break;
    }
    if (cfg.time_budget > 0.0 && elapsed() > cfg.time_budget) {
      result.status = BudgetExhausted{BudgetExhausted::Kind::Time};
      break;
    }
    const double omega = ialm_omega(cfg.q, k);
    const double delta = omega / std::sqrt(2.0);
    SubproblemResult res;
    try {
      res = sub.solve(y, delta * delta);
    } catch (const OracleFailure& e) {
      result.status = OracleFailed{e.what()};
      break;
    }
    const Vector r = res.residual ? *res.residual : prob.residual(res.x);
    double f = 0.0;
    if (res.aug_lag_value) {
      f = -*res.aug_lag_value;
    } else if (prob.objective) {
      f = -aug_lagrangian_value(prob, cfg.lambda, res.x, y);
    }
    const double r_norm = norm(r);
    record_iteration(trace, IterationRecord{k, f, r_norm, omega, 0, res.inner_iters, elapsed()});
    axpy(cfg.lambda, r.span(), y.span());
    require_finite(y.span(), "ialm_baseline_solve");
    result.x = std::move(res.x);

    if (stop && stop(k, y)) {
      result.status = Converged{Converged::Reason::Criterion};
      break;
    }
    if (r_norm <= cfg.residual_tol) {
      result.status = Converged{Converged::Reason::GradTol};
      break;
    }
  }
  trace.metadata["status"] = describe(result.status);
  trace.metadata["final_y_norm"] = format_double(norm(y));
  return result;
}

}  // namespace inexact
