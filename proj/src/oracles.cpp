#include "inexact/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace inexact {

namespace {

double evaluate_finite(const ValueFn& f, const Vector& x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw OracleFailure("non-finite function value during differencing");
  return v;
}

void check_eps(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("oracle: eps must be positive");
}

}  // namespace

double ffd_step(double eps, double lipschitz_L, std::size_t n) {
  return eps / (lipschitz_L * std::sqrt(static_cast<double>(n)));
}

double cfd_step(double eps, double hessian_lipschitz_M, std::size_t n) {
  // M = 0 means the Hessian is constant; any step is exact in exact arithmetic.
  if (hessian_lipschitz_M <= 0.0) return 1.0;
  const double delta = std::sqrt(12.0 * eps / (hessian_lipschitz_M * std::sqrt(static_cast<double>(n))));
  return std::min(delta, 1.0);
}

Vector ffd_gradient(const ValueFn& f, const Vector& x, double eps, double lipschitz_L) {
  check_eps(eps);
  if (!(lipschitz_L > 0.0)) throw std::invalid_argument("ffd_gradient: L must be positive");
  const std::size_t n = x.size();
  const double delta = ffd_step(eps, lipschitz_L, n);
  const double fx = evaluate_finite(f, x);
  Vector g(n);
  Vector probe = x;
  for (std::size_t i = 0; i < n; ++i) {
    probe[i] = x[i] + delta;
    const double h = probe[i] - x[i];  // step actually representable in floating point
    g[i] = (evaluate_finite(f, probe) - fx) / h;
    probe[i] = x[i];
  }
  require_finite(g.span(), "ffd_gradient");
  return g;
}

Vector cfd_gradient(const ValueFn& f, const Vector& x, double eps, double hessian_lipschitz_M) {
  check_eps(eps);
  if (hessian_lipschitz_M < 0.0) throw std::invalid_argument("cfd_gradient: M must be >= 0");
  const std::size_t n = x.size();
  const double half = cfd_step(eps, hessian_lipschitz_M, n) / 2.0;
  Vector g(n);
  Vector probe = x;
  for (std::size_t i = 0; i < n; ++i) {
    probe[i] = x[i] + half;
    const double up_x = probe[i];
    const double up = evaluate_finite(f, probe);
    probe[i] = x[i] - half;
    const double down_x = probe[i];
    const double down = evaluate_finite(f, probe);
    g[i] = (up - down) / (up_x - down_x);
    probe[i] = x[i];
  }
  require_finite(g.span(), "cfd_gradient");
  return g;
}

Vector FfdOracle::query(const Vector& x, double eps) {
  charge(x.size() + 1);
  return ffd_gradient(problem_.value, x, eps, problem_.lipschitz_L);
}

Vector CfdOracle::query(const Vector& x, double eps) {
  charge(2 * x.size());
  return cfd_gradient(problem_.value, x, eps, m_);
}

ExactOracle::ExactOracle(SmoothProblem problem) : problem_(std::move(problem)) {
  if (!problem_.has_gradient()) throw std::invalid_argument("ExactOracle needs a gradient");
}

Vector ExactOracle::query(const Vector& x, double /*eps*/) {
  charge(1);
  return problem_.grad(x);
}

Vector noisy_oracle(const SmoothProblem& problem, const Vector& x, double eps, Rng& rng) {
  if (!problem.has_gradient()) throw std::invalid_argument("noisy_oracle needs a gradient");
  if (eps < 0.0) throw std::invalid_argument("noisy_oracle: eps must be >= 0");
  Vector g = problem.grad(x);
  const Vector direction = rng.unit_vector(x.size());
  const double radius = eps * rng.uniform();
  // Rescale so that the perturbation norm is exactly at most radius after rounding.
  const double scale = radius / std::max(1.0, norm(direction)) * (1.0 - 4.0 * std::numeric_limits<double>::epsilon());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += scale * direction[i];
  require_finite(g.span(), "noisy_oracle");
  return g;
}

NoisyOracle::NoisyOracle(SmoothProblem problem, Rng rng)
    : problem_(std::move(problem)), rng_(std::move(rng)) {
  if (!problem_.has_gradient()) throw std::invalid_argument("NoisyOracle needs a gradient");
}

Vector NoisyOracle::query(const Vector& x, double eps) {
  charge(1);
  return noisy_oracle(problem_, x, eps, rng_);
}

AdversarialOracle::AdversarialOracle(SmoothProblem problem) : problem_(std::move(problem)) {
  if (!problem_.has_gradient()) throw std::invalid_argument("AdversarialOracle needs a gradient");
}

Vector AdversarialOracle::query(const Vector& x, double eps) {
  charge(1);
  Vector g = problem_.grad(x);
  const double gn = norm(g);
  if (gn == 0.0) return g;
  // Shrink toward zero by eps (or to zero when eps >= ||grad||).
  const double keep = std::max(0.0, 1.0 - eps / gn * (1.0 - 4.0 * std::numeric_limits<double>::epsilon()));
  for (double& v : g) v *= keep;
  return g;
}

// ---------------------------------------------------------------------------

std::optional<double> CompositeFunction::value(const Vector& y) const {
  double total = 0.0;
  if (smooth_value) total += smooth_value(y);
  if (simple_value) {
    const auto s = simple_value(y);
    if (!s) return std::nullopt;
    total += *s;
  }
  return total;
}

std::optional<double> ProxSubproblem::phi(const Vector& y) const {
  const auto gv = g->value(y);
  if (!gv) return std::nullopt;
  const double d = norm_squared((y - anchor).span());
  return *gv + d / (2.0 * lambda);
}

namespace {

// Gradient of smooth part plus the proximal quadratic.
Vector smooth_part_gradient(const ProxSubproblem& sub, const Vector& y) {
  Vector g(y.size());
  if (sub.g->smooth_grad) g = sub.g->smooth_grad(y);
  const double inv = 1.0 / sub.lambda;
  for (std::size_t i = 0; i < y.size(); ++i) g[i] += (y[i] - sub.anchor[i]) * inv;
  return g;
}

}  // namespace

ProxSolve solve_prox_subproblem(const ProxSubproblem& sub, const Vector& warm_start,
                                const std::function<bool(const Vector&, double)>& accept,
                                std::size_t max_iters) {
  if (sub.g == nullptr) throw std::invalid_argument("solve_prox_subproblem: no function");
  if (!(sub.lambda > 0.0)) throw std::invalid_argument("solve_prox_subproblem: lambda must be positive");
  require_same_size(warm_start.size(), sub.anchor.size(), "solve_prox_subproblem");

  const double step = 1.0 / (sub.g->smooth_L + 1.0 / sub.lambda);
  const double inv_step = 1.0 / step;
  const std::size_t n = warm_start.size();

  Vector y = warm_start;
  Vector grad = smooth_part_gradient(sub, y);
  double best = std::numeric_limits<double>::infinity();
  Vector trial(n);
  for (std::size_t it = 1; it <= max_iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) trial[i] = y[i] - step * grad[i];
    Vector next = sub.g->simple_prox ? sub.g->simple_prox(trial, step) : trial;
    Vector next_grad = smooth_part_gradient(sub, next);
    double cert_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = (y[i] - next[i]) * inv_step + next_grad[i] - grad[i];
      cert_sq += v * v;
    }
    const double cert = std::sqrt(cert_sq);
    if (!std::isfinite(cert)) throw OracleFailure("prox subproblem diverged", best);
    best = std::min(best, cert);
    if (accept(next, cert)) return ProxSolve{std::move(next), cert, it};
    y = std::move(next);
    grad = std::move(next_grad);
  }
  throw OracleFailure("prox subproblem: inner budget of " + std::to_string(max_iters) +
                          " iterations exhausted",
                      sub.lambda * best);
}

ProxSolve solve_prox_subproblem(const ProxSubproblem& sub, const Vector& warm_start, double tol,
                                std::size_t max_iters) {
  return solve_prox_subproblem(
      sub, warm_start, [tol](const Vector&, double cert) { return cert <= tol; }, max_iters);
}

MoreauGradient moreau_gradient_oracle(const ProxSubproblem& sub, double eps,
                                      const Vector& warm_start, std::size_t max_inner) {
  check_eps(eps);
  ProxSolve solve = solve_prox_subproblem(sub, warm_start, eps, max_inner);
  Vector g = (sub.anchor - solve.point) / sub.lambda;
  return MoreauGradient{std::move(g), std::move(solve.point), solve.iterations};
}

MoreauOracle::MoreauOracle(CompositeFunction g, double lambda, std::size_t max_inner)
    : g_(std::move(g)), lambda_(lambda), max_inner_(max_inner) {
  if (!(lambda_ > 0.0)) throw std::invalid_argument("MoreauOracle: lambda must be positive");
}

Vector MoreauOracle::query(const Vector& x, double eps) {
  ProxSubproblem sub{&g_, lambda_, x};
  const Vector& warm = last_point_ ? *last_point_ : x;
  try {
    MoreauGradient res = moreau_gradient_oracle(sub, eps, warm, max_inner_);
    charge(res.inner_iters);
    last_point_ = std::move(res.prox_point);
    return std::move(res.g);
  } catch (const OracleFailure&) {
    charge(max_inner_);
    throw;
  }
}

}  // namespace inexact
