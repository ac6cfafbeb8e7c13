#include "inexact/prox_pp.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace inexact {

ProxOracle::ProxOracle(double lambda) : lambda_(lambda) {
  if (!(lambda_ > 0.0)) throw std::invalid_argument("ProxOracle: lambda must be positive");
}

Vector inexact_prox(ProxOracle& oracle, const Vector& x, double eps_level) {
  if (!(eps_level > 0.0)) throw std::invalid_argument("inexact_prox: eps_level must be positive");
  return oracle.query(x, eps_level);
}

InnerProxOracle::InnerProxOracle(const ConvexProblem& problem, double lambda, std::size_t max_inner)
    : ProxOracle(lambda), problem_(problem), max_inner_(max_inner) {}

Vector InnerProxOracle::query(const Vector& x, double eps) {
  Vector p;
  if (problem_.prox_exact) {
    charge(1);
    p = problem_.prox_exact(lambda(), x);
  } else {
    ProxSubproblem sub{&problem_.composite, lambda(), x};
    const Vector& warm = (last_p_ && last_p_->size() == x.size()) ? *last_p_ : x;
    try {
      ProxSolve solve = solve_prox_subproblem(sub, warm, eps, max_inner_);
      charge(solve.iterations);
      p = std::move(solve.point);
    } catch (const OracleFailure&) {
      charge(max_inner_);
      throw;
    }
  }
  last_x_ = x;
  last_p_ = p;
  return p;
}

std::optional<double> InnerProxOracle::cached_envelope_value(const Vector& x) const {
  if (!last_x_ || !(*last_x_ == x)) return std::nullopt;
  ProxSubproblem sub{&problem_.composite, lambda(), x};
  return sub.phi(*last_p_);
}

NoisyProxOracle::NoisyProxOracle(const ConvexProblem& problem, double lambda, Rng rng)
    : ProxOracle(lambda), problem_(problem), rng_(std::move(rng)) {
  if (!problem_.prox_exact) throw std::invalid_argument("NoisyProxOracle needs prox_exact");
}

Vector NoisyProxOracle::query(const Vector& x, double eps) {
  charge(1);
  Vector p = problem_.prox_exact(lambda(), x);
  const Vector direction = rng_.unit_vector(x.size());
  const double radius = lambda() * eps * rng_.uniform() *
                        (1.0 - 4.0 * std::numeric_limits<double>::epsilon());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += radius * direction[i];
  return p;
}

Vector EnvelopeGradientOracle::query(const Vector& x, double eps) {
  const std::size_t before = prox_.cost();
  Vector p = prox_.query(x, eps);
  charge(prox_.cost() - before);
  return (x - p) / prox_.lambda();
}

IgdConfig GippmConfig::as_igd() const {
  IgdConfig cfg = igd;
  cfg.lipschitz_L = 1.0 / lambda;
  return cfg;
}

void GippmConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  as_igd().validate();
}

double envelope_value_exact(const ConvexProblem& problem, double lambda, const Vector& x) {
  if (!problem.prox_exact) throw std::invalid_argument("envelope_value_exact needs prox_exact");
  const Vector p = problem.prox_exact(lambda, x);
  ProxSubproblem sub{&problem.composite, lambda, x};
  const auto v = sub.phi(p);
  if (!v) throw std::runtime_error("closed-form prox left the domain of g");
  return *v;
}

ProxRunResult gippm_solve(ProxOracle& oracle, const ValueFn& envelope_value, const Vector& x1,
                          const GippmConfig& cfg, const StopCriterion& stop) {
  cfg.validate();
  if (std::abs(oracle.lambda() - cfg.lambda) > 0.0) {
    throw std::invalid_argument("gippm_solve: oracle lambda differs from config lambda");
  }
  EnvelopeGradientOracle grad_oracle(oracle);
  SmoothProblem envelope{x1.size(), envelope_value, {}, 1.0 / cfg.lambda};
  IgdResult run = igd_solve(envelope, grad_oracle, x1, cfg.as_igd(), stop);
  run.trace.method = "GIPPM";
  run.trace.metadata["lambda"] = format_double(cfg.lambda);
  return ProxRunResult{std::move(run.x), std::move(run.trace), std::move(run.status)};
}

ProxRunResult gippm_solve(const ConvexProblem& problem, const Vector& x1, const GippmConfig& cfg,
                          const StopCriterion& stop) {
  InnerProxOracle oracle(problem, cfg.lambda);
  const bool exact = static_cast<bool>(problem.prox_exact);
  ValueFn value = [&](const Vector& x) -> double {
    if (exact) return envelope_value_exact(problem, cfg.lambda, x);
    if (auto cached = oracle.cached_envelope_value(x)) return *cached;
    ProxSubproblem sub{&problem.composite, cfg.lambda, x};
    const ProxSolve tight = solve_prox_subproblem(sub, x, 1e-10, 1'000'000);
    return sub.phi(tight.point).value_or(std::numeric_limits<double>::infinity());
  };
  ProxRunResult res = gippm_solve(oracle, value, x1, cfg, stop);
  res.trace.metadata["f_val"] = exact ? "envelope_exact" : "envelope_upper_bound";
  return res;
}

void IppmConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (!(p_exp > 1.0)) throw std::invalid_argument("p_exp must exceed 1 for summable errors");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be at least 1");
}

double ippm_delta(double c, double p_exp, std::size_t k) {
  return c * std::pow(static_cast<double>(k), -p_exp);
}

ProxRunResult ippm_baseline_solve(const ConvexProblem& problem, const Vector& x1,
                                  const IppmConfig& cfg) {
  cfg.validate();
  require_same_size(x1.size(), problem.dim, "ippm_baseline_solve");
  ProxRunResult result{x1, {}, BudgetExhausted{BudgetExhausted::Kind::Outer}};
  IterationTrace& trace = result.trace;
  trace.method = cfg.scheme == IppmScheme::A ? "IPPM-A" : "IPPM-B";
  trace.metadata["lambda"] = format_double(cfg.lambda);
  trace.metadata["c"] = format_double(cfg.c);
  trace.metadata["p"] = format_double(cfg.p_exp);

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  Vector& x = result.x;
  for (std::size_t k = 1;; ++k) {
    if (k > cfg.max_outer) {
      result.status = BudgetExhausted{BudgetExhausted::Kind::Outer};
      break;
    }
    if (cfg.time_budget > 0.0 && elapsed() > cfg.time_budget) {
      result.status = BudgetExhausted{BudgetExhausted::Kind::Time};
      break;
    }
    const double delta = ippm_delta(cfg.c, cfg.p_exp, k);
    ProxSubproblem sub{&problem.composite, cfg.lambda, x};

    Vector p;
    std::size_t work = 0;
    if (problem.prox_exact) {
      p = problem.prox_exact(cfg.lambda, x);
      work = 1;
    } else {
      const double lambda = cfg.lambda;
      const Vector anchor = x;
      std::function<bool(const Vector&, double)> accept;
      if (cfg.scheme == IppmScheme::A) {
        accept = [=](const Vector&, double cert) { return lambda * cert <= delta; };
      } else {
        accept = [&anchor, lambda, delta](const Vector& y, double cert) {
          if (cert == 0.0) return true;
          return lambda * cert <= delta * norm((anchor - y).span());
        };
      }
      try {
        ProxSolve solve = solve_prox_subproblem(sub, x, accept, cfg.max_inner);
        p = std::move(solve.point);
        work = solve.iterations;
      } catch (const OracleFailure& e) {
        result.status = OracleFailed{e.what()};
        break;
      }
    }

    const double step_norm = norm((x - p).span()) / cfg.lambda;
    const double f = sub.phi(p).value_or(std::numeric_limits<double>::infinity());
    record_iteration(trace, IterationRecord{k, f, step_norm, delta, 0, work, elapsed()});
    if (cfg.record_iterates) trace.iterates.push_back(x);
    x = std::move(p);
    if (step_norm <= cfg.grad_tol) {
      result.status = Converged{Converged::Reason::GradTol};
      break;
    }
  }
  trace.metadata["status"] = describe(result.status);
  return result;
}

}  // namespace inexact
