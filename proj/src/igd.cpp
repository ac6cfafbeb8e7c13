#include "inexact/igd.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace inexact {

void IgdConfig::validate() const {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
  if (!(mu > 1.0)) throw std::invalid_argument("mu must exceed 1");
  if (!(eps1 > 0.0)) throw std::invalid_argument("eps1 must be positive");
  if (!(lipschitz_L > 0.0)) throw std::invalid_argument("lipschitz_L must be positive");
  if (i_max < 1) throw std::invalid_argument("i_max must be at least 1");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be at least 1");
  if (eps_tol < 0.0 || grad_tol < 0.0 || time_budget < 0.0) {
    throw std::invalid_argument("tolerances and budgets must be nonnegative");
  }
}

std::vector<std::string> IgdConfig::warnings() const {
  std::vector<std::string> out;
  if (mu <= 2.0) out.emplace_back("mu<=2: descent and convergence guarantees require mu>2");
  return out;
}

std::string describe(const IgdStatus& status) {
  struct Visitor {
    std::string operator()(const Converged& c) const {
      switch (c.reason) {
        case Converged::Reason::EpsTol: return "converged(eps_tol)";
        case Converged::Reason::GradTol: return "converged(grad_tol)";
        case Converged::Reason::Criterion: return "converged(criterion)";
      }
      return "converged";
    }
    std::string operator()(const StationaryCertificate& s) const {
      return "stationary_certificate(" + format_double(s.bound) + ")";
    }
    std::string operator()(const BudgetExhausted& b) const {
      return b.kind == BudgetExhausted::Kind::Outer ? "budget_exhausted(outer)"
                                                    : "budget_exhausted(time)";
    }
    std::string operator()(const OracleFailed& f) const { return "oracle_failure(" + f.message + ")"; }
  };
  return std::visit(Visitor{}, status);
}

std::variant<InnerSearchResult, StationaryCertificate> igd_inner_search(
    GradientOracle& oracle, const Vector& x, double eps_k, const IgdConfig& cfg) {
  if (!(eps_k > 0.0)) throw std::invalid_argument("igd_inner_search: eps_k must be positive");
  for (int i = 0; i <= cfg.i_max; ++i) {
    const double level = std::pow(cfg.theta, i) * eps_k;
    if (!(level > 0.0)) {
      // Underflow: the rejection at level i-1 already certifies the point.
      return StationaryCertificate{(cfg.mu + 1.0) * std::pow(cfg.theta, i - 1) * eps_k};
    }
    Vector g = oracle.query(x, level);
    if (norm(g) > cfg.mu * level) return InnerSearchResult{std::move(g), i};
  }
  return StationaryCertificate{(cfg.mu + 1.0) * std::pow(cfg.theta, cfg.i_max) * eps_k};
}

int ik_upper_bound(double grad_norm, double eps_k, double theta, double mu) {
  if (!(grad_norm > 0.0)) throw std::invalid_argument("ik_upper_bound: grad_norm must be positive");
  if (eps_k < grad_norm / (mu + 1.0)) return 0;
  const double ratio = grad_norm / (eps_k * (mu + 1.0));
  return static_cast<int>(std::ceil(std::log(ratio) / std::log(theta) + 1.0));
}

Vector igd_step(const Vector& x, const Vector& g, double lipschitz_L) {
  require_same_size(x.size(), g.size(), "igd_step");
  Vector next = x;
  for (std::size_t i = 0; i < x.size(); ++i) next[i] -= g[i] / lipschitz_L;
  require_finite(next.span(), "igd_step");
  return next;
}

IgdResult igd_solve(const SmoothProblem& problem, GradientOracle& oracle, const Vector& x1,
                    const IgdConfig& cfg, const StopCriterion& stop) {
  cfg.validate();
  require_same_size(x1.size(), problem.dim, "igd_solve");

  IgdResult result{x1, {}, BudgetExhausted{BudgetExhausted::Kind::Outer}};
  IterationTrace& trace = result.trace;
  trace.method = "IGD";
  trace.metadata["eps1"] = format_double(cfg.eps1);
  trace.metadata["theta"] = format_double(cfg.theta);
  trace.metadata["mu"] = format_double(cfg.mu);
  trace.metadata["L"] = format_double(cfg.lipschitz_L);
  trace.metadata["i_max"] = std::to_string(cfg.i_max);
  for (const auto& w : cfg.warnings()) trace.metadata["warning"] = w;

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  Vector& x = result.x;
  double eps = cfg.eps1;
  for (std::size_t k = 1;; ++k) {
    if (k > cfg.max_outer) {
      result.status = BudgetExhausted{BudgetExhausted::Kind::Outer};
      break;
    }
    if (cfg.time_budget > 0.0 && elapsed() > cfg.time_budget) {
      result.status = BudgetExhausted{BudgetExhausted::Kind::Time};
      break;
    }

    const std::size_t cost_before = oracle.cost();
    std::variant<InnerSearchResult, StationaryCertificate> search;
    try {
      search = igd_inner_search(oracle, x, eps, cfg);
    } catch (const OracleFailure& e) {
      result.status = OracleFailed{e.what()};
      break;
    } catch (const NonFiniteError& e) {
      result.status = OracleFailed{e.what()};
      break;
    }
    if (const auto* cert = std::get_if<StationaryCertificate>(&search)) {
      result.status = *cert;
      break;
    }
    auto& accepted = std::get<InnerSearchResult>(search);

    const double f = problem.value(x);
    if (!std::isfinite(f)) {
      result.status = OracleFailed{"non-finite objective value"};
      break;
    }
    const double g_norm = norm(accepted.g);
    record_iteration(trace, IterationRecord{k, f, g_norm, eps, accepted.i_k,
                                            oracle.cost() - cost_before, elapsed()});
    if (cfg.record_iterates) trace.iterates.push_back(x);

    x = igd_step(x, accepted.g, cfg.lipschitz_L);
    eps = std::pow(cfg.theta, accepted.i_k) * eps;

    if (stop && stop(k, x)) {
      result.status = Converged{Converged::Reason::Criterion};
      break;
    }
    if (g_norm <= cfg.grad_tol) {
      result.status = Converged{Converged::Reason::GradTol};
      break;
    }
    if (eps <= cfg.eps_tol) {
      result.status = Converged{Converged::Reason::EpsTol};
      break;
    }
  }
  trace.metadata["status"] = describe(result.status);
  trace.metadata["final_x_norm"] = format_double(norm(x));
  trace.metadata["final_eps"] = format_double(eps);
  return result;
}

}  // namespace inexact
