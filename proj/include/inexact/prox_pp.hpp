#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "inexact/igd.hpp"
#include "inexact/oracles.hpp"
#include "inexact/rng.hpp"

namespace inexact {

/// Proper l.s.c. convex g, given by its composite structure and optionally a closed-form prox.
struct ConvexProblem {
  std::size_t dim = 0;
  CompositeFunction composite;
  /// (lambda, x) -> Prox_{lambda g}(x); may be empty.
  std::function<Vector(double, const Vector&)> prox_exact;

  std::optional<double> value(const Vector& x) const { return composite.value(x); }
};

/// Answers p with ||p - Prox_{lambda g}(x)|| <= lambda * eps.
class ProxOracle {
 public:
  explicit ProxOracle(double lambda);
  virtual ~ProxOracle() = default;
  virtual Vector query(const Vector& x, double eps) = 0;

  double lambda() const { return lambda_; }
  std::size_t cost() const { return cost_; }

 protected:
  void charge(std::size_t units) { cost_ += units; }

 private:
  double lambda_;
  std::size_t cost_ = 0;
};

Vector inexact_prox(ProxOracle& oracle, const Vector& x, double eps_level);

/**
 * Uses prox_exact when available, otherwise proximal-gradient descent on
 * phi certified by ||subgradient|| <= eps. Warm-starts from the previous answer.
 */
class InnerProxOracle final : public ProxOracle {
 public:
  InnerProxOracle(const ConvexProblem& problem, double lambda, std::size_t max_inner = 1'000'000);
  Vector query(const Vector& x, double eps) override;

  /// phi(p) at the last answer if it was computed at x.
  std::optional<double> cached_envelope_value(const Vector& x) const;

 private:
  const ConvexProblem& problem_;
  std::size_t max_inner_;
  std::optional<Vector> last_x_;
  std::optional<Vector> last_p_;
};

/// Exact prox plus lambda * u with u uniform in the eps-ball; requires prox_exact.
class NoisyProxOracle final : public ProxOracle {
 public:
  NoisyProxOracle(const ConvexProblem& problem, double lambda, Rng rng);
  Vector query(const Vector& x, double eps) override;

 private:
  const ConvexProblem& problem_;
  Rng rng_;
};

/// Presents a ProxOracle as the gradient oracle (x - p)/lambda of e_lambda g.
class EnvelopeGradientOracle final : public GradientOracle {
 public:
  explicit EnvelopeGradientOracle(ProxOracle& prox) : prox_(prox) {}
  Vector query(const Vector& x, double eps) override;

 private:
  ProxOracle& prox_;
};

struct GippmConfig {
  double lambda = 1.0;
  IgdConfig igd;  // lipschitz_L is overwritten with 1/lambda

  IgdConfig as_igd() const;
  void validate() const;
};

struct ProxRunResult {
  Vector x;
  IterationTrace trace;
  IgdStatus status;
};

/// Moreau envelope value e_lambda g(x) = phi(Prox) using the closed-form prox.
double envelope_value_exact(const ConvexProblem& problem, double lambda, const Vector& x);

/**
 * GIPPM run as IGD on e_lambda g with g^k = (x^k - p^k)/lambda; the acceptance
 * test ||g^k|| > mu theta^i eps_k is ||x^k - p^k|| > lambda mu theta^i eps_k.
 * envelope_value supplies the trace's f column.
 */
ProxRunResult gippm_solve(ProxOracle& oracle, const ValueFn& envelope_value, const Vector& x1,
                          const GippmConfig& cfg, const StopCriterion& stop = {});

/// GIPPM with the problem's own inner solver; f column is exact when prox_exact exists,
/// otherwise phi at the certified inner point (metadata f_val=envelope_upper_bound).
ProxRunResult gippm_solve(const ConvexProblem& problem, const Vector& x1, const GippmConfig& cfg,
                          const StopCriterion& stop = {});

enum class IppmScheme { A, B };

struct IppmConfig {
  double lambda = 1.0;
  IppmScheme scheme = IppmScheme::A;
  double c = 1.0;
  double p_exp = 1.5;  // > 1 keeps sum delta_k finite
  std::size_t max_outer = 100'000;
  double grad_tol = 0.0;
  double time_budget = 0.0;
  std::size_t max_inner = 1'000'000;
  bool record_iterates = false;

  void validate() const;
};

/// delta_k = c k^{-p}
double ippm_delta(double c, double p_exp, std::size_t k);

/**
 * Rockafellar's inexact proximal point baselines. Scheme A: ||p - Prox|| <= delta_k.
 * Scheme B: ||p - Prox|| <= delta_k ||x - p||, which rejects p = x unless the
 * certificate is exactly zero. Stops when ||x^k - p^k|| / lambda <= grad_tol.
 */
ProxRunResult ippm_baseline_solve(const ConvexProblem& problem, const Vector& x1,
                                  const IppmConfig& cfg);

}  // namespace inexact
