#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "inexact/alm.hpp"
#include "inexact/linalg.hpp"
#include "inexact/trace.hpp"

namespace inexact {

/// minimize 0.5 ||Ax - b||^2 + gamma ||x||_1, with c = A^T b cached.
struct LassoInstance {
  std::shared_ptr<const LinearOperator> A;
  Vector b;
  double gamma = 0.0;
  Vector c;
  double op_norm = 0.0;  // power-iteration estimate of ||A||, 1.01 safety factor included

  std::size_t m() const { return A->rows(); }
  std::size_t n() const { return A->cols(); }

  static LassoInstance make(std::shared_ptr<const LinearOperator> A, Vector b, double gamma);
};

/// sign(u_i) max(|u_i| - tau, 0)
Vector soft_threshold(const Vector& u, double tau);
/// Clamp every entry to [-gamma, gamma].
Vector project_linf_ball(const Vector& u, double gamma);

double lasso_primal_objective(const LassoInstance& inst, const Vector& x);

/// psi_k(y) = 0.5||y||^2 + ||soft(x_k - lambda(A^T y - c), lambda gamma)||^2/(2 lambda) - ||x_k||^2/(2 lambda)
double psi_value(const Vector& y, const Vector& x_k, double lambda, const LassoInstance& inst);
/// y - A soft(x_k - lambda(A^T y - c), lambda gamma); Lipschitz with constant 1 + lambda ||A||^2.
Vector psi_gradient(const Vector& y, const Vector& x_k, double lambda, const LassoInstance& inst);
/// argmin_z L_lambda(y, z, x_k) = clamp(x_k/lambda - A^T y + c, gamma).
Vector capital_psi(const Vector& y, const Vector& x_k, double lambda, const LassoInstance& inst);

/// L_lambda(y, z, x) for the dual program  min 0.5||y||^2 + indicator(z) s.t. -A^T y - z = -c.
double lasso_dual_aug_lagrangian(const Vector& y, const Vector& z, const Vector& x, double lambda,
                                 const LassoInstance& inst);

struct PsiSolve {
  Vector y;
  Vector z;
  std::size_t iterations = 0;
  double grad_norm = 0.0;
  double psi = 0.0;
  Vector residual;  // c - A^T y - z
};

/**
 * Gradient descent on psi_k with step 1/(1 + lambda op_norm^2) from warm_start
 * until ||grad psi_k(y)|| <= omega; by 1-strong convexity the gap is then at
 * most omega^2 / 2. Returns warm_start with 0 iterations when it already
 * qualifies. Throws OracleFailure with the best gradient norm when
 * max_iters steps are not enough.
 */
PsiSolve inner_solve_psi(const Vector& x_k, double lambda, const LassoInstance& inst, double omega,
                         const Vector& warm_start, std::size_t max_iters = 10'000'000);

/// ||x - soft(x - A^T(Ax - b), gamma)|| / (1 + ||x|| + ||Ax - b||)
double eta_residual(const Vector& x, const LassoInstance& inst);

struct GammaMode {
  enum class Kind { Absolute, Scaled };
  Kind kind = Kind::Scaled;
  double value = 1e-3;  // gamma itself, or the factor on ||A^T b||_inf

  static GammaMode absolute(double g) { return {Kind::Absolute, g}; }
  static GammaMode scaled(double f) { return {Kind::Scaled, f}; }
};

/// A and b with i.i.d. standard normal entries (A row by row, then b).
LassoInstance gen_random_instance(std::size_t m, std::size_t n, GammaMode gamma_mode,
                                  std::uint64_t seed);

/// The dual program as an EqualityConstrainedProblem over (y, z) in R^{m+n}.
EqualityConstrainedProblem lasso_dual_problem(const LassoInstance& inst);

/**
 * SubproblemSolver for the dual program: the multiplier is the Lasso x and
 * the subproblem is min_y psi_x(y). A gap target t maps to omega = sqrt(2 t).
 * Warm-starts from the last y it returned.
 */
class LassoDualSubproblem final : public SubproblemSolver {
 public:
  LassoDualSubproblem(const LassoInstance& inst, double lambda, std::size_t max_inner = 10'000'000);
  SubproblemResult solve(const Vector& x, double gap_target) override;
  double lambda() const override { return lambda_; }

  const PsiSolve& last() const { return last_; }
  double last_omega() const { return last_omega_; }
  std::size_t total_iters() const { return total_iters_; }

 private:
  const LassoInstance& inst_;
  double lambda_;
  std::size_t max_inner_;
  Vector warm_;
  PsiSolve last_;
  double last_omega_ = 0.0;
  std::size_t total_iters_ = 0;
};

/// GIALM-mu or IALM-q.
struct LassoMethod {
  enum class Kind { Gialm, Ialm };
  Kind kind = Kind::Gialm;
  double mu = 3.0;
  double q = 2.0;
  double eps1 = 1.0;
  double theta = 0.8;

  std::string label() const;
  /// Parses "GIALM-<mu>" or "IALM-<q>"; throws std::invalid_argument otherwise.
  static LassoMethod parse(const std::string& label);
};

struct LassoRunConfig {
  double lambda = 0.01;
  double eta_tol = 1e-6;
  std::size_t max_outer = 200'000;
  double time_budget = 0.0;
  std::optional<Vector> x1;  // default 0
};

struct LassoHistoryRow {
  std::size_t k = 0;
  double eta = 0.0;           // eta at x^{k+1}
  double omega = 0.0;         // inner gradient tolerance used for the accepted solve
  double primal_obj = 0.0;    // primal objective at x^{k+1}
  std::size_t cum_inner = 0;  // inner iterations so far
  double elapsed = 0.0;
};

struct LassoRun {
  std::string method;
  Vector x;
  IterationTrace trace;
  IgdStatus status;
  std::vector<LassoHistoryRow> history;
  std::size_t iters = 0;
  std::size_t total_inner = 0;
  double eta_final = 0.0;
  double time_s = 0.0;

  bool reached(double eta_tol) const { return eta_final <= eta_tol; }
  /// Cumulative inner iterations at the first iterate with eta <= tol.
  std::optional<std::size_t> inner_at_eta(double eta_tol) const;
};

LassoRun gialm_lasso_solve(const LassoInstance& inst, const LassoMethod& method,
                           const LassoRunConfig& cfg);

inline constexpr const char* kLassoHistoryHeader = "k,eta,omega,primal_obj,cum_inner,elapsed_s";
inline constexpr const char* kRunSummaryHeader =
    "method,m,n,gamma,lambda,iters,total_inner_iters,eta_final,time_s";
inline constexpr const char* kTableSummaryHeader = "test_id,method,m,n,iter,eta,total_inner,time_s";

void write_lasso_history_csv(std::ostream& out, const LassoRun& run, TimingMode timing);
std::string run_summary_row(const LassoRun& run, const LassoInstance& inst, double lambda,
                            TimingMode timing);
std::string table_summary_row(const std::string& test_id, const LassoRun& run,
                              const LassoInstance& inst, TimingMode timing);

}  // namespace inexact
