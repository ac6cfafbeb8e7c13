#include "inexact/lasso.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "inexact/rng.hpp"

namespace inexact {

namespace {

inline double soft(double u, double tau) {
  if (u > tau) return u - tau;
  if (u < -tau) return u + tau;
  return 0.0;
}

inline double clamp_abs(double u, double gamma) { return std::clamp(u, -gamma, gamma); }

void check_dims(const Vector& y, const Vector& x_k, const LassoInstance& inst, const char* what) {
  require_same_size(y.size(), inst.m(), what);
  require_same_size(x_k.size(), inst.n(), what);
}

// [-A^T, -I] : R^{m+n} -> R^n
class DualConstraintOperator final : public LinearOperator {
 public:
  explicit DualConstraintOperator(std::shared_ptr<const LinearOperator> a) : a_(std::move(a)) {}
  std::size_t rows() const override { return a_->cols(); }
  std::size_t cols() const override { return a_->rows() + a_->cols(); }

  void apply(std::span<const double> yz, std::span<double> out) const override {
    const std::size_t m = a_->rows();
    a_->apply_adjoint(yz.subspan(0, m), out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -out[i] - yz[m + i];
  }

  void apply_adjoint(std::span<const double> w, std::span<double> out) const override {
    const std::size_t m = a_->rows();
    a_->apply(w, out.subspan(0, m));
    for (std::size_t i = 0; i < m; ++i) out[i] = -out[i];
    for (std::size_t i = 0; i < w.size(); ++i) out[m + i] = -w[i];
  }

 private:
  std::shared_ptr<const LinearOperator> a_;
};

}  // namespace

LassoInstance LassoInstance::make(std::shared_ptr<const LinearOperator> A, Vector b, double gamma) {
  if (!A) throw std::invalid_argument("LassoInstance: null operator");
  require_same_size(A->rows(), b.size(), "LassoInstance");
  if (!(gamma > 0.0)) throw std::invalid_argument("LassoInstance: gamma must be positive");
  LassoInstance inst;
  inst.c = apply_adjoint(*A, b);
  inst.op_norm = operator_norm(*A);
  inst.A = std::move(A);
  inst.b = std::move(b);
  inst.gamma = gamma;
  return inst;
}

Vector soft_threshold(const Vector& u, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("soft_threshold: tau must be positive");
  Vector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = soft(u[i], tau);
  return out;
}

Vector project_linf_ball(const Vector& u, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("project_linf_ball: gamma must be positive");
  Vector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = clamp_abs(u[i], gamma);
  return out;
}

double lasso_primal_objective(const LassoInstance& inst, const Vector& x) {
  Vector r = apply(*inst.A, x);
  r -= inst.b;
  return 0.5 * norm_squared(r) + inst.gamma * norm1(x);
}

namespace {

// s = soft(x_k - lambda (A^T y - c), lambda gamma), with aty = A^T y precomputed.
void shrink_argument(std::span<const double> aty, const Vector& x_k, double lambda,
                     const LassoInstance& inst, std::span<double> s) {
  const double tau = lambda * inst.gamma;
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = soft(x_k[i] - lambda * (aty[i] - inst.c[i]), tau);
  }
}

}  // namespace

double psi_value(const Vector& y, const Vector& x_k, double lambda, const LassoInstance& inst) {
  check_dims(y, x_k, inst, "psi_value");
  const Vector aty = apply_adjoint(*inst.A, y);
  Vector s(inst.n());
  shrink_argument(aty.span(), x_k, lambda, inst, s.span());
  return 0.5 * norm_squared(y) + norm_squared(s) / (2.0 * lambda) -
         norm_squared(x_k) / (2.0 * lambda);
}

Vector psi_gradient(const Vector& y, const Vector& x_k, double lambda, const LassoInstance& inst) {
  check_dims(y, x_k, inst, "psi_gradient");
  const Vector aty = apply_adjoint(*inst.A, y);
  Vector s(inst.n());
  shrink_argument(aty.span(), x_k, lambda, inst, s.span());
  Vector g = y;
  g -= apply(*inst.A, s);
  return g;
}

Vector capital_psi(const Vector& y, const Vector& x_k, double lambda, const LassoInstance& inst) {
  check_dims(y, x_k, inst, "capital_psi");
  const Vector aty = apply_adjoint(*inst.A, y);
  Vector z(inst.n());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = clamp_abs(x_k[i] / lambda - aty[i] + inst.c[i], inst.gamma);
  }
  return z;
}

double lasso_dual_aug_lagrangian(const Vector& y, const Vector& z, const Vector& x, double lambda,
                                 const LassoInstance& inst) {
  check_dims(y, x, inst, "lasso_dual_aug_lagrangian");
  require_same_size(z.size(), inst.n(), "lasso_dual_aug_lagrangian");
  if (norm_inf(z) > inst.gamma) return std::numeric_limits<double>::infinity();
  const Vector aty = apply_adjoint(*inst.A, y);
  Vector r(inst.n());  // -A^T y - z + c
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = -aty[i] - z[i] + inst.c[i];
  return 0.5 * norm_squared(y) + dot(x, r) + 0.5 * lambda * norm_squared(r);
}

PsiSolve inner_solve_psi(const Vector& x_k, double lambda, const LassoInstance& inst, double omega,
                         const Vector& warm_start, std::size_t max_iters) {
  check_dims(warm_start, x_k, inst, "inner_solve_psi");
  if (!(omega > 0.0)) throw std::invalid_argument("inner_solve_psi: omega must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("inner_solve_psi: lambda must be positive");
  const std::size_t m = inst.m();
  const std::size_t n = inst.n();
  const double step = 1.0 / (1.0 + lambda * inst.op_norm * inst.op_norm);

  std::vector<double> y(warm_start.begin(), warm_start.end());
  std::vector<double> aty(n), s(n), as(m), g(m);
  double best = std::numeric_limits<double>::infinity();
  double g_norm = 0.0;
  std::size_t it = 0;
  for (;;) {
    inst.A->apply_adjoint(y, aty);
    shrink_argument(aty, x_k, lambda, inst, s);
    inst.A->apply(s, as);
    double sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      g[i] = y[i] - as[i];
      sq += g[i] * g[i];
    }
    g_norm = std::sqrt(sq);
    if (!std::isfinite(g_norm)) throw OracleFailure("inner_solve_psi diverged", best);
    best = std::min(best, g_norm);
    if (g_norm <= omega) break;
    if (it == max_iters) {
      throw OracleFailure("inner_solve_psi: budget of " + std::to_string(max_iters) +
                              " iterations exhausted",
                          best);
    }
    for (std::size_t i = 0; i < m; ++i) y[i] -= step * g[i];
    ++it;
  }

  PsiSolve out;
  out.iterations = it;
  out.grad_norm = g_norm;
  out.z = Vector(n);
  out.residual = Vector(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = clamp_abs(x_k[i] / lambda - aty[i] + inst.c[i], inst.gamma);
    out.z[i] = z;
    out.residual[i] = inst.c[i] - aty[i] - z;
  }
  double s_sq = 0.0;
  for (double v : s) s_sq += v * v;
  out.y = Vector(std::move(y));
  out.psi = 0.5 * norm_squared(out.y) + s_sq / (2.0 * lambda) - norm_squared(x_k) / (2.0 * lambda);
  return out;
}

namespace {

struct EtaAndObjective {
  double eta;
  double objective;
};

// Both quantities from a single A x and A^T r.
EtaAndObjective eta_and_objective(const Vector& x, const LassoInstance& inst) {
  require_same_size(x.size(), inst.n(), "eta_residual");
  Vector r = apply(*inst.A, x);
  r -= inst.b;
  const Vector atr = apply_adjoint(*inst.A, r);
  double num = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - soft(x[i] - atr[i], inst.gamma);
    num += d * d;
  }
  const double r_sq = norm_squared(r);
  return {std::sqrt(num) / (1.0 + norm(x) + std::sqrt(r_sq)), 0.5 * r_sq + inst.gamma * norm1(x)};
}

}  // namespace

double eta_residual(const Vector& x, const LassoInstance& inst) {
  return eta_and_objective(x, inst).eta;
}

LassoInstance gen_random_instance(std::size_t m, std::size_t n, GammaMode gamma_mode,
                                  std::uint64_t seed) {
  if (m == 0 || n == 0) throw std::invalid_argument("gen_random_instance: m and n must be >= 1");
  if (!(gamma_mode.value > 0.0)) throw std::invalid_argument("gen_random_instance: gamma must be positive");
  Rng rng(seed);
  std::vector<double> a(m * n);
  for (double& v : a) v = rng.normal();
  Vector b = rng.normal_vector(m);
  auto op = std::make_shared<DenseMatrix>(m, n, std::move(a));
  double gamma = gamma_mode.value;
  if (gamma_mode.kind == GammaMode::Kind::Scaled) {
    gamma *= norm_inf(apply_adjoint(*op, b));
  }
  return LassoInstance::make(std::move(op), std::move(b), gamma);
}

EqualityConstrainedProblem lasso_dual_problem(const LassoInstance& inst) {
  EqualityConstrainedProblem prob;
  const std::size_t m = inst.m();
  const double gamma = inst.gamma;
  prob.objective = [m, gamma](const Vector& yz) -> std::optional<double> {
    double yy = 0.0;
    for (std::size_t i = 0; i < m; ++i) yy += yz[i] * yz[i];
    for (std::size_t i = m; i < yz.size(); ++i) {
      if (std::abs(yz[i]) > gamma) return std::nullopt;
    }
    return 0.5 * yy;
  };
  prob.A = std::make_shared<DualConstraintOperator>(inst.A);
  prob.b = -inst.c;
  return prob;
}

// ---------------------------------------------------------------------------

LassoDualSubproblem::LassoDualSubproblem(const LassoInstance& inst, double lambda,
                                         std::size_t max_inner)
    : inst_(inst), lambda_(lambda), max_inner_(max_inner), warm_(inst.m()) {
  if (!(lambda_ > 0.0)) throw std::invalid_argument("LassoDualSubproblem: lambda must be positive");
}

SubproblemResult LassoDualSubproblem::solve(const Vector& x, double gap_target) {
  if (!(gap_target > 0.0)) throw std::invalid_argument("solve: gap_target must be positive");
  last_omega_ = std::sqrt(2.0 * gap_target);
  try {
    last_ = inner_solve_psi(x, lambda_, inst_, last_omega_, warm_, max_inner_);
  } catch (const OracleFailure&) {
    total_iters_ += max_inner_;
    throw;
  }
  total_iters_ += last_.iterations;
  warm_ = last_.y;
  SubproblemResult res;
  res.x = concat(last_.y, last_.z);
  res.gap_bound = 0.5 * last_.grad_norm * last_.grad_norm;
  res.inner_iters = last_.iterations;
  res.residual = last_.residual;
  res.aug_lag_value = last_.psi;
  return res;
}

std::string LassoMethod::label() const {
  return kind == Kind::Gialm ? "GIALM-" + format_double(mu) : "IALM-" + format_double(q);
}

LassoMethod LassoMethod::parse(const std::string& label) {
  const auto dash = label.find('-');
  if (dash == std::string::npos) throw std::invalid_argument("unknown method '" + label + "'");
  const std::string head = label.substr(0, dash);
  const std::string tail = label.substr(dash + 1);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(tail, &used);
    if (used != tail.size()) throw std::invalid_argument(tail);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad method parameter in '" + label + "'");
  }
  LassoMethod m;
  if (head == "GIALM") {
    if (!(value > 1.0)) throw std::invalid_argument("GIALM needs mu > 1");
    m.kind = Kind::Gialm;
    m.mu = value;
  } else if (head == "IALM") {
    if (!(value > 1.0)) throw std::invalid_argument("IALM needs q > 1");
    m.kind = Kind::Ialm;
    m.q = value;
  } else {
    throw std::invalid_argument("unknown method '" + label + "'");
  }
  return m;
}

std::optional<std::size_t> LassoRun::inner_at_eta(double eta_tol) const {
  for (const auto& row : history) {
    if (row.eta <= eta_tol) return row.cum_inner;
  }
  return std::nullopt;
}

LassoRun gialm_lasso_solve(const LassoInstance& inst, const LassoMethod& method,
                           const LassoRunConfig& cfg) {
  const Vector x1 = cfg.x1 ? *cfg.x1 : Vector(inst.n());
  require_same_size(x1.size(), inst.n(), "gialm_lasso_solve");
  const EqualityConstrainedProblem prob = lasso_dual_problem(inst);
  LassoDualSubproblem sub(inst, cfg.lambda);

  LassoRun run;
  run.method = method.label();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  StopCriterion stop = [&](std::size_t k, const Vector& x_next) {
    LassoHistoryRow row;
    row.k = k;
    const EtaAndObjective eo = eta_and_objective(x_next, inst);
    row.eta = eo.eta;
    row.omega = sub.last_omega();
    row.primal_obj = eo.objective;
    row.cum_inner = sub.total_iters();
    row.elapsed = elapsed();
    run.history.push_back(row);
    return row.eta <= cfg.eta_tol;
  };

  AlmResult res;
  if (method.kind == LassoMethod::Kind::Gialm) {
    GippmConfig gc;
    gc.lambda = cfg.lambda;
    gc.igd.eps1 = method.eps1;
    gc.igd.theta = method.theta;
    gc.igd.mu = method.mu;
    gc.igd.max_outer = cfg.max_outer;
    gc.igd.time_budget = cfg.time_budget;
    res = gialm_solve(prob, sub, x1, gc, stop);
  } else {
    IalmConfig ic;
    ic.q = method.q;
    ic.lambda = cfg.lambda;
    ic.max_outer = cfg.max_outer;
    ic.time_budget = cfg.time_budget;
    res = ialm_baseline_solve(prob, sub, x1, ic, stop);
  }

  run.time_s = elapsed();
  run.x = std::move(res.y);
  run.trace = std::move(res.trace);
  run.trace.method = run.method;
  run.status = std::move(res.status);
  run.iters = run.history.size();
  run.total_inner = sub.total_iters();
  run.eta_final = run.history.empty() ? eta_residual(run.x, inst) : run.history.back().eta;
  return run;
}

void write_lasso_history_csv(std::ostream& out, const LassoRun& run, TimingMode timing) {
  out << "# metadata: method=" << run.method << ";status=" << describe(run.status) << '\n';
  out << kLassoHistoryHeader << '\n';
  for (const auto& row : run.history) {
    out << row.k << ',' << format_double(row.eta) << ',' << format_double(row.omega) << ','
        << format_double(row.primal_obj) << ',' << row.cum_inner << ','
        << format_double(timing == TimingMode::Wall ? row.elapsed : 0.0) << '\n';
  }
}

std::string run_summary_row(const LassoRun& run, const LassoInstance& inst, double lambda,
                            TimingMode timing) {
  std::ostringstream os;
  os << run.method << ',' << inst.m() << ',' << inst.n() << ',' << format_double(inst.gamma) << ','
     << format_double(lambda) << ',' << run.iters << ',' << run.total_inner << ','
     << format_double(run.eta_final) << ','
     << format_double(timing == TimingMode::Wall ? run.time_s : 0.0);
  return os.str();
}

std::string table_summary_row(const std::string& test_id, const LassoRun& run,
                              const LassoInstance& inst, TimingMode timing) {
  std::ostringstream os;
  os << test_id << ',' << run.method << ',' << inst.m() << ',' << inst.n() << ',' << run.iters << ','
     << format_double(run.eta_final) << ',' << run.total_inner << ','
     << format_double(timing == TimingMode::Wall ? run.time_s : 0.0);
  return os.str();
}

}  // namespace inexact
