#include "inexact/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "inexact/rng.hpp"

namespace inexact {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Separable sum of a scalar function with derivative dphi.
ZooFunction separable(std::string name, std::size_t n, double (*phi)(double), double (*dphi)(double),
                      double L, double M, double f_star) {
  ZooFunction fn;
  fn.name = std::move(name);
  fn.problem.dim = n;
  fn.problem.value = [phi](const Vector& x) {
    double s = 0.0;
    for (double v : x) s += phi(v);
    return s;
  };
  fn.problem.grad = [dphi](const Vector& x) {
    Vector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = dphi(x[i]);
    return g;
  };
  fn.problem.lipschitz_L = L;
  fn.hessian_M = M;
  fn.f_star = f_star;
  return fn;
}

// f = 0.5 x^T Q x - q^T x
ZooFunction quadratic(std::string name, std::shared_ptr<const DenseMatrix> Q, Vector q, double f_star) {
  ZooFunction fn;
  fn.name = std::move(name);
  fn.problem.dim = Q->cols();
  fn.problem.value = [Q, q](const Vector& x) { return 0.5 * dot(x, matvec(*Q, x)) - dot(q, x); };
  fn.problem.grad = [Q, q](const Vector& x) { return matvec(*Q, x) - q; };
  fn.problem.lipschitz_L = operator_norm(*Q);
  fn.f_star = f_star;
  return fn;
}

ZooFunction make_spd_quad() {
  Rng rng(101);
  const std::size_t n = 6;
  std::vector<double> b(n * n);
  for (double& v : b) v = rng.normal();
  std::vector<double> q(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += b[k * n + i] * b[k * n + j];
      q[i * n + j] = s / static_cast<double>(n) + (i == j ? 0.1 : 0.0);
    }
  return quadratic("spd_quad", std::make_shared<DenseMatrix>(n, n, std::move(q)), rng.normal_vector(n),
                   kNaN);
}

ZooFunction make_least_squares() {
  Rng rng(202);
  const std::size_t m = 8, n = 5;
  std::vector<double> b(m * n);
  for (double& v : b) v = rng.normal();
  auto B = std::make_shared<DenseMatrix>(m, n, std::move(b));
  const Vector c = rng.normal_vector(m);
  ZooFunction fn;
  fn.name = "least_squares";
  fn.problem.dim = n;
  fn.problem.value = [B, c](const Vector& x) { return 0.5 * norm_squared(matvec(*B, x) - c); };
  fn.problem.grad = [B, c](const Vector& x) { return apply_adjoint(*B, matvec(*B, x) - c); };
  const double s = operator_norm(*B);
  fn.problem.lipschitz_L = s * s;
  fn.f_star = kNaN;
  return fn;
}

// (1/N) sum log(1 + exp(-y_i a_i^T x)) + (rho/2)||x||^2
ZooFunction make_logistic() {
  Rng rng(303);
  const std::size_t N = 20, n = 4;
  const double rho = 0.1;
  std::vector<double> a(N * n);
  for (double& v : a) v = rng.normal();
  std::vector<double> labels(N);
  for (double& l : labels) l = rng.uniform() < 0.5 ? -1.0 : 1.0;
  auto A = std::make_shared<DenseMatrix>(N, n, std::move(a));
  const Vector y(labels);

  double cube_sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r += (*A)(i, j) * (*A)(i, j);
    cube_sum += std::pow(r, 1.5);
  }
  const double s = operator_norm(*A);

  ZooFunction fn;
  fn.name = "logistic";
  fn.problem.dim = n;
  fn.problem.value = [A, y, rho, N](const Vector& x) {
    const Vector z = matvec(*A, x);
    double total = 0.0;
    for (std::size_t i = 0; i < N; ++i) total += std::log1p(std::exp(-y[i] * z[i]));
    return total / static_cast<double>(N) + 0.5 * rho * norm_squared(x);
  };
  fn.problem.grad = [A, y, rho, N](const Vector& x) {
    const Vector z = matvec(*A, x);
    Vector w(N);
    for (std::size_t i = 0; i < N; ++i) {
      w[i] = -y[i] / (1.0 + std::exp(y[i] * z[i])) / static_cast<double>(N);
    }
    Vector g = apply_adjoint(*A, w);
    g += rho * x;
    return g;
  };
  fn.problem.lipschitz_L = s * s / (4.0 * static_cast<double>(N)) + rho;
  // |sigma'''| <= 1/(6 sqrt 3)
  fn.hessian_M = cube_sum / (6.0 * std::sqrt(3.0) * static_cast<double>(N));
  fn.f_star = kNaN;
  return fn;
}

ZooFunction make_logsumexp() {
  const double rho = 0.1;
  ZooFunction fn;
  fn.name = "logsumexp_ridge";
  fn.problem.dim = 5;
  fn.problem.value = [rho](const Vector& x) {
    const double mx = *std::max_element(x.begin(), x.end());
    double s = 0.0;
    for (double v : x) s += std::exp(v - mx);
    return mx + std::log(s) + 0.5 * rho * norm_squared(x);
  };
  fn.problem.grad = [rho](const Vector& x) {
    const double mx = *std::max_element(x.begin(), x.end());
    double s = 0.0;
    for (double v : x) s += std::exp(v - mx);
    Vector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::exp(x[i] - mx) / s + rho * x[i];
    return g;
  };
  fn.problem.lipschitz_L = 1.0 + rho;
  fn.hessian_M = 2.0;
  fn.f_star = kNaN;
  return fn;
}

ZooFunction make_kl_p4() {
  // Region radius R = 2: L = 3 R^2, M = 6 R.
  const double R = 2.0;
  ZooFunction fn;
  fn.name = "kl_p4";
  fn.problem.dim = 3;
  fn.problem.value = [](const Vector& x) {
    const double r2 = norm_squared(x);
    return 0.25 * r2 * r2;
  };
  fn.problem.grad = [](const Vector& x) { return norm_squared(x) * x; };
  fn.problem.lipschitz_L = 3.0 * R * R;
  fn.hessian_M = 6.0 * R;
  fn.start_radius = 0.8;  // keeps CFD probes inside the region
  fn.f_star = 0.0;
  return fn;
}

}  // namespace

std::vector<std::string> zoo_names() {
  return {"sphere",          "quad",         "spd_quad", "least_squares",
          "logistic",        "logsumexp_ridge", "pseudo_huber", "logcosh",
          "cos_perturbed",   "kl_p4",        "smooth_l1"};
}

ZooFunction zoo_function(const std::string& name) {
  if (name == "sphere") {
    return separable(
        name, 5, [](double v) { return 0.5 * v * v; }, [](double v) { return v; }, 1.0, 0.0, 0.0);
  }
  if (name == "quad") {
    // 0.5 (x1^2 + 4 x2^2)
    return quadratic(name, std::make_shared<DenseMatrix>(DenseMatrix{{1.0, 0.0}, {0.0, 4.0}}),
                     Vector(2), 0.0);
  }
  if (name == "spd_quad") return make_spd_quad();
  if (name == "least_squares") return make_least_squares();
  if (name == "logistic") return make_logistic();
  if (name == "logsumexp_ridge") return make_logsumexp();
  if (name == "pseudo_huber") {
    // f'' = (1+v^2)^{-3/2} <= 1, |f'''| <= 0.859
    return separable(
        name, 4, [](double v) { return std::sqrt(1.0 + v * v) - 1.0; },
        [](double v) { return v / std::sqrt(1.0 + v * v); }, 1.0, 0.9, 0.0);
  }
  if (name == "logcosh") {
    // f'' = sech^2 <= 1, |f'''| <= 4 / (3 sqrt 3)
    return separable(
        name, 4,
        [](double v) {
          const double a = std::abs(v);
          return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
        },
        [](double v) { return std::tanh(v); }, 1.0, 0.77, 0.0);
  }
  if (name == "cos_perturbed") {
    // 0.5 v^2 + 2 cos v: f'' in [-1, 3], |f'''| <= 2; nonconvex.
    ZooFunction fn = separable(
        name, 3, [](double v) { return 0.5 * v * v + 2.0 * std::cos(v); },
        [](double v) { return v - 2.0 * std::sin(v); }, 3.0, 2.0, kNaN);
    fn.start_radius = 3.0;
    return fn;
  }
  if (name == "kl_p4") return make_kl_p4();
  if (name == "smooth_l1") {
    // sqrt(v^2 + s^2), s = 0.1: f'' <= 1/s = 10, |f'''| <= 86
    return separable(
        name, 4, [](double v) { return std::sqrt(v * v + 0.01); },
        [](double v) { return v / std::sqrt(v * v + 0.01); }, 10.0, 86.0, 0.4);
  }
  throw std::invalid_argument("unknown zoo function '" + name + "'");
}

std::vector<ZooFunction> test_zoo() {
  std::vector<ZooFunction> out;
  for (const auto& n : zoo_names()) out.push_back(zoo_function(n));
  return out;
}

Vector zoo_start(const ZooFunction& fn, std::uint64_t seed) {
  Rng rng(seed);
  return rng.uniform_vector(fn.problem.dim, -fn.start_radius, fn.start_radius);
}

}  // namespace inexact
