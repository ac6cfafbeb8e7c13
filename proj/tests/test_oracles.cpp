#include <doctest.h>

#include <cmath>

#include "inexact/oracles.hpp"
#include "inexact/rng.hpp"
#include "inexact/zoo.hpp"

using namespace inexact;

namespace {

SmoothProblem scalar_problem(double (*f)(double), double (*df)(double), double L) {
  SmoothProblem p;
  p.dim = 1;
  p.value = [f](const Vector& x) { return f(x[0]); };
  p.grad = [df](const Vector& x) { return Vector{df(x[0])}; };
  p.lipschitz_L = L;
  return p;
}

CompositeFunction abs_function() {
  CompositeFunction g;
  g.dim = 1;
  g.simple_value = [](const Vector& y) -> std::optional<double> { return std::abs(y[0]); };
  g.simple_prox = [](const Vector& v, double t) {
    const double a = std::abs(v[0]) - t;
    return Vector{a > 0 ? std::copysign(a, v[0]) : 0.0};
  };
  return g;
}

CompositeFunction half_square(std::size_t n) {
  CompositeFunction g;
  g.dim = n;
  g.smooth_value = [](const Vector& y) { return 0.5 * norm_squared(y); };
  g.smooth_grad = [](const Vector& y) { return y; };
  g.smooth_L = 1.0;
  return g;
}

}  // namespace

TEST_CASE("FFD is exact on affine functions") {
  SmoothProblem p;
  p.dim = 3;
  p.value = [](const Vector& x) { return 2.0 * x[0]; };
  p.lipschitz_L = 1.0;
  for (double eps : {1.0, 0.1, 1e-3}) {
    const Vector g = ffd_gradient(p.value, Vector{0.5, -1.0, 2.0}, eps, p.lipschitz_L);
    CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 0.0);
  }
}

TEST_CASE("FFD hand example") {
  const SmoothProblem p = scalar_problem([](double v) { return 0.5 * v * v; }, [](double v) { return v; }, 1.0);
  CHECK(ffd_step(0.1, 1.0, 1) == doctest::Approx(0.1));
  const Vector g = ffd_gradient(p.value, Vector{1.0}, 0.1, 1.0);
  CHECK(g[0] == doctest::Approx(1.05).epsilon(1e-12));
  CHECK(std::abs(g[0] - 1.0) <= 0.1);
}

TEST_CASE("FFD error bound on random quadratics") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const std::size_t n = 5;
    std::vector<double> b(n * n);
    for (double& v : b) v = rng.normal();
    std::vector<double> q(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) q[i * n + j] += b[k * n + i] * b[k * n + j];
    auto Q = std::make_shared<DenseMatrix>(n, n, q);
    const double L = operator_norm(*Q);
    const ValueFn f = [Q](const Vector& x) { return 0.5 * dot(x, matvec(*Q, x)); };
    const Vector x = rng.normal_vector(n);
    const double eps = 0.01;
    const Vector g = ffd_gradient(f, x, eps, L);
    const double delta = ffd_step(eps, L, n);
    const double err = norm(g - matvec(*Q, x));
    CHECK(err <= L * std::sqrt(5.0) * delta / 2.0 + 1e-9);
    CHECK(err <= eps / 2.0 + 1e-9);
  }
}

TEST_CASE("CFD examples") {
  SUBCASE("quadratics are differenced exactly") {
    const ZooFunction fn = zoo_function("quad");
    const Vector x{0.7, -1.3};
    const Vector g = cfd_gradient(fn.problem.value, x, 1e-3, 0.0);
    CHECK(norm(g - fn.problem.grad(x)) < 1e-12);
  }
  SUBCASE("cubic meets its bound with equality") {
    const ValueFn f = [](const Vector& x) { return x[0] * x[0] * x[0] / 6.0; };
    const double eps = 1e-3, x = 2.0;
    const double delta = cfd_step(eps, 1.0, 1);
    const Vector g = cfd_gradient(f, Vector{x}, eps, 1.0);
    CHECK(g[0] - x * x / 2.0 == doctest::Approx(delta * delta / 24.0).epsilon(1e-6));
    CHECK(delta * delta / 24.0 == doctest::Approx(eps / 2.0));
  }
  SUBCASE("sine at zero") {
    const ValueFn f = [](const Vector& x) { return std::sin(x[0]); };
    const Vector g = cfd_gradient(f, Vector{0.0}, 1e-4, 1.0);
    CHECK(std::abs(g[0] - 1.0) <= 1e-4);
  }
}

TEST_CASE("oracles count their work") {
  const ZooFunction fn = zoo_function("sphere");
  FfdOracle ffd(fn.problem);
  CfdOracle cfd(fn.problem, fn.hessian_M);
  ffd.query(Vector(5, 1.0), 0.1);
  cfd.query(Vector(5, 1.0), 0.1);
  CHECK(ffd.cost() == 6);
  CHECK(cfd.cost() == 10);
  CHECK_THROWS_AS(ffd.query(Vector(5), 0.0), std::invalid_argument);
}

TEST_CASE("noisy oracle") {
  const ZooFunction fn = zoo_function("logistic");
  SUBCASE("deterministic under a seed") {
    NoisyOracle a(fn.problem, Rng(9)), b(fn.problem, Rng(9));
    for (int i = 0; i < 20; ++i) {
      const Vector x(4, 0.1 * i);
      CHECK(a.query(x, 0.5) == b.query(x, 0.5));
    }
  }
  SUBCASE("audit over 10^4 calls") {
    NoisyOracle o(fn.problem, Rng(3));
    Rng pts(4);
    double worst = 0.0;
    for (int i = 0; i < 10'000; ++i) {
      const Vector x = pts.uniform_vector(4, -2, 2);
      const double eps = std::pow(10.0, pts.uniform(-8, 1));
      worst = std::max(worst, norm(o.query(x, eps) - fn.problem.grad(x)) / eps);
    }
    CHECK(worst <= 1.0);
  }
  SUBCASE("vanishing error returns the gradient") {
    NoisyOracle o(fn.problem, Rng(3));
    const Vector x{0.3, -0.2, 0.1, 1.0};
    CHECK(norm(o.query(x, 1e-300) - fn.problem.grad(x)) <= 1e-15);
  }
}

TEST_CASE("adversarial oracle sits on the error sphere against the gradient") {
  const ZooFunction fn = zoo_function("quad");
  AdversarialOracle o(fn.problem);
  const Vector x{1.0, 1.0};
  const Vector g = o.query(x, 0.5);
  const Vector u = g - fn.problem.grad(x);
  CHECK(norm(u) == doctest::Approx(0.5));
  CHECK(dot(u, fn.problem.grad(x)) < 0.0);
}

TEST_CASE("Moreau envelope gradient examples") {
  const CompositeFunction g = abs_function();
  SUBCASE("fixed point of the prox") {
    MoreauOracle o(g, 1.0);
    CHECK(norm(o.query(Vector{0.0}, 0.1)) <= 0.1);
  }
  SUBCASE("soft-threshold closed form") {
    MoreauOracle o(g, 1.0);
    const Vector G = o.query(Vector{3.0}, 0.1);
    CHECK(std::abs(G[0] - 1.0) <= 0.1);
  }
  SUBCASE("half square") {
    const CompositeFunction h = half_square(2);
    ProxSubproblem sub{&h, 1.0, Vector{2.0, 0.0}};
    const MoreauGradient mg = moreau_gradient_oracle(sub, 1e-3, Vector(2));
    CHECK(norm(mg.g - Vector{1.0, 0.0}) <= 1e-3);
    CHECK(norm(mg.prox_point - Vector{1.0, 0.0}) <= 1e-3);
  }
  SUBCASE("inner certificate bounds the prox error") {
    const CompositeFunction h = half_square(3);
    ProxSubproblem sub{&h, 0.5, Vector{1.0, -2.0, 0.5}};
    const ProxSolve ps = solve_prox_subproblem(sub, Vector(3), 1e-6, 100000);
    const Vector exact = sub.anchor / 1.5;
    CHECK(norm(ps.point - exact) <= sub.lambda * ps.certificate + 1e-15);
    CHECK(ps.certificate <= 1e-6);
  }
}

TEST_CASE("subproblem solver reports failure with its best bound") {
  CompositeFunction h = half_square(2);
  h.smooth_L = 100.0;  // overestimate: small steps, no one-step exact solve
  ProxSubproblem sub{&h, 1.0, Vector{5.0, 5.0}};
  try {
    solve_prox_subproblem(sub, Vector(2), 1e-30, 3);
    FAIL("expected OracleFailure");
  } catch (const OracleFailure& e) {
    CHECK(e.achieved_bound() > 0.0);
  }
}
