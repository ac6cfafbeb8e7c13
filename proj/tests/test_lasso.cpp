#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "inexact/blur.hpp"
#include "inexact/instance_io.hpp"
#include "inexact/lasso.hpp"
#include "support.hpp"

using namespace inexact;

namespace {

LassoInstance small_instance(std::uint64_t seed = 1) {
  return gen_random_instance(20, 40, GammaMode::scaled(1e-3), seed);
}

// Primal minimizer by a long proximal-gradient run (independent of the dual machinery).
Vector ista_solution(const LassoInstance& inst, std::size_t iters) {
  const double step = 1.0 / (inst.op_norm * inst.op_norm);
  Vector x(inst.n());
  for (std::size_t k = 0; k < iters; ++k) {
    Vector r = apply(*inst.A, x);
    r -= inst.b;
    Vector u = x - step * apply_adjoint(*inst.A, r);
    x = soft_threshold(u, step * inst.gamma);
  }
  return x;
}

}  // namespace

TEST_CASE("soft threshold and projection examples") {
  CHECK(soft_threshold(Vector{0.3}, 0.5) == Vector{0.0});
  CHECK(soft_threshold(Vector{2.0}, 0.5) == Vector{1.5});
  CHECK(soft_threshold(Vector{-2.0, 1.0}, 0.5) == Vector{-1.5, 0.5});
  CHECK(project_linf_ball(Vector{0.2, -0.4}, 1.0) == Vector{0.2, -0.4});
  CHECK(project_linf_ball(Vector{2.0, -0.5}, 1.0) == Vector{1.0, -0.5});
  CHECK_THROWS_AS(soft_threshold(Vector{1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(project_linf_ball(Vector{1.0}, -1.0), std::invalid_argument);

  const double v = testsupport::grid_argmin(
      [](double t) { return 0.5 * std::abs(t) + 0.5 * (t - 2.0) * (t - 2.0); }, -1.0, 3.0, 1e-4);
  CHECK(std::abs(v - 1.5) <= 2e-4);
}

TEST_CASE("Moreau decomposition for the l1 norm") {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const Vector u = rng.normal_vector(6) * 3.0;
    const double lambda = rng.uniform(0.01, 10.0), gamma = rng.uniform(0.01, 2.0);
    const Vector sum = soft_threshold(u, lambda * gamma) + lambda * project_linf_ball(u / lambda, gamma);
    CHECK(norm(sum - u) <= 1e-10);
  }
}

TEST_CASE("psi with a zero operator") {
  auto A = std::make_shared<DenseMatrix>(3, 4);
  const LassoInstance inst = LassoInstance::make(A, Vector{1.0, 2.0, 3.0}, 0.5);
  const Vector x{1.0, -0.2, 0.0, 3.0}, y{0.5, -1.0, 2.0};
  const double lambda = 0.3;
  const double expected = 0.5 * norm_squared(y) + norm_squared(soft_threshold(x, lambda * 0.5)) / (2 * lambda) -
                          norm_squared(x) / (2 * lambda);
  CHECK(psi_value(y, x, lambda, inst) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(psi_gradient(y, x, lambda, inst) == y);
}

TEST_CASE("psi equals the augmented Lagrangian at Psi") {
  const LassoInstance inst = small_instance();
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const Vector x = rng.normal_vector(40), y = rng.normal_vector(20);
    const double lambda = rng.uniform(0.01, 2.0);
    const Vector z = capital_psi(y, x, lambda, inst);
    const double al = lasso_dual_aug_lagrangian(y, z, x, lambda, inst);
    CHECK(std::abs(psi_value(y, x, lambda, inst) - al) <= 1e-9 * (1.0 + std::abs(al)));
    CHECK(norm_inf(z) <= inst.gamma);
    for (int s = 0; s < 3; ++s) {
      const Vector zr = rng.uniform_vector(40, -inst.gamma, inst.gamma);
      CHECK(al <= lasso_dual_aug_lagrangian(y, zr, x, lambda, inst) + 1e-12);
    }
    // A^T y + Psi(y) - c = (x - soft(x - lambda(A^T y - c), lambda gamma)) / lambda
    Vector lhs = apply_adjoint(*inst.A, y) + z - inst.c;
    const Vector rhs =
        (x - soft_threshold(x - lambda * (apply_adjoint(*inst.A, y) - inst.c), lambda * inst.gamma)) / lambda;
    CHECK(norm(lhs - rhs) <= 1e-9 * (1.0 + norm(rhs)));
  }
  Vector outside(40);
  outside[0] = 2.0 * inst.gamma;
  CHECK(std::isinf(lasso_dual_aug_lagrangian(Vector(20), outside, Vector(40), 1.0, inst)));
}

TEST_CASE("psi gradient matches centered differences") {
  const LassoInstance inst = small_instance(3);
  Rng rng(4);
  const double lambda = 0.01;
  for (int t = 0; t < 100; ++t) {
    const Vector x = rng.normal_vector(40), y = rng.normal_vector(20);
    const Vector g = psi_gradient(y, x, lambda, inst);
    Vector fd(20);
    const double h = 1e-5;
    for (std::size_t i = 0; i < 20; ++i) {
      Vector yp = y, ym = y;
      yp[i] += h;
      ym[i] -= h;
      fd[i] = (psi_value(yp, x, lambda, inst) - psi_value(ym, x, lambda, inst)) / (2 * h);
    }
    CHECK(norm(g - fd) <= 1e-6 * norm(g));
  }
}

TEST_CASE("inner solver") {
  const LassoInstance inst = small_instance();
  Rng rng(6);
  const Vector x = rng.normal_vector(40);
  const double lambda = 0.5;

  SUBCASE("strong convexity around the minimum") {
    const PsiSolve best = inner_solve_psi(x, lambda, inst, 1e-10, Vector(20));
    CHECK(norm(psi_gradient(best.y, x, lambda, inst)) <= 1e-8);
    for (int t = 0; t < 100; ++t) {
      const Vector y = best.y + rng.normal_vector(20) * rng.uniform(0.0, 2.0);
      CHECK(psi_value(y, x, lambda, inst) - best.psi >= 0.5 * norm_squared(y - best.y) - 1e-9);
    }
  }
  SUBCASE("a qualifying warm start is returned untouched") {
    const Vector warm = rng.normal_vector(20);
    const double g = norm(psi_gradient(warm, x, lambda, inst));
    const PsiSolve s = inner_solve_psi(x, lambda, inst, 2.0 * g, warm);
    CHECK(s.iterations == 0);
    CHECK(s.y == warm);
  }
  SUBCASE("each step decreases psi and the gradient") {
    Vector y = rng.normal_vector(20);
    double prev_psi = psi_value(y, x, lambda, inst);
    for (int t = 0; t < 50; ++t) {
      const double g = norm(psi_gradient(y, x, lambda, inst));
      if (g < 1e-12) break;
      const PsiSolve s = inner_solve_psi(x, lambda, inst, g * (1.0 - 1e-12), y);
      CHECK(s.iterations == 1);
      CHECK(s.psi <= prev_psi);
      prev_psi = s.psi;
      y = s.y;
    }
  }
  SUBCASE("tighter tolerances never take fewer iterations") {
    const Vector warm = rng.normal_vector(20);
    std::size_t prev = 0;
    for (double omega = 1.0; omega > 1e-10; omega /= 2.0) {
      const PsiSolve s = inner_solve_psi(x, lambda, inst, omega, warm);
      CHECK(s.iterations >= prev);
      prev = s.iterations;
    }
  }
  SUBCASE("budget exhaustion") {
    CHECK_THROWS_AS(inner_solve_psi(x, lambda, inst, 1e-12, Vector(20), 2), OracleFailure);
  }
}

TEST_CASE("eta residual") {
  // Overdetermined, so the primal is strongly convex and ISTA converges linearly.
  const LassoInstance inst = gen_random_instance(40, 20, GammaMode::scaled(1e-3), 7);
  const Vector xs = ista_solution(inst, 20'000);
  CHECK(eta_residual(xs, inst) <= 1e-8);
  CHECK(eta_residual(1e3 * (xs + Vector(20, 0.1)), inst) > 0.0);

  auto A = std::make_shared<DenseMatrix>(DenseMatrix::identity(3));
  const LassoInstance zero_b = LassoInstance::make(A, Vector(3), 0.1);
  CHECK(eta_residual(Vector(3), zero_b) == 0.0);
}

TEST_CASE("random instances") {
  const LassoInstance a = gen_random_instance(5, 8, GammaMode::scaled(1e-3), 9);
  const LassoInstance b = gen_random_instance(5, 8, GammaMode::scaled(1e-3), 9);
  const auto* da = dynamic_cast<const DenseMatrix*>(a.A.get());
  const auto* db = dynamic_cast<const DenseMatrix*>(b.A.get());
  REQUIRE(da);
  CHECK(std::equal(da->row_major().begin(), da->row_major().end(), db->row_major().begin()));
  CHECK(a.b == b.b);
  CHECK(a.gamma == doctest::Approx(1e-3 * norm_inf(apply_adjoint(*a.A, a.b))).epsilon(1e-14));
  CHECK(gen_random_instance(5, 8, GammaMode::absolute(0.25), 9).gamma == 0.25);
  CHECK(LassoRunConfig{}.lambda == 0.01);
}

TEST_CASE("method labels") {
  CHECK(LassoMethod::parse("GIALM-1.1").mu == 1.1);
  CHECK(LassoMethod::parse("GIALM-3").label() == "GIALM-3");
  CHECK(LassoMethod::parse("IALM-2").kind == LassoMethod::Kind::Ialm);
  CHECK(LassoMethod::parse("IALM-1.5").q == 1.5);
  CHECK_THROWS_AS(LassoMethod::parse("IALM-1"), std::invalid_argument);
  CHECK_THROWS_AS(LassoMethod::parse("FOO-2"), std::invalid_argument);
  CHECK_THROWS_AS(LassoMethod::parse("GIALM-x"), std::invalid_argument);
}

TEST_CASE("GIALM and IALM agree near the optimum") {
  const LassoInstance inst = small_instance(11);
  LassoRunConfig cfg;
  cfg.lambda = 0.1;
  cfg.eta_tol = 1e-6;
  const LassoRun g = gialm_lasso_solve(inst, LassoMethod::parse("GIALM-3"), cfg);
  const LassoRun i = gialm_lasso_solve(inst, LassoMethod::parse("IALM-2"), cfg);
  REQUIRE(g.reached(1e-6));
  REQUIRE(i.reached(1e-6));
  CHECK(norm(g.x - i.x) <= 1e-4);
  CHECK(g.history.size() == g.iters);
  CHECK(g.inner_at_eta(1e-6).has_value());
  for (std::size_t k = 1; k < g.history.size(); ++k) CHECK(g.history[k].cum_inner >= g.history[k - 1].cum_inner);

  std::ostringstream hist;
  write_lasso_history_csv(hist, g, TimingMode::Off);
  std::istringstream in(hist.str());
  std::string meta, header;
  std::getline(in, meta);
  std::getline(in, header);
  CHECK(meta.rfind("# metadata: ", 0) == 0);
  CHECK(header == kLassoHistoryHeader);
  const std::string row = run_summary_row(g, inst, cfg.lambda, TimingMode::Off);
  CHECK(std::count(row.begin(), row.end(), ',') == 8);
  CHECK(row.substr(row.size() - 2) == ",0");
  const std::string trow = table_summary_row("1*", g, inst, TimingMode::Off);
  CHECK(trow.rfind("1*,GIALM-3,20,40,", 0) == 0);
}

TEST_CASE("blur operator") {
  SUBCASE("adjoint") {
    const GaussianBlur op(17, 4, 2.0);
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
      const Vector x = rng.normal_vector(289), y = rng.normal_vector(289);
      CHECK(std::abs(dot(apply(op, x), y) - dot(x, apply_adjoint(op, y))) <= 1e-10);
    }
  }
  SUBCASE("constants are preserved") {
    const GaussianBlur op(16, 4, 4.0);
    const Vector c(256, 0.37);
    CHECK(norm_inf(apply(op, c) - c) <= 1e-14);
  }
  SUBCASE("kernel sums to one") {
    const GaussianBlur op(8, 3, 1.5);
    double s = 0.0;
    for (double k : op.kernel()) s += k;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(op.kernel().size() == 7);
  }
  SUBCASE("reflection") {
    CHECK(reflect_index(-1, 5) == 0);
    CHECK(reflect_index(-2, 5) == 1);
    CHECK(reflect_index(5, 5) == 4);
    CHECK(reflect_index(6, 5) == 3);
  }
  SUBCASE("zero radius is the identity") {
    BlurSetup s;
    s.side = 12;
    s.radius = 0;
    const BlurInstance bi = blur_instance(s);
    const Vector x = Rng(1).normal_vector(144);
    CHECK(apply(*bi.lasso.A, x) == x);
    Rng noise(s.seed ^ 0x5deece66dULL);
    Vector expected = bi.truth;
    for (double& v : expected) v += s.noise_sigma * noise.normal();
    CHECK(norm_inf(bi.observed - expected) <= 1e-15);
  }
}

TEST_CASE("blur instance defaults and limits") {
  const BlurSetup s;
  CHECK(s.gamma == 1e-4);
  CHECK(s.lambda == 5.0);
  BlurSetup big;
  big.side = 65;
  CHECK_THROWS_AS(blur_instance(big), std::invalid_argument);
  const Vector img = piecewise_constant_image(32, 7);
  CHECK(*std::min_element(img.begin(), img.end()) >= 0.0);
  CHECK(*std::max_element(img.begin(), img.end()) <= 1.0);
}

TEST_CASE("portable graymap round trip") {
  Vector img(9);
  for (std::size_t i = 0; i < 9; ++i) img[i] = static_cast<double>(i) / 8.0;
  img[0] = -1.0;  // clamped
  std::stringstream ss;
  write_pgm(ss, img, 3);
  std::size_t w = 0, h = 0;
  const std::vector<double> back = read_pgm(ss, w, h);
  CHECK(w == 3);
  CHECK(h == 3);
  REQUIRE(back.size() == 9);
  CHECK(back[0] == 0.0);
  CHECK(back[8] == 1.0);
  CHECK(std::abs(back[4] - 0.5) <= 1.0 / 255.0);
}

TEST_CASE("instance files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "inexact_io_test";
  fs::create_directories(dir);
  const std::string path = (dir / "inst.bin").string();
  const LassoInstance inst = gen_random_instance(6, 9, GammaMode::scaled(1e-3), 5);
  InstanceProvenance prov;
  prov.seed = 5;
  write_instance(path, inst, 0.02, prov);

  const StoredInstance back = read_instance(path);
  CHECK(back.lambda == 0.02);
  CHECK(back.instance.gamma == inst.gamma);
  CHECK(back.instance.b == inst.b);
  CHECK(back.provenance.seed == 5);
  const auto* a = dynamic_cast<const DenseMatrix*>(inst.A.get());
  const auto* b = dynamic_cast<const DenseMatrix*>(back.instance.A.get());
  REQUIRE(b);
  CHECK(std::equal(a->row_major().begin(), a->row_major().end(), b->row_major().begin()));

  std::ifstream sidecar(path + ".json");
  const nlohmann::json j = nlohmann::json::parse(sidecar);
  CHECK(j.at("m") == 6);
  CHECK(j.at("gamma_mode") == "scaled");

  SUBCASE("sidecar is optional") {
    fs::remove(path + ".json");
    CHECK(read_instance(path).instance.n() == 9);
  }
  SUBCASE("bad magic") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.put('X');
    f.close();
    CHECK_THROWS_AS(read_instance(path), InstanceFormatError);
  }
  SUBCASE("truncated") {
    fs::resize_file(path, fs::file_size(path) - 8);
    CHECK_THROWS_AS(read_instance(path), InstanceFormatError);
  }
  SUBCASE("trailing bytes") {
    std::ofstream f(path, std::ios::app | std::ios::binary);
    f.put('\0');
    f.close();
    CHECK_THROWS_AS(read_instance(path), InstanceFormatError);
  }
  SUBCASE("missing file") { CHECK_THROWS(read_instance((dir / "nope.bin").string())); }
  fs::remove_all(dir);
}
