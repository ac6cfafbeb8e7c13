#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "inexact/linalg.hpp"
#include "inexact/rng.hpp"
#include "inexact/trace.hpp"

using namespace inexact;

namespace {

// Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
double jacobi_max_eigenvalue(std::vector<double> a, std::size_t n) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
  }
  double best = a[0];
  for (std::size_t i = 1; i < n; ++i) best = std::max(best, a[i * n + i]);
  return best;
}

}  // namespace

TEST_CASE("matvec examples") {
  CHECK(matvec(DenseMatrix::identity(2), Vector{3, 4}) == Vector{3, 4});
  CHECK(matvec(DenseMatrix(3, 2), Vector{5, -1}) == Vector(3));
  CHECK(matvec(DenseMatrix{{1, 2}, {3, 4}}, Vector{1, 1}) == Vector{3, 7});
  CHECK(apply_adjoint(DenseMatrix{{1, 2}, {3, 4}}, Vector{1, 1}) == Vector{4, 6});
}

TEST_CASE("blocked products match the naive loop bit for bit") {
  Rng rng(5);
  const std::size_t m = 13, n = 11;
  std::vector<double> a(m * n);
  for (double& v : a) v = rng.normal();
  const DenseMatrix A(m, n, a);
  const Vector x = rng.normal_vector(n), y = rng.normal_vector(m);
  const Vector ax = matvec(A, x), aty = apply_adjoint(A, y);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[j];
    CHECK(ax[i] == s);
  }
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += a[i * n + j] * y[i];
    CHECK(aty[j] == s);
  }
}

TEST_CASE("dimension and finiteness checks") {
  CHECK_THROWS_AS(matvec(DenseMatrix(2, 2), Vector{1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(Vector({1.0, std::numeric_limits<double>::quiet_NaN()}), NonFiniteError);
  Vector big{1e308};
  CHECK_THROWS_AS(big * 10.0, NonFiniteError);
}

TEST_CASE("operator_norm") {
  CHECK(operator_norm(DenseMatrix::diagonal(Vector{3, 1})) == doctest::Approx(3.0 * 1.01).epsilon(1e-9));
  CHECK(operator_norm(DenseMatrix(4, 3)) == 0.0);

  Rng rng(10);
  const std::size_t m = 10, n = 20;
  std::vector<double> a(m * n);
  for (double& v : a) v = rng.normal();
  const DenseMatrix A(m, n, a);
  std::vector<double> ata(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k) ata[i * n + j] += a[k * n + i] * a[k * n + j];
  const double sigma = std::sqrt(jacobi_max_eigenvalue(ata, n));
  const double est = operator_norm(A) / 1.01;
  CHECK(std::abs(est - sigma) <= 0.01 * sigma);
}

TEST_CASE("record_iteration ordering") {
  IterationTrace t;
  record_iteration(t, {1, 0, 0, 0, 0, 0, 0});
  CHECK(t.size() == 1);
  record_iteration(t, {2, 0, 0, 0, 0, 0, 0});
  CHECK(t.size() == 2);
  CHECK_THROWS_AS(record_iteration(t, {5, 0, 0, 0, 0, 0, 0}), TraceOrderError);
  IterationTrace empty;
  CHECK_THROWS_AS(record_iteration(empty, {2, 0, 0, 0, 0, 0, 0}), TraceOrderError);
}

TEST_CASE("trace CSV schema and round trip") {
  IterationTrace t;
  t.method = "IGD";
  t.metadata["seed"] = "3";
  record_iteration(t, {1, 0.5, 0.25, 1.0, 0, 4, 0.125});
  record_iteration(t, {2, 0.1, 1e-300, 0.8, 2, 12, 0.5});
  std::stringstream ss;
  write_trace_csv(ss, t);
  std::string first, header;
  std::getline(ss, first);
  std::getline(ss, header);
  CHECK(first.rfind("# metadata: ", 0) == 0);
  CHECK(first.find("seed=3") != std::string::npos);
  CHECK(header == kTraceCsvHeader);

  ss.clear();
  ss.seekg(0);
  const IterationTrace back = read_trace_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back.method == "IGD");
  CHECK(back.records[1].grad_norm == 1e-300);
  CHECK(back.records[1].i_k == 2);
  CHECK(back.records[0].elapsed == 0.125);

  std::stringstream off;
  write_trace_csv(off, t, TimingMode::Off);
  CHECK(off.str().find(",0.125") == std::string::npos);

  std::stringstream bad("# metadata: method=x\nk,f_val\n1,2\n");
  CHECK_THROWS_AS(read_trace_csv(bad), std::runtime_error);
  std::stringstream empty_in;
  CHECK_THROWS_AS(read_trace_csv(empty_in), std::runtime_error);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("rng determinism and moments") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  Rng r(1);
  const int N = 1'000'000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double v = r.normal();
    s += v;
    s2 += v * v;
  }
  const double mean = s / N, sd = std::sqrt(s2 / N - mean * mean);
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(sd - 1.0) < 0.01);
}
