#include <doctest.h>

#include <cmath>
#include <sstream>

#include "inexact/rate_lab.hpp"
#include "inexact/rng.hpp"

using namespace inexact;

namespace {

IterationTrace synthetic(std::size_t n, double (*value)(std::size_t)) {
  IterationTrace t;
  for (std::size_t k = 1; k <= n; ++k) {
    record_iteration(t, {k, value(k), value(k), 0.0, 0, 0, 0.0});
    t.iterates.push_back(Vector{value(k)});
  }
  return t;
}

}  // namespace

TEST_CASE("KL test functions") {
  const KlTestFunction f2 = make_kl_function(2.0, 3, 5.0);
  CHECK(f2.q == 0.5);
  CHECK(f2.problem.lipschitz_L == 1.0);
  CHECK(f2.kl_M == doctest::Approx(std::sqrt(2.0)));
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const Vector x = rng.normal_vector(3);
    const double f = f2.problem.value(x);
    CHECK(norm(f2.problem.grad(x)) == doctest::Approx(f2.kl_M * std::pow(f, f2.q)).epsilon(1e-12));
  }
  const KlTestFunction f4 = make_kl_function(4.0, 3, 1.0);
  CHECK(f4.q == 0.75);
  CHECK(predicted_exponent(f4.q, RateQuantity::IterateDist) == doctest::Approx(-0.5));
  CHECK(predicted_exponent(f4.q, RateQuantity::GradNorm) == doctest::Approx(-0.5));
  CHECK(predicted_exponent(f4.q, RateQuantity::FGap) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(predicted_exponent(0.5, RateQuantity::FGap), std::invalid_argument);
  CHECK_THROWS_AS(make_kl_function(1.5, 3, 1.0), std::invalid_argument);
}

TEST_CASE("fits on constructed traces") {
  const IterationTrace geo = synthetic(60, [](std::size_t k) { return std::pow(0.5, static_cast<double>(k)); });
  const RateFit lin = fit_linear_rate(geo, FitWindow{11, 0});
  CHECK(lin.estimate == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lin.residual <= 1e-12);
  CHECK_FALSE(lin.non_contractive);

  const IterationTrace flat = synthetic(30, [](std::size_t) { return 2.0; });
  const RateFit c = fit_linear_rate(flat, FitWindow{11, 0});
  CHECK(c.estimate == doctest::Approx(1.0));
  CHECK(c.non_contractive);

  const IterationTrace power = synthetic(1000, [](std::size_t k) { return 1.0 / std::sqrt(static_cast<double>(k)); });
  const RateFit p = fit_power_rate(power, RateQuantity::GradNorm, FitWindow{100, 1000});
  CHECK(p.estimate == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(p.points == 901);
  CHECK(fit_power_rate(power, RateQuantity::IterateDist, FitWindow{100, 0}).estimate ==
        doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("fit windows") {
  IterationTrace t = synthetic(50, [](std::size_t k) { return k < 30 ? std::pow(0.9, static_cast<double>(k)) : 0.0; });
  const RateFit f = fit_linear_rate(t, FitWindow{11, 0});
  CHECK(f.k1 == 29);
  CHECK_FALSE(f.notice.empty());
  CHECK_THROWS_AS(fit_linear_rate(t, FitWindow{45, 0}), std::invalid_argument);
  IterationTrace no_iterates = synthetic(20, [](std::size_t) { return 1.0; });
  no_iterates.iterates.clear();
  CHECK_THROWS_AS(fit_power_rate(no_iterates, RateQuantity::IterateDist, FitWindow{2, 0}),
                  std::invalid_argument);
}

TEST_CASE("IGD contracts linearly on the quadratic") {
  RateRunConfig cfg;
  const IterationTrace t = run_kl_igd(2.0, cfg);
  const RateFit f = fit_linear_rate(t, FitWindow{11, 0});
  CHECK(f.estimate <= 0.99);
  CHECK(f.residual <= 0.05);
}

TEST_CASE("IGD iterate decay on the quartic") {
  RateRunConfig cfg;
  const IterationTrace t = run_kl_igd(4.0, cfg);
  CHECK(t.size() == cfg.max_outer);
  const RateFit f = fit_power_rate(t, RateQuantity::IterateDist, cfg.window);
  CHECK(std::abs(f.estimate + 0.5) <= 0.1);

  const std::vector<RateReportRow> rows = rate_rows_for(4.0, t, cfg);
  REQUIRE(rows.size() == 3);
  std::ostringstream os;
  write_rate_report(os, rows);
  std::istringstream in(os.str());
  std::string header, line;
  std::getline(in, header);
  CHECK(header == kRateReportHeader);
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    CHECK(line.rfind("4,0.75,", 0) == 0);
  }
  CHECK(n == 3);
}
