#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "inexact/problem.hpp"
#include "inexact/trace.hpp"

namespace inexact {

/// f(x) = ||x||^p / p with KL exponent q = 1 - 1/p and ||grad f|| = M f^q, M = p^q.
struct KlTestFunction {
  double p = 2.0;
  double q = 0.5;
  double kl_M = 0.0;
  double region_radius = 1.0;
  SmoothProblem problem;  // lipschitz_L = (p-1) R^{p-2}, valid on the ball of radius R
};

/// Throws std::invalid_argument for p < 2 or a nonpositive radius.
KlTestFunction make_kl_function(double p, std::size_t dim, double region_radius);

struct FitWindow {
  std::size_t k0 = 11;  // first iterations are transient
  std::size_t k1 = 0;   // 0 = through the end of the trace
};

struct RateFit {
  enum class Kind { Linear, Power };
  Kind kind = Kind::Linear;
  double estimate = 0.0;  // rho for Linear, slope s for Power
  double slope = 0.0;     // raw least-squares slope
  std::size_t k0 = 0;
  std::size_t k1 = 0;
  std::size_t points = 0;
  double residual = 0.0;  // 1 - R^2 of the log-space fit
  bool non_contractive = false;
  std::string notice;     // window truncation etc.
};

enum class RateQuantity { IterateDist, FGap, GradNorm };

std::string quantity_name(RateQuantity q);

/**
 * Least-squares slope of log(f_k - f_star) against k over the window;
 * rho = exp(slope). A nonpositive gap truncates the window just before it.
 * Throws std::invalid_argument when fewer than two usable points remain.
 */
RateFit fit_linear_rate(const IterationTrace& trace, FitWindow window, double f_star = 0.0);

/**
 * Slope of log(quantity) against log(k). IterateDist uses trace.iterates and
 * distance to the origin (the zoo minimizer); GradNorm uses the recorded
 * ||g^k||.
 */
RateFit fit_power_rate(const IterationTrace& trace, RateQuantity quantity, FitWindow window,
                       double f_star = 0.0);

/// Predicted exponent for q in (1/2, 1): IterateDist and GradNorm -(1-q)/(2q-1), FGap -(2-2q)/(2q-1).
double predicted_exponent(double q, RateQuantity quantity);

struct RateReportRow {
  double function_p = 0.0;
  double q = 0.0;
  std::string quantity;
  std::string predicted;  // exponent, or "linear"
  double fitted = 0.0;    // slope, or rho for linear rows
  double residual = 0.0;
};

inline constexpr const char* kRateReportHeader =
    "function_p,q,quantity,predicted_exp,fitted_exp,residual";

void write_rate_report(std::ostream& out, const std::vector<RateReportRow>& rows);

struct RateRunConfig {
  double mu = 3.0;
  double theta = 0.8;
  double eps1 = 1.0;
  std::size_t max_outer = 10'000;
  std::uint64_t seed = 1;
  std::size_t dim = 3;
  double start_norm = 1.0;
  FitWindow window{100, 10'000};
};

/// IGD with the noisy oracle on make_kl_function(p, ...), iterates recorded.
IterationTrace run_kl_igd(double p, const RateRunConfig& cfg);

/// Fits all three quantities (linear f-gap fit for p = 2) and returns report rows.
std::vector<RateReportRow> rate_rows_for(double p, const IterationTrace& trace, const RateRunConfig& cfg);

}  // namespace inexact
