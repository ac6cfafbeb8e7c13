#include "inexact/rate_lab.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "inexact/igd.hpp"
#include "inexact/oracles.hpp"
#include "inexact/rng.hpp"

namespace inexact {

KlTestFunction make_kl_function(double p, std::size_t dim, double region_radius) {
  if (!(p >= 2.0)) throw std::invalid_argument("make_kl_function: p must be >= 2");
  if (!(region_radius > 0.0)) throw std::invalid_argument("make_kl_function: radius must be positive");
  if (dim == 0) throw std::invalid_argument("make_kl_function: dim must be positive");
  KlTestFunction fn;
  fn.p = p;
  fn.q = 1.0 - 1.0 / p;
  fn.kl_M = std::pow(p, fn.q);
  fn.region_radius = region_radius;
  fn.problem.dim = dim;
  fn.problem.value = [p](const Vector& x) { return std::pow(norm(x), p) / p; };
  fn.problem.grad = [p](const Vector& x) {
    const double r = norm(x);
    if (r == 0.0) return Vector(x.size());
    return std::pow(r, p - 2.0) * x;
  };
  fn.problem.lipschitz_L = (p - 1.0) * std::pow(region_radius, p - 2.0);
  return fn;
}

std::string quantity_name(RateQuantity q) {
  switch (q) {
    case RateQuantity::IterateDist: return "iterate_dist";
    case RateQuantity::FGap: return "f_gap";
    case RateQuantity::GradNorm: return "grad_norm";
  }
  return "?";
}

namespace {

double quantity_at(const IterationTrace& trace, std::size_t idx, RateQuantity q, double f_star) {
  switch (q) {
    case RateQuantity::FGap: return trace.records[idx].f_val - f_star;
    case RateQuantity::GradNorm: return trace.records[idx].grad_norm;
    case RateQuantity::IterateDist:
      if (trace.iterates.size() != trace.records.size()) {
        throw std::invalid_argument("iterate_dist fit needs recorded iterates");
      }
      return norm(trace.iterates[idx]);
  }
  return 0.0;
}

RateFit fit(const IterationTrace& trace, RateQuantity quantity, FitWindow window, double f_star,
            RateFit::Kind kind) {
  if (trace.empty()) throw std::invalid_argument("rate fit: empty trace");
  RateFit out;
  out.kind = kind;
  const std::size_t last = trace.back().k;
  const std::size_t k1 = window.k1 == 0 ? last : std::min(window.k1, last);
  out.k0 = window.k0;
  out.k1 = k1;

  std::vector<double> xs, ys;
  for (std::size_t idx = 0; idx < trace.size(); ++idx) {
    const std::size_t k = trace.records[idx].k;
    if (k < window.k0 || k > k1) continue;
    const double v = quantity_at(trace, idx, quantity, f_star);
    if (!(v > 0.0)) {
      out.k1 = k - 1;
      out.notice = "window truncated at k=" + std::to_string(k) + " (nonpositive value)";
      break;
    }
    xs.push_back(kind == RateFit::Kind::Linear ? static_cast<double>(k) : std::log(static_cast<double>(k)));
    ys.push_back(std::log(v));
  }
  out.points = xs.size();
  if (xs.size() < 2) throw std::invalid_argument("rate fit: fewer than two usable points in window");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  out.slope = sxy / sxx;
  const double ss_res = syy - out.slope * sxy;
  out.residual = syy > 0.0 ? std::max(0.0, ss_res / syy) : 0.0;
  if (kind == RateFit::Kind::Linear) {
    out.estimate = std::exp(out.slope);
    out.non_contractive = out.estimate >= 1.0;
  } else {
    out.estimate = out.slope;
  }
  return out;
}

}  // namespace

RateFit fit_linear_rate(const IterationTrace& trace, FitWindow window, double f_star) {
  return fit(trace, RateQuantity::FGap, window, f_star, RateFit::Kind::Linear);
}

RateFit fit_power_rate(const IterationTrace& trace, RateQuantity quantity, FitWindow window,
                       double f_star) {
  return fit(trace, quantity, window, f_star, RateFit::Kind::Power);
}

double predicted_exponent(double q, RateQuantity quantity) {
  if (!(q > 0.5 && q < 1.0)) throw std::invalid_argument("predicted_exponent: q must lie in (1/2, 1)");
  const double base = (1.0 - q) / (2.0 * q - 1.0);
  return quantity == RateQuantity::FGap ? -2.0 * base : -base;
}

void write_rate_report(std::ostream& out, const std::vector<RateReportRow>& rows) {
  out << kRateReportHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.function_p) << ',' << format_double(r.q) << ',' << r.quantity << ','
        << r.predicted << ',' << format_double(r.fitted) << ',' << format_double(r.residual) << '\n';
  }
}

IterationTrace run_kl_igd(double p, const RateRunConfig& cfg) {
  // Descent keeps ||x^k|| <= ||x^1||, so the region radius is the start norm.
  const KlTestFunction fn = make_kl_function(p, cfg.dim, cfg.start_norm);
  Rng rng(cfg.seed);
  Vector x1 = rng.unit_vector(cfg.dim) * cfg.start_norm;
  NoisyOracle oracle(fn.problem, Rng(cfg.seed + 1));
  IgdConfig igd;
  igd.mu = cfg.mu;
  igd.theta = cfg.theta;
  igd.eps1 = cfg.eps1;
  igd.lipschitz_L = fn.problem.lipschitz_L;
  igd.max_outer = cfg.max_outer;
  igd.record_iterates = true;
  IgdResult res = igd_solve(fn.problem, oracle, x1, igd);
  res.trace.metadata["p"] = format_double(p);
  return std::move(res.trace);
}

std::vector<RateReportRow> rate_rows_for(double p, const IterationTrace& trace,
                                         const RateRunConfig& cfg) {
  const double q = 1.0 - 1.0 / p;
  std::vector<RateReportRow> rows;
  for (RateQuantity quantity : {RateQuantity::IterateDist, RateQuantity::FGap, RateQuantity::GradNorm}) {
    RateReportRow row;
    row.function_p = p;
    row.q = q;
    row.quantity = quantity_name(quantity);
    if (q <= 0.5) {
      const RateFit f = fit(trace, quantity, FitWindow{11, 0}, 0.0, RateFit::Kind::Linear);
      row.predicted = "linear";
      row.fitted = f.estimate;
      row.residual = f.residual;
    } else {
      const RateFit f = fit_power_rate(trace, quantity, cfg.window);
      row.predicted = format_double(predicted_exponent(q, quantity));
      row.fitted = f.estimate;
      row.residual = f.residual;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace inexact
