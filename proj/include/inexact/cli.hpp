#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "inexact/trace.hpp"

namespace inexact::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitUsage = 64;

/// Environment variable naming the default output root.
inline constexpr const char* kOutEnv = "INEXACT_OUT";

struct CommonSpec {
  std::string out_dir;  // empty: $INEXACT_OUT, else ./out
  TimingMode timing = TimingMode::Wall;
  std::string resolved_out() const;
};

struct IgdSpec {
  std::string fn = "quad";
  std::string instance;  // Lasso instance file: IGD on 0.5||Ax - b||^2
  std::string oracle = "cfd";  // ffd | cfd | noisy | exact
  double mu = 3.0;
  double eps1 = 1.0;
  double theta = 0.8;
  int i_max = 60;
  std::size_t max_iter = 100'000;
  double eps_tol = 1e-6;
  double grad_tol = 0.0;
  double time_budget = 0.0;
  std::uint64_t seed = 1;
};

struct GridSpec {
  std::vector<std::size_t> m{100, 200};
  std::vector<std::size_t> n{200, 400};
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::string> methods{"GIALM-1.1", "IALM-2"};
  std::vector<std::string> instances;  // replaces the generated grid when given
  std::string gamma_mode = "scaled";
  double gamma = 1e-3;
  std::optional<double> lambda;  // unset: 0.01, or the value stored with an instance file
  double eta_tol = 1e-6;
  std::size_t max_iter = 200'000;
  double time_budget = 4000.0;
  unsigned jobs = 1;
};

struct RatesSpec {
  std::vector<double> p{2.0, 4.0};
  std::size_t dim = 3;
  double mu = 3.0;
  double theta = 0.8;
  std::size_t max_iter = 10'000;
  std::size_t window_k0 = 100;
  std::size_t window_k1 = 10'000;
  std::uint64_t seed = 1;
};

struct DeblurSpec {
  std::size_t side = 32;
  int radius = 4;
  double sigma = 4.0;
  double noise = 1e-3;
  double gamma = 1e-4;
  double lambda = 5.0;
  std::vector<std::string> methods{"GIALM-1.1", "IALM-2"};
  std::size_t max_iter = 500;
  double time_budget = 0.0;
  std::uint64_t seed = 7;
};

struct GenSpec {
  std::size_t m = 100;
  std::size_t n = 200;
  std::uint64_t seed = 1;
  std::string gamma_mode = "scaled";
  double gamma = 1e-3;
  double lambda = 0.01;
  std::string path;
};

int cmd_igd(const IgdSpec& spec, const CommonSpec& common);
int cmd_lasso_grid(const GridSpec& spec, const CommonSpec& common);
int cmd_rates(const RatesSpec& spec, const CommonSpec& common);
int cmd_deblur(const DeblurSpec& spec, const CommonSpec& common);
int cmd_gen_instance(const GenSpec& spec);

/// Parses argv (subcommands igd, lasso-grid, rates, deblur, gen-instance) and dispatches.
int run(int argc, const char* const* argv);

}  // namespace inexact::cli
