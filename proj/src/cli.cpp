#include "inexact/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <type_traits>

#include "inexact/blur.hpp"
#include "inexact/igd.hpp"
#include "inexact/instance_io.hpp"
#include "inexact/lasso.hpp"
#include "inexact/oracles.hpp"
#include "inexact/rate_lab.hpp"
#include "inexact/zoo.hpp"

namespace inexact::cli {

namespace fs = std::filesystem;

namespace {

/// Bad option values discovered after parsing; mapped to kExitUsage.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::mutex log_mutex;

void log(const std::string& msg) {
  std::lock_guard<std::mutex> lock(log_mutex);
  std::cerr << msg << '\n';
}

fs::path prepare_out(const CommonSpec& common) {
  fs::path dir(common.resolved_out());
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

bool is_budget(const IgdStatus& s) { return std::holds_alternative<BudgetExhausted>(s); }

GammaMode gamma_mode_from(const std::string& mode, double value) {
  if (mode == "scaled") return GammaMode::scaled(value);
  if (mode == "absolute") return GammaMode::absolute(value);
  throw UsageError("gamma mode must be 'scaled' or 'absolute', got '" + mode + "'");
}

// --- RunSpec text: one key=value per line, readable back through --config ---

std::string to_text(const std::string& v) { return v; }
std::string to_text(double v) { return format_double(v); }
template <class T>
  requires std::is_integral_v<T>
std::string to_text(T v) {
  return std::to_string(v);
}
template <class T>
std::string to_text(const std::optional<T>& v) {
  return v ? to_text(*v) : std::string();
}
template <class T>
std::string to_text(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_text(v[i]);
  return s;
}

class SpecBinder {
 public:
  explicit SpecBinder(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& desc) {
    CLI::Option* opt = app_->add_option("--" + name, var, desc);
    if constexpr (requires { var.push_back(var.front()); }) opt->delimiter(',');
    entries_.emplace_back(name, [&var] { return to_text(var); });
    return opt;
  }

  std::string serialize() const {
    std::string out;
    for (const auto& [name, fn] : entries_) {
      const std::string v = fn();
      if (!v.empty()) out += name + "=" + v + "\n";
    }
    return out;
  }

 private:
  CLI::App* app_;
  std::vector<std::pair<std::string, std::function<std::string()>>> entries_;
};

void write_runspec(const fs::path& dir, const std::string& command, const SpecBinder& binder) {
  std::ofstream out = open_out(dir / (command + "_runspec.txt"));
  out << "# rerun: inexact " << command << " --config <this file>\n" << binder.serialize();
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

/**
 * Expands `--config FILE` into flags. Keys already given on the command line
 * are skipped, so explicit flags win over the file and the file wins over
 * the built-in defaults.
 */
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::optional<std::string> config;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      config = args[++i];
      continue;
    }
    if (a.rfind("--config=", 0) == 0) {
      config = a.substr(9);
      continue;
    }
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
    out.push_back(a);
  }
  if (!config) return out;
  for (const auto& [key, value] : read_config_file(*config)) {
    if (key == "config" || given.count(key)) continue;
    out.push_back("--" + key);
    out.push_back(value);
  }
  return out;
}

// --- igd ---

struct IgdTarget {
  std::string name;
  SmoothProblem problem;
  double hessian_M = 0.0;
  Vector x1;
};

IgdTarget igd_target(const IgdSpec& spec) {
  IgdTarget t;
  if (!spec.instance.empty()) {
    StoredInstance stored = read_instance(spec.instance);
    auto inst = std::make_shared<LassoInstance>(std::move(stored.instance));
    t.name = fs::path(spec.instance).stem().string();
    t.problem.dim = inst->n();
    t.problem.value = [inst](const Vector& x) { return 0.5 * norm_squared(apply(*inst->A, x) - inst->b); };
    t.problem.grad = [inst](const Vector& x) { return apply_adjoint(*inst->A, apply(*inst->A, x) - inst->b); };
    t.problem.lipschitz_L = inst->op_norm * inst->op_norm;
    t.x1 = Vector(inst->n());
    return t;
  }
  ZooFunction fn;
  try {
    fn = zoo_function(spec.fn);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  t.name = fn.name;
  t.problem = fn.problem;
  t.hessian_M = fn.hessian_M;
  t.x1 = zoo_start(fn, spec.seed);
  return t;
}

std::unique_ptr<GradientOracle> make_oracle(const std::string& kind, const IgdTarget& t,
                                            std::uint64_t seed) {
  if (kind == "ffd") return std::make_unique<FfdOracle>(t.problem);
  if (kind == "cfd") return std::make_unique<CfdOracle>(t.problem, t.hessian_M);
  if (kind == "noisy") return std::make_unique<NoisyOracle>(t.problem, Rng(seed + 1));
  if (kind == "exact") return std::make_unique<ExactOracle>(t.problem);
  throw UsageError("oracle must be ffd, cfd, noisy or exact, got '" + kind + "'");
}

// --- lasso grid ---

struct GridCell {
  std::string test_id;
  std::string file_id;
  std::function<StoredInstance()> load;
};

std::vector<GridCell> grid_cells(const GridSpec& spec) {
  std::vector<GridCell> cells;
  if (!spec.instances.empty()) {
    for (std::size_t i = 0; i < spec.instances.size(); ++i) {
      const std::string id = "F" + std::to_string(i + 1);
      cells.push_back({id, id, [path = spec.instances[i], lambda = spec.lambda] {
                         StoredInstance s = read_instance(path);
                         if (lambda) s.lambda = *lambda;
                         return s;
                       }});
    }
    return cells;
  }
  const GammaMode mode = gamma_mode_from(spec.gamma_mode, spec.gamma);
  const bool scaled = mode.kind == GammaMode::Kind::Scaled;
  std::size_t idx = 0;
  for (std::size_t m : spec.m)
    for (std::size_t n : spec.n)
      for (std::uint64_t seed : spec.seeds) {
        const std::string id = "T" + std::to_string(++idx);
        // Starred ids mark the scaled gamma choice.
        cells.push_back({scaled ? id + "*" : id, id, [=, lambda = spec.lambda.value_or(0.01)] {
                           StoredInstance s;
                           s.instance = gen_random_instance(m, n, mode, seed);
                           s.lambda = lambda;
                           s.provenance.seed = seed;
                           return s;
                         }});
      }
  return cells;
}

struct GridJob {
  std::size_t cell = 0;
  LassoMethod method;
  std::string table_row;
  std::string run_row;
  std::string error;
  bool reached = false;
};

}  // namespace

std::string CommonSpec::resolved_out() const {
  if (!out_dir.empty()) return out_dir;
  if (const char* env = std::getenv(kOutEnv); env && *env) return env;
  return "out";
}

int cmd_igd(const IgdSpec& spec, const CommonSpec& common) {
  IgdTarget target = igd_target(spec);
  IgdConfig cfg;
  cfg.eps1 = spec.eps1;
  cfg.theta = spec.theta;
  cfg.mu = spec.mu;
  cfg.i_max = spec.i_max;
  cfg.lipschitz_L = target.problem.lipschitz_L;
  cfg.max_outer = spec.max_iter;
  cfg.eps_tol = spec.eps_tol;
  cfg.grad_tol = spec.grad_tol;
  cfg.time_budget = spec.time_budget;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (const auto& w : cfg.warnings()) log("warning: " + w);
  auto oracle = make_oracle(spec.oracle, target, spec.seed);

  IgdResult res = igd_solve(target.problem, *oracle, target.x1, cfg);
  res.trace.metadata["fn"] = target.name;
  res.trace.metadata["oracle"] = spec.oracle;
  res.trace.metadata["seed"] = std::to_string(spec.seed);
  res.trace.metadata["status"] = describe(res.status);

  const fs::path dir = prepare_out(common);
  const std::string stem = "igd_" + target.name + "_" + spec.oracle + "_s" + std::to_string(spec.seed);
  write_trace_csv((dir / (stem + ".csv")).string(), res.trace, common.timing);
  {
    std::ofstream out = open_out(dir / (stem + "_summary.csv"));
    out << "fn,oracle,mu,eps1,theta,iters,oracle_cost,f_final,status\n";
    const double f_final = target.problem.value(res.x);
    out << target.name << ',' << spec.oracle << ',' << format_double(spec.mu) << ','
        << format_double(spec.eps1) << ',' << format_double(spec.theta) << ',' << res.trace.size()
        << ',' << oracle->cost() << ',' << format_double(f_final) << ',' << describe(res.status) << '\n';
  }
  log("igd " + target.name + ": " + describe(res.status) + " after " + std::to_string(res.trace.size()) +
      " iterations");

  if (std::holds_alternative<OracleFailed>(res.status)) return kExitError;
  return is_budget(res.status) ? kExitBudget : kExitOk;
}


int cmd_lasso_grid(const GridSpec& spec, const CommonSpec& common) {
  if (spec.instances.empty()) {
    const auto zero = [](std::size_t v) { return v == 0; };
    if (std::any_of(spec.m.begin(), spec.m.end(), zero) || std::any_of(spec.n.begin(), spec.n.end(), zero)) {
      throw UsageError("lasso-grid: empty grid (zero dimension)");
    }
  }
  const std::vector<GridCell> cells = grid_cells(spec);
  if (cells.empty() || spec.methods.empty()) throw UsageError("lasso-grid: empty grid");
  std::vector<LassoMethod> methods;
  for (const auto& label : spec.methods) {
    try {
      methods.push_back(LassoMethod::parse(label));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (spec.jobs == 0) throw UsageError("lasso-grid: --jobs must be positive");
  const fs::path dir = prepare_out(common);

  std::vector<GridJob> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (const auto& m : methods) jobs.push_back({c, m, {}, {}, {}, false});

  auto run_job = [&](GridJob& job) {
    const GridCell& cell = cells[job.cell];
    const std::string label = job.method.label();
    try {
      const StoredInstance stored = cell.load();
      LassoRunConfig cfg;
      cfg.lambda = stored.lambda;
      cfg.eta_tol = spec.eta_tol;
      cfg.max_outer = spec.max_iter;
      cfg.time_budget = spec.time_budget;
      const LassoRun run = gialm_lasso_solve(stored.instance, job.method, cfg);
      job.table_row = table_summary_row(cell.test_id, run, stored.instance, common.timing);
      job.run_row = run_summary_row(run, stored.instance, stored.lambda, common.timing);
      job.reached = run.reached(spec.eta_tol);
      const std::string stem = "lasso_" + cell.file_id + "_" + label;
      std::ofstream hist = open_out(dir / (stem + "_history.csv"));
      write_lasso_history_csv(hist, run, common.timing);
      write_trace_csv((dir / (stem + "_trace.csv")).string(), run.trace, common.timing);
      log(cell.test_id + " " + label + ": " + describe(run.status) + ", " + std::to_string(run.iters) +
          " iterations, eta " + format_double(run.eta_final));
    } catch (const std::exception& e) {
      job.error = e.what();
      log(cell.test_id + " " + label + " failed: " + job.error);
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(jobs[i]);
  };
  const std::size_t nthreads = std::min<std::size_t>(spec.jobs, jobs.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::ofstream table = open_out(dir / "lasso_table.csv");
  std::ofstream runs = open_out(dir / "lasso_runs.csv");
  std::ofstream failures = open_out(dir / "lasso_failures.csv");
  table << kTableSummaryHeader << '\n';
  runs << kRunSummaryHeader << '\n';
  failures << "test_id,method,error\n";
  bool any_error = false, any_budget = false;
  for (const auto& job : jobs) {
    if (!job.error.empty()) {
      any_error = true;
      std::string msg = job.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      failures << cells[job.cell].test_id << ',' << job.method.label() << ',' << msg << '\n';
      continue;
    }
    table << job.table_row << '\n';
    runs << job.run_row << '\n';
    any_budget = any_budget || !job.reached;
  }
  if (any_error) return kExitError;
  return any_budget ? kExitBudget : kExitOk;
}

int cmd_rates(const RatesSpec& spec, const CommonSpec& common) {
  if (spec.p.empty()) throw UsageError("rates: no exponents given");
  for (double p : spec.p) {
    if (!(p >= 2.0)) throw UsageError("rates: p must be >= 2, got " + format_double(p));
  }
  if (spec.window_k1 != 0 && spec.window_k1 <= spec.window_k0) {
    throw UsageError("rates: window-k1 must exceed window-k0");
  }
  RateRunConfig cfg;
  cfg.mu = spec.mu;
  cfg.theta = spec.theta;
  cfg.max_outer = spec.max_iter;
  cfg.seed = spec.seed;
  cfg.dim = spec.dim;
  cfg.window = {spec.window_k0, spec.window_k1};
  IgdConfig check = IgdConfig::preset_mu(cfg.mu);
  check.theta = cfg.theta;
  try {
    check.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const fs::path dir = prepare_out(common);
  std::vector<RateReportRow> rows;
  for (double p : spec.p) {
    const IterationTrace trace = run_kl_igd(p, cfg);
    write_trace_csv((dir / ("rates_p" + format_double(p) + ".csv")).string(), trace, common.timing);
    for (auto& row : rate_rows_for(p, trace, cfg)) rows.push_back(std::move(row));
    log("rates p=" + format_double(p) + ": " + std::to_string(trace.size()) + " iterations");
  }
  std::ofstream out = open_out(dir / "rate_report.csv");
  write_rate_report(out, rows);
  return kExitOk;
}

int cmd_deblur(const DeblurSpec& spec, const CommonSpec& common) {
  if (spec.side > kMaxBlurSide) {
    throw UsageError("deblur: side " + std::to_string(spec.side) + " exceeds the desk-scale limit of " +
                     std::to_string(kMaxBlurSide));
  }
  if (spec.methods.empty()) throw UsageError("deblur: no methods given");
  std::vector<LassoMethod> methods;
  for (const auto& label : spec.methods) {
    try {
      methods.push_back(LassoMethod::parse(label));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  BlurSetup setup;
  setup.side = spec.side;
  setup.radius = spec.radius;
  setup.sigma = spec.sigma;
  setup.noise_sigma = spec.noise;
  setup.gamma = spec.gamma;
  setup.lambda = spec.lambda;
  setup.seed = spec.seed;
  BlurInstance blur;
  try {
    blur = blur_instance(setup);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const fs::path dir = prepare_out(common);
  {
    std::ofstream truth = open_out(dir / "deblur_truth.pgm");
    write_pgm(truth, blur.truth, spec.side);
    std::ofstream observed = open_out(dir / "deblur_observed.pgm");
    write_pgm(observed, blur.observed, spec.side);
  }
  std::ofstream objective = open_out(dir / "deblur_objective.csv");
  std::ofstream inner = open_out(dir / "deblur_inner.csv");
  objective << "method,k,time_s,primal_obj\n";
  inner << "method,k,cum_inner\n";

  bool timed_out = false;
  for (const auto& method : methods) {
    LassoRunConfig cfg;
    cfg.lambda = spec.lambda;
    cfg.eta_tol = 0.0;  // fixed iteration count
    cfg.max_outer = spec.max_iter;
    cfg.time_budget = spec.time_budget;
    cfg.x1 = blur.observed;
    const LassoRun run = gialm_lasso_solve(blur.lasso, method, cfg);
    const std::string label = method.label();
    for (const auto& row : run.history) {
      objective << label << ',' << row.k << ','
                << format_double(common.timing == TimingMode::Wall ? row.elapsed : 0.0) << ','
                << format_double(row.primal_obj) << '\n';
      inner << label << ',' << row.k << ',' << row.cum_inner << '\n';
    }
    std::ofstream hist = open_out(dir / ("deblur_" + label + "_history.csv"));
    write_lasso_history_csv(hist, run, common.timing);
    write_trace_csv((dir / ("deblur_" + label + "_trace.csv")).string(), run.trace, common.timing);
    std::ofstream img = open_out(dir / ("deblur_" + label + ".pgm"));
    write_pgm(img, run.x, spec.side);
    if (const auto* b = std::get_if<BudgetExhausted>(&run.status)) {
      timed_out = timed_out || b->kind == BudgetExhausted::Kind::Time;
    }
    if (const auto* f = std::get_if<OracleFailed>(&run.status)) {
      throw std::runtime_error("deblur " + label + ": " + f->message);
    }
    log("deblur " + label + ": " + std::to_string(run.iters) + " iterations, " +
        std::to_string(run.total_inner) + " inner, objective " +
        format_double(run.history.empty() ? 0.0 : run.history.back().primal_obj));
  }
  return timed_out ? kExitBudget : kExitOk;
}

int cmd_gen_instance(const GenSpec& spec) {
  if (spec.path.empty()) throw UsageError("gen-instance: --path is required");
  if (spec.m == 0 || spec.n == 0) throw UsageError("gen-instance: m and n must be positive");
  const GammaMode mode = gamma_mode_from(spec.gamma_mode, spec.gamma);
  const LassoInstance inst = gen_random_instance(spec.m, spec.n, mode, spec.seed);
  InstanceProvenance prov;
  prov.seed = spec.seed;
  prov.gamma_mode = spec.gamma_mode;
  prov.gamma_value = spec.gamma;
  if (const auto parent = fs::path(spec.path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  write_instance(spec.path, inst, spec.lambda, prov);
  log("wrote " + spec.path + " (m=" + std::to_string(spec.m) + ", n=" + std::to_string(spec.n) +
      ", gamma=" + format_double(inst.gamma) + ")");
  return kExitOk;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  CLI::App app{"Inexact gradient methods: IGD, GIPPM, GIALM and the Lasso benchmarks"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  CommonSpec common;
  std::string timing = "wall";
  IgdSpec igd;
  GridSpec grid;
  RatesSpec rates;
  DeblurSpec deblur;
  GenSpec gen;

  auto with_common = [&](CLI::App* sub, SpecBinder& b) {
    b.add("out", common.out_dir, std::string("Output directory (default $") + kOutEnv + " or ./out)");
    b.add("timing", timing, "Elapsed-time columns: wall, or off for byte-reproducible files")
        ->check(CLI::IsMember({"wall", "off"}));
    sub->add_option("--config", "key=value file; explicit flags take precedence");
  };

  CLI::App* s_igd = app.add_subcommand("igd", "Inexact gradient descent on a test function or instance");
  SpecBinder b_igd(s_igd);
  b_igd.add("fn", igd.fn, "Test function name");
  b_igd.add("instance", igd.instance, "Instance file; runs IGD on 0.5||Ax-b||^2");
  b_igd.add("oracle", igd.oracle, "ffd, cfd, noisy or exact");
  b_igd.add("mu", igd.mu, "Acceptance factor");
  b_igd.add("eps1", igd.eps1, "Initial error level");
  b_igd.add("theta", igd.theta, "Error shrink factor in (0,1)");
  b_igd.add("i-max", igd.i_max, "Inner search levels");
  b_igd.add("max-iter", igd.max_iter, "Outer iteration cap");
  b_igd.add("eps-tol", igd.eps_tol, "Stop once eps_k falls below this");
  b_igd.add("grad-tol", igd.grad_tol, "Stop once ||g^k|| falls below this");
  b_igd.add("time-budget", igd.time_budget, "Seconds, 0 for none");
  b_igd.add("seed", igd.seed, "Start point and noise seed");
  with_common(s_igd, b_igd);

  CLI::App* s_grid = app.add_subcommand("lasso-grid", "Random Lasso grid with a summary table");
  SpecBinder b_grid(s_grid);
  b_grid.add("m", grid.m, "Row counts");
  b_grid.add("n", grid.n, "Column counts");
  b_grid.add("seeds", grid.seeds, "Instance seeds");
  b_grid.add("methods", grid.methods, "GIALM-<mu> or IALM-<q> labels");
  b_grid.add("instance", grid.instances, "Instance files, replacing the generated grid");
  b_grid.add("gamma-mode", grid.gamma_mode, "scaled (gamma * ||A^T b||_inf) or absolute");
  b_grid.add("gamma", grid.gamma, "Gamma value or factor");
  b_grid.add("lambda", grid.lambda, "Proximal parameter (default 0.01)");
  b_grid.add("eta-tol", grid.eta_tol, "Residual target");
  b_grid.add("max-iter", grid.max_iter, "Outer iteration cap per cell");
  b_grid.add("time-budget", grid.time_budget, "Seconds per cell, 0 for none");
  b_grid.add("jobs", grid.jobs, "Worker threads");
  with_common(s_grid, b_grid);

  CLI::App* s_rates = app.add_subcommand("rates", "Fitted rates of IGD on ||x||^p / p");
  SpecBinder b_rates(s_rates);
  b_rates.add("p", rates.p, "Exponents, each >= 2");
  b_rates.add("dim", rates.dim, "Dimension");
  b_rates.add("mu", rates.mu, "Acceptance factor");
  b_rates.add("theta", rates.theta, "Error shrink factor");
  b_rates.add("max-iter", rates.max_iter, "Outer iterations");
  b_rates.add("window-k0", rates.window_k0, "First fitted iteration");
  b_rates.add("window-k1", rates.window_k1, "Last fitted iteration (0: end)");
  b_rates.add("seed", rates.seed, "Start point and noise seed");
  with_common(s_rates, b_rates);

  CLI::App* s_deblur = app.add_subcommand("deblur", "Synthetic deblurring with GIALM and IALM");
  SpecBinder b_deblur(s_deblur);
  b_deblur.add("side", deblur.side, "Image side, at most 64");
  b_deblur.add("radius", deblur.radius, "Kernel radius");
  b_deblur.add("sigma", deblur.sigma, "Kernel width");
  b_deblur.add("noise", deblur.noise, "Noise standard deviation");
  b_deblur.add("gamma", deblur.gamma, "l1 weight");
  b_deblur.add("lambda", deblur.lambda, "Proximal parameter");
  b_deblur.add("methods", deblur.methods, "GIALM-<mu> or IALM-<q> labels");
  b_deblur.add("max-iter", deblur.max_iter, "Outer iterations per method");
  b_deblur.add("time-budget", deblur.time_budget, "Seconds per method, 0 for none");
  b_deblur.add("seed", deblur.seed, "Image and noise seed");
  with_common(s_deblur, b_deblur);

  CLI::App* s_gen = app.add_subcommand("gen-instance", "Write a random Lasso instance file");
  SpecBinder b_gen(s_gen);
  b_gen.add("m", gen.m, "Rows");
  b_gen.add("n", gen.n, "Columns");
  b_gen.add("seed", gen.seed, "Seed");
  b_gen.add("gamma-mode", gen.gamma_mode, "scaled or absolute");
  b_gen.add("gamma", gen.gamma, "Gamma value or factor");
  b_gen.add("lambda", gen.lambda, "Stored proximal parameter");
  b_gen.add("path", gen.path, "Output file")->required();
  s_gen->add_option("--config", "key=value file; explicit flags take precedence");

  try {
    std::vector<std::string> expanded = expand_config(args);
    std::reverse(expanded.begin(), expanded.end());
    app.parse(expanded);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    log(std::string("usage error: ") + e.what());
    return kExitUsage;
  }
  common.timing = timing == "off" ? TimingMode::Off : TimingMode::Wall;

  try {
    if (s_gen->parsed()) return cmd_gen_instance(gen);
    std::pair<CLI::App*, SpecBinder*> active{nullptr, nullptr};
    for (auto [sub, binder] : {std::pair{s_igd, &b_igd}, std::pair{s_grid, &b_grid},
                               std::pair{s_rates, &b_rates}, std::pair{s_deblur, &b_deblur}}) {
      if (sub->parsed()) active = {sub, binder};
    }
    write_runspec(prepare_out(common), active.first->get_name(), *active.second);
    if (s_igd->parsed()) return cmd_igd(igd, common);
    if (s_grid->parsed()) return cmd_lasso_grid(grid, common);
    if (s_rates->parsed()) return cmd_rates(rates, common);
    return cmd_deblur(deblur, common);
  } catch (const UsageError& e) {
    log(std::string("usage error: ") + e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return kExitError;
  }
}

}  // namespace inexact::cli
