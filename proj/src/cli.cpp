#include "dmnls/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "dmnls/gaussian_oracle.hpp"
#include "dmnls/io_report.hpp"
#include "dmnls/parallel.hpp"
#include "dmnls/threshold.hpp"

namespace dmnls {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument("bad number for " + key + ": '" + v + "'");
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument("bad integer for " + key + ": '" + v + "'");
  return out;
}

TimeWindow parse_window(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("window must be 'a,b'");
  TimeWindow w{parse_double("window", trim(text.substr(0, comma))),
               parse_double("window", trim(text.substr(comma + 1)))};
  if (!(w.a < w.b)) throw std::invalid_argument("window needs a < b");
  return w;
}

// "sigma0=1" style description of a mass-lambda Gaussian; returns sigma0.
double parse_gaussian_spec(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || trim(text.substr(0, eq)) != "sigma0") {
    throw std::invalid_argument("--gaussian expects sigma0=<value>");
  }
  return parse_double("sigma0", trim(text.substr(eq + 1)));
}

ComplexField gaussian_field(const SpectralGrid& grid, double lambda, double sigma0) {
  const GaussianParams gp = GaussianParams::with_mass(lambda, sigma0);
  return sample_function(grid, [&](double x, double y) { return evolved_gaussian(gp, 0.0, x, y); });
}

bool config_sets_threads(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    if (key == "threads") return true;
  }
  return false;
}

unsigned threads_from_env() {
  const char* env = std::getenv("DMNLS_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  const long long v = parse_int("DMNLS_THREADS", env);
  if (v < 0) throw std::invalid_argument("DMNLS_THREADS must be >= 0");
  return static_cast<unsigned>(v);
}

struct Run {
  const CliConfig& cfg;
  std::ostream& out;
  RunRecord record;
  Clock::time_point start = Clock::now();

  Run(const CliConfig& c, std::ostream& o, const std::string& command) : cfg(c), out(o) {
    record.command = command;
    record.dav = c.model.dav;
    record.p = c.model.p;
    record.lambda = c.model.lambda;
    record.grid_n = c.n;
    record.grid_length = c.length;
    record.quadrature_m = c.m;
    record.seed = c.solver.seed;
    record.revision = build_revision();
  }

  SpectralGrid grid() const { return SpectralGrid(cfg.n, cfg.length); }
  QuadratureRule rule() const { return period_rule(cfg.m); }

  fs::path path(const std::string& suffix) const {
    return fs::path(cfg.out) / (record.command + suffix);
  }

  void write_field_artifact(const ComplexField& f) {
    fs::create_directories(cfg.out);
    write_field(f, path(".dmnlsf"));
    out << "field: " << path(".dmnlsf").string() << "\n";
  }

  void finish() {
    record.timings["wall_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
    record.timestamp = utc_timestamp();
    fs::create_directories(cfg.out);
    std::ofstream(path(".json")) << emit_report(record, ReportFormat::Json);
    out << "report: " << path(".json").string() << "\n";
    if (!record.series.empty()) {
      std::ofstream(path(".csv")) << emit_report(record, ReportFormat::CsvSeries);
      out << "series: " << path(".csv").string() << "\n";
    }
  }

  void set_energy(const EnergyBreakdown& e) { record.energy = e; }
};

void print_energy(std::ostream& out, const EnergyBreakdown& e) {
  out << "total " << e.total << "\nkinetic " << e.kinetic << "\npotential " << e.potential
      << "\nmass " << e.mass << "\n";
}

double ascent_constant(const CliConfig& cfg, double q, std::ostream& out) {
  const SpectralGrid grid(std::min(cfg.n, 64), 24.0);
  const ComplexField init = sample_function(grid, [](double x, double y) {
    return Complex{std::exp(-(x * x + y * y))};
  });
  SolverOptions opts = cfg.solver;
  opts.grad_tol = std::max(opts.grad_tol, 1e-8);
  const WeinsteinReport r = maximize_weinstein(q, TimeWindow{0.0, 1.0}, init, opts, cfg.m);
  out << "ascent C(q=" << q << ", [0,1]) >= " << r.ratio << " (" << to_string(r.status) << ", "
      << r.iterations << " iterations)\n";
  return r.ratio;
}

// ---- verify ----------------------------------------------------------------

struct Check {
  std::string name;
  std::function<std::pair<bool, std::string>()> run;
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::vector<Check> verify_checks() {
  using std::numbers::pi;
  std::vector<Check> checks;
  checks.push_back({"propagator matches evolved Gaussian", [] {
    const SpectralGrid g(128, 40.0);
    const GaussianParams gp{1.0, 1.0};
    const ComplexField f = sample_function(g, [&](double x, double y) { return evolved_gaussian(gp, 0.0, x, y); });
    const ComplexField ref = sample_function(g, [&](double x, double y) { return evolved_gaussian(gp, 0.5, x, y); });
    const double err = l2_norm(propagate(f, 0.5) - ref) / l2_norm(ref);
    return std::pair{err < 1e-8, "relative L2 error " + fmt(err)};
  }});
  checks.push_back({"Gaussian norms and potential closed form", [] {
    const SpectralGrid g(128, 40.0);
    const GaussianParams gp{1.0, 1.0};
    const ComplexField f = sample_function(g, [&](double x, double y) { return evolved_gaussian(gp, 0.0, x, y); });
    const FieldNorms n = field_norms(f);
    const double pot = potential_term(f, 3.0, period_rule(32));
    const double want = pi / 16.0 * std::atan(4.0);
    const bool ok = std::abs(n.mass / (pi / 2) - 1) < 1e-8 && std::abs(n.kinetic / pi - 1) < 1e-8 &&
                    std::abs(pot - want) < 1e-6;
    return std::pair{ok, "potential " + fmt(pot)};
  }});
  checks.push_back({"global (4,4) ratio of a Gaussian is 1/4", [] {
    const SpectralGrid g(128, 40.0);
    const ComplexField f = sample_function(g, [](double x, double y) { return Complex{std::exp(-(x * x + y * y))}; });
    const double r = strichartz_ratio(f, 4.0, WindowQuadrature(TimeWindow::global()));
    return std::pair{std::abs(r - 0.25) < 1e-6, "ratio " + fmt(r)};
  }});
  checks.push_back({"gradient matches finite differences", [] {
    const SpectralGrid g(64, 20.0);
    const QuadratureRule rule = period_rule(32);
    const ModelParams mp{1.0, 3.0, 1.0};
    const ComplexField f = sample_function(g, [](double x, double y) {
      return Complex{std::exp(-(x * x + 2 * y * y) / 4)} * std::polar(1.0, 0.2 * x * y);
    });
    const ComplexField d = sample_function(g, [](double x, double y) {
      return Complex{std::exp(-((x - 1) * (x - 1) + y * y) / 3), 0.3};
    });
    const double eps = 1e-5;
    ComplexField plus = f, minus = f;
    plus.add_scaled(eps, d);
    minus.add_scaled(-eps, d);
    const double fd = (hamiltonian(plus, mp, rule).total - hamiltonian(minus, mp, rule).total) / (2 * eps);
    const double an = inner_real(gradient_h(f, mp, rule), d);
    const double rel = std::abs(fd - an) / std::abs(an);
    return std::pair{rel < 1e-5, "relative difference " + fmt(rel)};
  }});
  checks.push_back({"window scaling identity", [] {
    const SpectralGrid g(128, 24.0);
    auto profile = [](double x, double y) {
      return Complex{std::exp(-(x * x + 2.0 * y * y) / 2.0)} * std::polar(1.0, 0.3 * x);
    };
    const ComplexField f = sample_function(g, profile);
    const ComplexField h = propagate(sample_function(g, [&](double x, double y) {
      return profile(std::sqrt(2.0) * x, std::sqrt(2.0) * y);
    }), -0.5);
    const double a = weinstein_ratio(h, 6.0, WindowQuadrature(TimeWindow{0.0, 1.0}, 64));
    const double b = weinstein_ratio(f, 6.0, WindowQuadrature(TimeWindow{-1.0, 1.0}, 64));
    const double rel = std::abs(a - b) / b;
    return std::pair{rel < 1e-6, "relative difference " + fmt(rel)};
  }});
  checks.push_back({"q=3 Gaussian ratio grows along sigma0", [] {
    auto ratio = [](double s0) {
      const GaussianParams gp{s0, 1.0};
      return window_qnorm(gp, 3.0, 0.0, 1.0) / (gaussian_kinetic(gp) * std::sqrt(gaussian_mass(gp)));
    };
    const double growth = ratio(100.0) / ratio(1.0);
    return std::pair{growth > 5.0, "growth factor " + fmt(growth)};
  }});
  checks.push_back({"subcritical ground state (p=2, lambda=4)", [] {
    const SpectralGrid g(64, 40.0);
    const ModelParams mp{1.0, 2.0, 4.0};
    SolverOptions opts;
    opts.grad_tol = 1e-6;
    const MinimizeReport r = minimize_at_mass(mp, default_initial_field(g, 4.0), opts, period_rule(32));
    const double h = r.energy.total;
    const bool ok = r.status == SolveStatus::Converged && h < 0 && r.omega > -2 * h / mp.lambda;
    return std::pair{ok, to_string(r.status) + ", H " + fmt(h) + ", omega " + fmt(r.omega)};
  }});
  return checks;
}

int run_verify(const CliConfig& cfg, std::ostream& out) {
  Run run(cfg, out, "verify");
  int failed = 0;
  for (const Check& c : verify_checks()) {
    auto [ok, detail] = c.run();
    out << (ok ? "PASS " : "FAIL ") << c.name << ": " << detail << "\n";
    run.record.values[c.name] = ok ? 1.0 : 0.0;
    if (!ok) ++failed;
  }
  run.record.status = failed == 0 ? "passed" : "failed";
  run.finish();
  return failed == 0 ? 0 : 2;
}

}  // namespace

void apply_config_entry(CliConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "n") cfg.n = static_cast<int>(parse_int(key, v));
  else if (key == "length") cfg.length = parse_double(key, v);
  else if (key == "m") cfg.m = static_cast<int>(parse_int(key, v));
  else if (key == "dav") cfg.model.dav = parse_double(key, v);
  else if (key == "p") cfg.model.p = parse_double(key, v);
  else if (key == "lambda") cfg.model.lambda = parse_double(key, v);
  else if (key == "max_iters") cfg.solver.max_iters = static_cast<int>(parse_int(key, v));
  else if (key == "step0") cfg.solver.step0 = parse_double(key, v);
  else if (key == "backtrack") cfg.solver.backtrack_factor = parse_double(key, v);
  else if (key == "grad_tol") cfg.solver.grad_tol = parse_double(key, v);
  else if (key == "energy_floor") cfg.solver.energy_floor = parse_double(key, v);
  else if (key == "seed") {
    const long long s = parse_int(key, v);
    if (s < 0) throw std::invalid_argument("seed must be >= 0");
    cfg.solver.seed = static_cast<std::uint64_t>(s);
  } else if (key == "out") cfg.out = v;
  else if (key == "threads") {
    const long long t = parse_int(key, v);
    if (t < 0) throw std::invalid_argument("threads must be >= 0");
    cfg.threads = static_cast<unsigned>(t);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

void apply_config_text(CliConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      apply_config_entry(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational problems of the dispersion-managed NLS in two dimensions"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::pair<std::string, std::string>> flags;
  app.add_option("--config", config_path, "flat key = value config file");
  auto flag = [&](const char* name, const char* key, const char* help) {
    app.add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags.emplace_back(key, v); },
                                         help);
  };
  flag("--n", "n", "grid points per axis (power of two)");
  flag("--length", "length", "side of the periodic box");
  flag("--m", "m", "Gauss-Legendre nodes per unit of r");
  flag("--dav", "dav", "average dispersion");
  flag("--p", "p", "nonlinearity exponent");
  flag("--lambda", "lambda", "mass");
  flag("--max-iters", "max_iters", "solver iteration budget");
  flag("--step0", "step0", "initial step");
  flag("--backtrack", "backtrack", "backtracking factor");
  flag("--grad-tol", "grad_tol", "stationarity tolerance");
  flag("--energy-floor", "energy_floor", "floor for unbounded energy");
  flag("--seed", "seed", "seed for perturbed initial fields");
  flag("--out", "out", "output directory");
  flag("--threads", "threads", "worker threads, 0 = auto (fallback: DMNLS_THREADS)");

  auto* energy = app.add_subcommand("energy", "evaluate H of a field file or a Gaussian");
  std::string field_path, gaussian_spec;
  energy->add_option("--field", field_path, "field file");
  energy->add_option("--gaussian", gaussian_spec, "mass-lambda Gaussian, e.g. sigma0=1");

  auto* minimize = app.add_subcommand("minimize", "ground state at mass lambda");
  std::string init_path;
  std::optional<double> sigma0;
  minimize->add_option("--init", init_path, "initial field file");
  minimize->add_option("--sigma0", sigma0, "width of the initial Gaussian (default lambda)");

  auto* weinstein = app.add_subcommand("weinstein", "best-constant ascent");
  double q = 6.0;
  std::string window_text = "0,1";
  std::string kind_text = "weinstein";
  weinstein->add_option("--q", q, "exponent q");
  weinstein->add_option("--window", window_text, "time window a,b (inf allowed)");
  weinstein->add_option("--kind", kind_text, "weinstein or strichartz");
  weinstein->add_option("--sigma0", sigma0, "width of the initial Gaussian (default 1)");

  auto* threshold = app.add_subcommand("threshold", "bisection for lambda_cr and formula cross-check");
  double lo = 0.0, hi = 0.0, tol = 0.02;
  std::optional<double> cp;
  threshold->add_option("--lo", lo, "lower bracket end")->required();
  threshold->add_option("--hi", hi, "upper bracket end")->required();
  threshold->add_option("--tol", tol, "final bracket width");
  threshold->add_option("--cp", cp, "best-constant estimate (default: ascent)");
  threshold->add_option("--sigma0", sigma0, "width of the initial Gaussians (default lambda)");

  auto* critical = app.add_subcommand("critical-scan", "p=5 blow-down series");
  std::vector<double> betas{0.25, 0.5, 1, 2, 4, 8};
  std::optional<double> lambda_factor;
  std::string profile_path;
  bool surrogate = false;
  critical->add_option("--betas", betas, "beta values")->delimiter(',');
  critical->add_option("--lambda-factor", lambda_factor, "mass as a multiple of the formula lambda_cr");
  critical->add_option("--cp", cp, "C_5 estimate (default: ascent)");
  critical->add_option("--profile", profile_path, "profile field file");
  critical->add_flag("--gaussian-surrogate", surrogate, "use a Gaussian profile");

  auto* super = app.add_subcommand("supercritical-scan", "p>5 Gaussian energies");
  std::vector<double> sigma0s{1, 0.1, 0.01};
  super->add_option("--sigma0s", sigma0s, "Gaussian widths")->delimiter(',');

  auto* oracle = app.add_subcommand("oracle", "analytic Gaussian quantities");
  double oracle_sigma0 = 1.0, oracle_q = 4.0, oracle_a = 0.0, oracle_b = 1.0;
  oracle->add_option("--sigma0", oracle_sigma0, "Gaussian width");
  oracle->add_option("--q", oracle_q, "exponent of the window norm");
  oracle->add_option("--a", oracle_a, "window start");
  oracle->add_option("--b", oracle_b, "window end");

  auto* verify = app.add_subcommand("verify", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  CliConfig cfg;
  try {
    bool threads_set = false;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot read config file '" + config_path + "'");
      std::stringstream text;
      text << in.rdbuf();
      apply_config_text(cfg, text.str());
      threads_set = config_sets_threads(text.str());
    }
    for (const auto& [k, v] : flags) {
      apply_config_entry(cfg, k, v);
      threads_set = threads_set || k == "threads";
    }
    if (!threads_set) cfg.threads = threads_from_env();
    cfg.model.validate();
    cfg.solver.validate();
    SpectralGrid(cfg.n, cfg.length);
    if (cfg.m < 2) throw std::invalid_argument("m must be >= 2");
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  set_thread_count(cfg.threads);
  out << std::setprecision(12);

  try {
    if (*energy) {
      Run run(cfg, out, "energy");
      ComplexField f(run.grid());
      if (!field_path.empty() == !gaussian_spec.empty()) {
        throw std::invalid_argument("energy needs exactly one of --field or --gaussian");
      }
      if (!field_path.empty()) {
        f = read_field(field_path);
        run.record.grid_n = f.grid().n();
        run.record.grid_length = f.grid().length();
      } else {
        const double s0 = parse_gaussian_spec(gaussian_spec);
        f = gaussian_field(run.grid(), cfg.model.lambda, s0);
        run.record.values["sigma0"] = s0;
        run.record.values["oracle_total"] = gaussian_hamiltonian(cfg.model.lambda, s0, cfg.model.p, cfg.model.dav);
      }
      const EnergyBreakdown e = hamiltonian(f, cfg.model, run.rule());
      run.set_energy(e);
      run.record.omega = lagrange_multiplier(f, cfg.model, run.rule());
      run.record.status = "evaluated";
      print_energy(out, e);
      run.finish();
      return 0;
    }
    if (*minimize) {
      Run run(cfg, out, "minimize");
      ComplexField init = !init_path.empty()
                              ? read_field(init_path)
                              : (sigma0 ? gaussian_field(run.grid(), cfg.model.lambda, *sigma0)
                                        : default_initial_field(run.grid(), cfg.model.lambda, cfg.solver.seed));
      const MinimizeReport r = minimize_at_mass(cfg.model, init, cfg.solver, run.rule());
      run.set_energy(r.energy);
      run.record.omega = r.omega;
      run.record.el_residual = r.el_residual;
      run.record.status = to_string(r.status);
      run.record.iterations = r.iterations;
      run.record.values["floor_crossing"] = r.floor_crossing;
      run.record.series_x = "iteration";
      run.record.series_y = "energy";
      for (std::size_t i = 0; i < r.energy_trace.size(); ++i) {
        run.record.series.push_back({static_cast<double>(i), r.energy_trace[i]});
      }
      out << "status " << to_string(r.status) << "\niterations " << r.iterations << "\n";
      print_energy(out, r.energy);
      out << "omega " << r.omega << "\nel_residual " << r.el_residual << "\n";
      run.write_field_artifact(r.final_field);
      run.finish();
      return 0;
    }
    if (*weinstein) {
      Run run(cfg, out, "weinstein");
      const TimeWindow window = parse_window(window_text);
      RatioKind kind;
      if (kind_text == "weinstein") kind = RatioKind::Weinstein;
      else if (kind_text == "strichartz") kind = RatioKind::Strichartz;
      else throw std::invalid_argument("--kind must be weinstein or strichartz");
      const double s0 = sigma0.value_or(1.0);
      const ComplexField init = sample_function(run.grid(), [&](double x, double y) {
        return Complex{std::exp(-(x * x + y * y) / s0)};
      });
      const WeinsteinReport r = maximize_weinstein(q, window, init, cfg.solver, cfg.m, kind);
      run.record.status = to_string(r.status);
      run.record.iterations = r.iterations;
      run.record.values["q"] = q;
      run.record.values["window_a"] = window.a;
      run.record.values["window_b"] = window.b;
      run.record.values["ratio"] = r.ratio;
      run.record.series_x = "iteration";
      run.record.series_y = "ratio";
      for (std::size_t i = 0; i < r.ratio_trace.size(); ++i) {
        run.record.series.push_back({static_cast<double>(i), r.ratio_trace[i]});
      }
      out << "status " << to_string(r.status) << "\niterations " << r.iterations << "\nratio " << r.ratio << "\n";
      run.write_field_artifact(r.final_field);
      run.finish();
      return 0;
    }
    if (*threshold) {
      Run run(cfg, out, "threshold");
      const double p = cfg.model.p;
      const double c = cp ? *cp : ascent_constant(cfg, p + 1.0, out);
      SweepSetup setup{run.grid(), run.rule(), cfg.solver, sigma0.value_or(0.0)};
      const ThresholdReport r = bisect_threshold(p, cfg.model.dav, lo, hi, tol, setup, c);
      run.record.status = "bracketed";
      run.record.values["lambda_lo"] = r.lambda_lo;
      run.record.values["lambda_hi"] = r.lambda_hi;
      run.record.values["lambda_cr_bisect"] = r.lambda_cr_bisect;
      run.record.values["lambda_cr_formula_upper_bound"] = r.lambda_cr_formula;
      run.record.values["cp_estimate_lower_bound"] = r.cp_estimate;
      run.record.series_x = "lambda";
      run.record.series_y = "energy";
      for (const EnergySample& s : r.samples) run.record.series.push_back({s.lambda, s.energy});
      out << "lambda_cr (bisection) " << r.lambda_cr_bisect << " in [" << r.lambda_lo << ", " << r.lambda_hi
          << "]\nlambda_cr (formula, upper bound) " << r.lambda_cr_formula << "\n";
      run.finish();
      return 0;
    }
    if (*critical) {
      Run run(cfg, out, "critical-scan");
      std::optional<ComplexField> profile;
      if (!profile_path.empty()) profile = read_field(profile_path);
      else if (surrogate) profile = gaussian_surrogate_profile(SpectralGrid(std::min(cfg.n, 64), 24.0));
      double lambda = cfg.model.lambda;
      if (lambda_factor) {
        const double c = cp ? *cp : ascent_constant(cfg, 6.0, out);
        lambda = *lambda_factor * lambda_cr_from_constant(5.0, cfg.model.dav, c);
        run.record.values["cp_estimate"] = c;
      }
      run.record.p = 5.0;
      run.record.lambda = lambda;
      run.record.values["gaussian_surrogate"] = surrogate && profile_path.empty() ? 1.0 : 0.0;
      run.record.series = critical_scan(cfg.model.dav, lambda, betas, profile, cfg.m);
      run.record.series_x = "beta";
      run.record.series_y = "energy";
      run.record.status = "evaluated";
      out << "lambda " << lambda << "\n";
      for (const SeriesPoint& pt : run.record.series) out << "beta " << pt.x << " H " << pt.y << "\n";
      run.finish();
      return 0;
    }
    if (*super) {
      Run run(cfg, out, "supercritical-scan");
      run.record.series = supercritical_gaussian_scan(cfg.model.p, cfg.model.lambda, cfg.model.dav, sigma0s);
      run.record.series_x = "sigma0";
      run.record.series_y = "energy";
      run.record.status = "evaluated";
      for (const SeriesPoint& pt : run.record.series) out << "sigma0 " << pt.x << " H " << pt.y << "\n";
      run.finish();
      return 0;
    }
    if (*oracle) {
      Run run(cfg, out, "oracle");
      const GaussianParams bare{oracle_sigma0, 1.0};
      const double wq = window_qnorm(bare, oracle_q, oracle_a, oracle_b);
      const double h = gaussian_hamiltonian(cfg.model.lambda, oracle_sigma0, cfg.model.p, cfg.model.dav);
      out << wq << "\n";
      out << "window_qnorm " << wq << "\nmass " << gaussian_mass(bare) << "\nkinetic " << gaussian_kinetic(bare)
          << "\nhamiltonian_mass_lambda " << h << "\n";
      run.record.values["window_qnorm"] = wq;
      run.record.values["sigma0"] = oracle_sigma0;
      run.record.values["q"] = oracle_q;
      run.record.values["hamiltonian_mass_lambda"] = h;
      run.record.status = "evaluated";
      run.finish();
      return 0;
    }
    if (*verify) return run_verify(cfg, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const FieldFileError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace dmnls
