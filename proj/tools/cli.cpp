#include "cli.hpp"

#include <parcorr/csv.hpp>
#include <parcorr/engine.hpp>
#include <parcorr/error.hpp>
#include <parcorr/manifest.hpp>
#include <parcorr/report_io.hpp>
#include <parcorr/simulate.hpp>
#include <parcorr/version.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>

namespace parcorr::cli {

namespace {

struct TestOptions {
  std::string manifest;
  std::string rho = "pearson";
  double ridge_lambda = 1.0;
  bool no_intercept = false;
  bool standardize = false;
  bool invalid_variant = false;
  bool degenerate_rho_zero = false;
  std::string sided = "two";
  double alpha = 0.05;
  unsigned threads = 0;
  std::string out;
  std::string plot_dir;
};

struct SimulateOptions {
  std::string scenario;
  std::size_t n = 10;
  std::size_t t_len = 100;
  std::size_t pulse_width = 5;
  double noise = 0.0;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::string intercept = "auto";
  std::string out;
  std::string plot_dir;
  std::string dump_data;
};

struct CalibrateOptions {
  std::string generator;
  std::size_t reps = 1000;
  double alpha = 0.05;
  double ar_coeff = 0.9;
  double coupling = 0.7;
  double w_scale = 1.0;
  std::size_t n = 10;
  std::size_t t_len = 100;
  std::size_t pulse_width = 5;
  double noise = 0.5;
  std::uint64_t seed = 0;
  std::string rho = "pearson";
  double ridge_lambda = 1.0;
  std::string intercept = "auto";
  unsigned threads = 0;
  std::string out;
};

const std::map<std::string, Sidedness> kSided{
    {"two", Sidedness::two_sided}, {"greater", Sidedness::greater}, {"less", Sidedness::less}};

void print_report(const TestReport& r, std::ostream& out, std::ostream& err) {
  out << "mode=" << to_string(r.mode) << " rho=" << to_string(r.rho.kind) << " n=" << r.n
      << " t_len=" << r.t_len << "\n"
      << "mean(G)=" << format_double(r.mean_g) << " t=" << format_double(r.t_stat)
      << " df=" << r.df << " p=" << format_double(r.p_value)
      << " skewness=" << format_double(r.skewness) << (r.reject ? "  [reject]" : "") << "\n";
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
}

int cmd_test(const TestOptions& o, std::ostream& out, std::ostream& err) {
  EngineConfig cfg;
  cfg.rho.kind = parse_rho_kind(o.rho);
  cfg.rho.ridge_lambda = o.ridge_lambda;
  cfg.rho.standardize = o.standardize;
  cfg.confounder_intercept = !o.no_intercept;
  cfg.mode = o.invalid_variant ? ProjectionMode::invalid_single : ProjectionMode::valid_joint;
  cfg.degenerate = o.degenerate_rho_zero ? DegeneratePolicy::zero : DegeneratePolicy::error;
  cfg.sidedness = kSided.at(o.sided);
  cfg.alpha = o.alpha;
  cfg.threads = o.threads;
  cfg.rho.check();

  const Dataset d = load_manifest(o.manifest);
  const TestReport rep = run_test(d, cfg);
  write_report(rep, o.out);
  if (!o.plot_dir.empty()) emit_plot_data(d, rep, o.plot_dir);
  print_report(rep, out, err);
  return kExitOk;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  ScenarioConfig sc;
  sc.scenario = parse_scenario(o.scenario);
  sc.n = o.n;
  sc.t_len = o.t_len;
  sc.pulse_width = o.pulse_width;
  sc.noise_sd = o.noise;
  sc.seed = o.seed;
  sc.check();

  EngineConfig cfg = scenario_engine_config(sc.scenario);
  cfg.alpha = o.alpha;
  if (o.intercept != "auto") cfg.confounder_intercept = o.intercept == "on";

  const Dataset d = gen_scenario(sc);
  if (!o.dump_data.empty()) dump_dataset(d, o.dump_data);
  const TestReport rep = run_test(d, cfg);
  write_report(rep, o.out);
  if (!o.plot_dir.empty()) emit_plot_data(d, rep, o.plot_dir);
  print_report(rep, out, err);
  return kExitOk;
}

int cmd_calibrate(const CalibrateOptions& o, std::ostream& out, std::ostream&) {
  MonteCarloConfig mc;
  if (o.generator == "ar1" || o.generator == "randomwalk") {
    NullGenConfig ng;
    ng.generator = parse_null_generator(o.generator);
    ng.ar_coeff = o.ar_coeff;
    ng.x_z_coupling = o.coupling;
    ng.w_scale = o.w_scale;
    ng.n = o.n;
    ng.t_len = o.t_len;
    ng.seed = o.seed;
    ng.check();
    mc.datagen = ng;
  } else {
    ScenarioConfig sc;
    sc.scenario = parse_scenario(o.generator);
    sc.n = o.n;
    sc.t_len = o.t_len;
    sc.pulse_width = o.pulse_width;
    sc.noise_sd = o.noise;
    sc.seed = o.seed;
    sc.check();
    mc.datagen = sc;
    mc.engine = scenario_engine_config(sc.scenario);
  }
  if (o.intercept != "auto") mc.engine.confounder_intercept = o.intercept == "on";
  mc.engine.rho.kind = parse_rho_kind(o.rho);
  mc.engine.rho.ridge_lambda = o.ridge_lambda;
  mc.engine.rho.check();
  mc.reps = o.reps;
  mc.alpha = o.alpha;
  mc.threads = o.threads;

  const auto res = monte_carlo(mc);
  write_calibration(mc, res, o.out);
  out << "generator=" << o.generator << " reps=" << res.reps << " alpha=" << format_double(res.alpha)
      << "\nrejection_rate=" << format_double(res.rejection_rate) << " (" << res.rejections << "/"
      << res.reps << ")\n";
  if (res.naive_rejection_rate) {
    out << "naive_rejection_rate=" << format_double(*res.naive_rejection_rate) << " over "
        << res.naive_tests << " single-experiment tests\n";
  }
  out << "mean(G) across reps: mean=" << format_double(res.mean_g.mean)
      << " fraction_negative=" << format_double(res.mean_g.fraction_negative) << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"parcorr: partial correlation test for repeatedly observed timeseries", "parcorr"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  TestOptions t;
  auto* test = app.add_subcommand("test", "Run the test on a manifest of CSV series");
  test->add_option("--manifest", t.manifest, "Manifest JSON")->required();
  test->add_option("--rho", t.rho, "Association measure")
      ->check(CLI::IsMember({"pearson", "linreg", "ridge"}));
  test->add_option("--ridge-lambda", t.ridge_lambda, "Ridge penalty (ridge only)")
      ->check(CLI::NonNegativeNumber);
  test->add_flag("--no-intercept", t.no_intercept, "Do not append an intercept column to Z");
  test->add_flag("--standardize", t.standardize, "Scale X columns to unit sd before ridge");
  test->add_flag("--invalid-variant", t.invalid_variant,
                 "Project out Z_i only (invalid; for demonstration)");
  test->add_flag("--degenerate-rho-zero", t.degenerate_rho_zero,
                 "Replace rho of degenerate pairs by 0 instead of failing");
  test->add_option("--sided", t.sided, "Alternative: two, greater or less")
      ->check(CLI::IsMember({"two", "greater", "less"}));
  test->add_option("--alpha", t.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  test->add_option("--threads", t.threads, "Worker threads (0 = automatic)");
  test->add_option("--out", t.out, "Report JSON path")->required();
  test->add_option("--plot-dir", t.plot_dir, "Directory for plot CSVs");

  SimulateOptions s;
  auto* sim = app.add_subcommand("simulate", "Generate a step/pulse scenario and test it");
  sim->add_option("--scenario", s.scenario, "fig1, fig2 or fig3")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  sim->add_option("--n", s.n, "Experiments");
  sim->add_option("--t", s.t_len, "Timepoints");
  sim->add_option("--pulse-width", s.pulse_width, "Pulse width in timepoints");
  sim->add_option("--noise", s.noise, "Gaussian noise sd")->check(CLI::NonNegativeNumber);
  sim->add_option("--seed", s.seed, "RNG seed")->required();
  sim->add_option("--alpha", s.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  sim->add_option("--intercept", s.intercept,
                  "Append an intercept column to Z: on, off, or auto (= off)")
      ->check(CLI::IsMember({"on", "off", "auto"}));
  sim->add_option("--out", s.out, "Report JSON path")->required();
  sim->add_option("--plot-dir", s.plot_dir, "Directory for plot CSVs");
  sim->add_option("--dump-data", s.dump_data, "Write the generated dataset (CSV + manifest)");

  CalibrateOptions c;
  auto* cal = app.add_subcommand("calibrate", "Monte Carlo rejection rate of the test");
  cal->add_option("--generator", c.generator, "ar1, randomwalk, fig1, fig2 or fig3")
      ->required()
      ->check(CLI::IsMember({"ar1", "randomwalk", "fig1", "fig2", "fig3"}));
  cal->add_option("--reps", c.reps, "Replicates")->check(CLI::PositiveNumber);
  cal->add_option("--alpha", c.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  cal->add_option("--ar-coeff", c.ar_coeff, "AR(1) coefficient (ar1)");
  cal->add_option("--coupling", c.coupling, "X-Z coupling (ar1, randomwalk)");
  cal->add_option("--w-scale", c.w_scale, "Scale of Z -> Y weights (ar1, randomwalk)");
  cal->add_option("--n", c.n, "Experiments per replicate");
  cal->add_option("--t", c.t_len, "Timepoints");
  cal->add_option("--pulse-width", c.pulse_width, "Pulse width (fig*)");
  cal->add_option("--noise", c.noise, "Noise sd (fig*)")->check(CLI::NonNegativeNumber);
  cal->add_option("--rho", c.rho, "Association measure")
      ->check(CLI::IsMember({"pearson", "linreg", "ridge"}));
  cal->add_option("--ridge-lambda", c.ridge_lambda, "Ridge penalty")->check(CLI::NonNegativeNumber);
  cal->add_option("--intercept", c.intercept,
                  "Append an intercept column to Z: on, off, or auto (off for fig*, on otherwise)")
      ->check(CLI::IsMember({"on", "off", "auto"}));
  cal->add_option("--threads", c.threads, "Worker threads (0 = automatic)");
  cal->add_option("--seed", c.seed, "Master seed; replicate k uses seed + k")->required();
  cal->add_option("--out", c.out, "Calibration JSON path")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*test) return cmd_test(t, out, err);
    if (*sim) return cmd_simulate(s, out, err);
    if (*cal) return cmd_calibrate(c, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace parcorr::cli
