#include "parcorr/engine.hpp"

#include "parcorr/error.hpp"
#include "parcorr/parallel.hpp"
#include "parcorr/student_t.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace parcorr {

namespace {

std::string pair_context(const Dataset& d, std::size_t i, std::size_t j) {
  return "pair (" + std::to_string(i + 1) + " '" + d[i].label + "', " + std::to_string(j + 1) +
         " '" + d[j].label + "')";
}

// Evaluates rho, applying the degenerate-series policy with (i, j) context.
class RhoEvaluator {
 public:
  RhoEvaluator(const Dataset& d, const EngineConfig& cfg, std::atomic<std::size_t>& degenerate)
      : d_(d), cfg_(cfg), degenerate_(degenerate) {}

  // Residual of Y_i through `basis`; `degenerate` is set when the
  // confounders explain Y_i completely.
  Eigen::MatrixXd residual(std::size_t i, const OrthonormalBasis& basis, bool& degenerate) const {
    Eigen::MatrixXd r = residualize(d_[i].y.values(), basis);
    degenerate = r.norm() <= cfg_.residual_tol * d_[i].y.values().norm();
    return r;
  }

  double operator()(std::size_t x_index, const Eigen::MatrixXd& resid, bool resid_degenerate,
                    std::size_t i, std::size_t j) const {
    try {
      if (resid_degenerate) {
        throw DegenerateSeries("residualized Y_" + std::to_string(i + 1) +
                               " is numerically zero (confounders explain it completely)");
      }
      return apply_rho(cfg_.rho, d_[x_index].x.values(), resid);
    } catch (const DegenerateSeries& e) {
      if (cfg_.degenerate == DegeneratePolicy::zero) {
        ++degenerate_;
        return 0.0;
      }
      throw DegenerateSeries(pair_context(d_, i, j) + ": " + e.what() +
                             " (use the zero-substitution policy to continue)");
    }
  }

 private:
  const Dataset& d_;
  const EngineConfig& cfg_;
  std::atomic<std::size_t>& degenerate_;
};

bool all_zero(std::span<const double> g, double zero_tol) {
  return std::all_of(g.begin(), g.end(), [&](double v) { return std::fabs(v) <= zero_tol; });
}

double mean_of(std::span<const double> g) {
  return std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
}

// Spread is negligible if every value is (near) zero, or if the sample sd
// is rounding-level relative to the mean.
bool zero_spread(std::span<const double> g, double mean, double sd, double zero_tol) {
  return sd == 0.0 || all_zero(g, zero_tol) || sd <= 1e-12 * std::fabs(mean);
}

void append(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& w : from)
    if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
}

}  // namespace

std::string_view to_string(ProjectionMode mode) {
  return mode == ProjectionMode::valid_joint ? "valid_joint" : "invalid_single";
}

std::string_view to_string(Sidedness s) {
  switch (s) {
    case Sidedness::two_sided: return "two_sided";
    case Sidedness::greater: return "greater";
    case Sidedness::less: return "less";
  }
  return "unknown";
}

Eigen::MatrixXd effective_confounder(const Experiment& e, const EngineConfig& cfg) {
  return cfg.confounder_intercept ? with_intercept(e.z.values()) : e.z.values();
}

Eigen::MatrixXd pair_residual(const Dataset& d, std::size_t i, std::size_t j,
                              const EngineConfig& cfg) {
  const auto zi = effective_confounder(d[i], cfg);
  if (cfg.mode == ProjectionMode::invalid_single) {
    return residualize(d[i].y.values(), orthonormal_basis(zi, cfg.rank_tol));
  }
  return joint_residualize(d[i].y.values(), zi, effective_confounder(d[j], cfg), cfg.rank_tol);
}

void check_measure_compatible(const Dataset& d, const RhoMeasure& rho) {
  rho.check();
  if (rho.kind != RhoKind::pearson1d) return;
  for (const auto& e : d.experiments()) {
    if (e.x.n_cols() != 1 || e.y.n_cols() != 1) {
      throw ConfigError("pearson1d needs single-column X and Y; experiment '" + e.label +
                        "' has p=" + std::to_string(e.x.n_cols()) +
                        ", q=" + std::to_string(e.y.n_cols()));
    }
  }
}

PairTables pair_tables(const Dataset& d, const EngineConfig& cfg) {
  const std::size_t n = d.size();
  PairTables out;
  out.mode = cfg.mode;
  out.a.setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.b.setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  std::vector<Eigen::MatrixXd> confounders;
  confounders.reserve(n);
  for (const auto& e : d.experiments()) confounders.push_back(effective_confounder(e, cfg));

  std::atomic<std::size_t> degenerate{0};
  const RhoEvaluator rho(d, cfg, degenerate);
  const unsigned threads = resolve_threads(cfg.threads);
  auto at = [](Eigen::MatrixXd& m, std::size_t i, std::size_t j) -> double& {
    return m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  if (cfg.mode == ProjectionMode::invalid_single) {
    parallel_for(n, threads, [&](std::size_t i) {
      const auto basis = orthonormal_basis(confounders[i], cfg.rank_tol);
      bool deg = false;
      const auto r = rho.residual(i, basis, deg);
      const double same = rho(i, r, deg, i, i);
      for (std::size_t j = 0; j < n; ++j) {
        at(out.a, i, j) = same;
        at(out.b, i, j) = j == i ? same : rho(j, r, deg, i, j);
      }
    });
  } else {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);

    parallel_for(pairs.size(), threads, [&](std::size_t k) {
      const auto [i, j] = pairs[k];
      const auto basis = joint_basis(confounders[i], confounders[j], cfg.rank_tol);
      bool deg_i = false;
      const auto ri = rho.residual(i, basis, deg_i);
      at(out.a, i, j) = rho(i, ri, deg_i, i, j);
      if (i == j) {
        at(out.b, i, i) = at(out.a, i, i);
        return;
      }
      at(out.b, i, j) = rho(j, ri, deg_i, i, j);
      bool deg_j = false;
      const auto rj = rho.residual(j, basis, deg_j);
      at(out.a, j, i) = rho(j, rj, deg_j, j, i);
      at(out.b, j, i) = rho(i, rj, deg_j, j, i);
    });
  }
  out.degenerate_pairs = degenerate.load();
  return out;
}

std::vector<double> g_statistics(const PairTables& tables) {
  const Eigen::Index n = tables.a.rows();
  std::vector<double> g(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) sum += tables.a(i, j) - tables.b(i, j);
    g[static_cast<std::size_t>(i)] = sum / static_cast<double>(n);
  }
  return g;
}

TTestResult t_test(std::span<const double> g, Sidedness sidedness, double zero_tol) {
  const std::size_t n = g.size();
  if (n < kMinExperiments) {
    throw StructuralError("t_test needs at least 3 values, got " + std::to_string(n));
  }
  TTestResult out;
  out.df = static_cast<double>(n - 1);
  const double mean = mean_of(g);
  double ss = 0.0;
  for (double v : g) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / out.df);

  if (zero_spread(g, mean, sd, zero_tol)) {
    out.warnings.emplace_back(kZeroVarianceWarning);
    if (all_zero(g, zero_tol) || mean == 0.0) {
      out.t_stat = 0.0;
      out.p_value = 1.0;
      return out;
    }
    out.t_stat = std::copysign(std::numeric_limits<double>::infinity(), mean);
    const bool favours = sidedness == Sidedness::two_sided ||
                         (sidedness == Sidedness::greater && mean > 0.0) ||
                         (sidedness == Sidedness::less && mean < 0.0);
    out.p_value = favours ? 0.0 : 1.0;
    return out;
  }

  out.t_stat = mean / (sd / std::sqrt(static_cast<double>(n)));
  switch (sidedness) {
    case Sidedness::two_sided: out.p_value = student_t_two_sided(out.t_stat, out.df); break;
    case Sidedness::greater: out.p_value = student_t_sf(out.t_stat, out.df); break;
    case Sidedness::less: out.p_value = student_t_cdf(out.t_stat, out.df); break;
  }
  out.p_value = std::clamp(out.p_value, 0.0, 1.0);
  return out;
}

SymmetryDiagnostics symmetry_diagnostics(std::span<const double> g, double zero_tol) {
  const std::size_t n = g.size();
  if (n < kMinExperiments) {
    throw StructuralError("symmetry_diagnostics needs at least 3 values, got " + std::to_string(n));
  }
  SymmetryDiagnostics out;
  const double mean = mean_of(g);
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : g) {
    const double dv = v - mean;
    m2 += dv * dv;
    m3 += dv * dv * dv;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  if (zero_spread(g, mean, std::sqrt(m2), zero_tol)) {
    out.skewness = 0.0;
    out.warnings.emplace_back(kZeroVarianceWarning);
  } else {
    out.skewness = m3 / std::pow(m2, 1.5);
    if (std::fabs(out.skewness) > kSkewnessWarningThreshold) {
      out.warnings.push_back("G distribution is skewed (skewness " + std::to_string(out.skewness) +
                             "); the t-test assumes approximate symmetry, inspect the QQ points");
    }
  }

  std::vector<double> sorted(g.begin(), g.end());
  std::sort(sorted.begin(), sorted.end());
  out.qq_points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double prob = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    out.qq_points.push_back({normal_quantile(prob), sorted[k]});
  }
  return out;
}

TestReport run_test(const Dataset& d, const EngineConfig& cfg) {
  const auto validation = validate_dataset(d);
  if (!validation.ok()) throw ValidationError("invalid dataset: " + validation.summary());
  check_measure_compatible(d, cfg.rho);
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");

  const auto tables = pair_tables(d, cfg);

  TestReport rep;
  rep.g = g_statistics(tables);
  rep.mean_g = mean_of(rep.g);
  const auto tt = t_test(rep.g, cfg.sidedness, cfg.g_zero_tol);
  const auto sym = symmetry_diagnostics(rep.g, cfg.g_zero_tol);
  rep.t_stat = tt.t_stat;
  rep.df = tt.df;
  rep.p_value = tt.p_value;
  rep.skewness = sym.skewness;
  rep.qq_points = sym.qq_points;
  rep.mode = cfg.mode;
  rep.rho = cfg.rho;
  rep.confounder_intercept = cfg.confounder_intercept;
  rep.rank_tol = cfg.rank_tol;
  rep.sidedness = cfg.sidedness;
  rep.alpha = cfg.alpha;
  rep.reject = rep.p_value < cfg.alpha;
  rep.n = d.size();
  rep.t_len = d.t_len();
  for (const auto& e : d.experiments()) rep.labels.push_back(e.label);

  append(rep.warnings, validation.warnings);
  append(rep.warnings, tt.warnings);
  append(rep.warnings, sym.warnings);
  if (tables.degenerate_pairs > 0) {
    rep.warnings.push_back(std::to_string(tables.degenerate_pairs) +
                           " degenerate rho evaluations were replaced by 0");
  }
  if (cfg.mode == ProjectionMode::invalid_single) {
    rep.warnings.push_back("invalid_single mode projects out Z_i only; the result is not a valid test");
  }
  return rep;
}

NaiveResult naive_partial_pearson(const Experiment& e, bool intercept, double rank_tol) {
  const Eigen::MatrixXd z = intercept ? with_intercept(e.z.values()) : e.z.values();
  const auto basis = orthonormal_basis(z, rank_tol);
  const Eigen::VectorXd rx = residualize(e.x.values().col(0), basis);
  const Eigen::VectorXd ry = residualize(e.y.values().col(0), basis);
  NaiveResult out;
  out.r = rho_pearson(rx, ry);
  // Controlling for k confounder columns beyond the mean costs k degrees
  // of freedom on top of the usual T - 2.
  const double k = static_cast<double>(basis.rank()) - (intercept ? 1.0 : 0.0);
  out.df = static_cast<double>(e.y.t_len()) - 2.0 - std::max(k, 0.0);
  if (out.df < 1.0) throw IllConditioned("naive partial Pearson test has no residual degrees of freedom");
  const double denom = std::max(1.0 - out.r * out.r, 0.0);
  out.t_stat = denom == 0.0 ? std::copysign(std::numeric_limits<double>::infinity(), out.r)
                            : out.r * std::sqrt(out.df / denom);
  out.p_value = student_t_two_sided(out.t_stat, out.df);
  return out;
}

}  // namespace parcorr
