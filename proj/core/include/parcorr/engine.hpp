#pragma once

#include "parcorr/association.hpp"
#include "parcorr/dataset.hpp"
#include "parcorr/projection.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parcorr {

// valid_joint residualizes Y_i against both Z_i and Z_j for pair (i, j).
// invalid_single residualizes against Z_i only; it is not a valid test and
// exists to demonstrate why the joint projection is needed.
enum class ProjectionMode { valid_joint, invalid_single };

enum class Sidedness { two_sided, greater, less };

// What to do when a residualized target or a predictor is degenerate.
enum class DegeneratePolicy { error, zero };

std::string_view to_string(ProjectionMode mode);
std::string_view to_string(Sidedness s);

// |G| values at or below this are treated as exact zeros by the t-test and
// the symmetry diagnostics; rho measures are O(1), so this is far below any
// meaningful effect and well above accumulated rounding.
inline constexpr double kDefaultGZeroTol = 1e-12;

// Warning attached whenever the G values have no spread.
inline constexpr std::string_view kZeroVarianceWarning =
    "zero-variance G (degenerate, likely noiseless simulation)";

struct EngineConfig {
  RhoMeasure rho;
  ProjectionMode mode = ProjectionMode::valid_joint;
  bool confounder_intercept = true;  // append an all-ones column to every Z
  double rank_tol = kDefaultRankTol;
  DegeneratePolicy degenerate = DegeneratePolicy::error;
  Sidedness sidedness = Sidedness::two_sided;
  double alpha = 0.05;
  double g_zero_tol = kDefaultGZeroTol;
  // A residual whose Frobenius norm is at most this fraction of ||Y_i|| is
  // considered fully explained by the confounders.
  double residual_tol = 1e-10;
  unsigned threads = 0;  // 0 = automatic, see resolve_threads
};

// a(i, j) = rho(X_i; P_ij Y_i), b(i, j) = rho(X_j; P_ij Y_i).
struct PairTables {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  ProjectionMode mode = ProjectionMode::valid_joint;
  std::size_t degenerate_pairs = 0;  // entries zero-substituted under DegeneratePolicy::zero

  std::size_t size() const noexcept { return static_cast<std::size_t>(a.rows()); }
};

// Confounder matrix actually projected out for experiment i.
Eigen::MatrixXd effective_confounder(const Experiment& e, const EngineConfig& cfg);

// Residual of Y_i used for pair (i, j) under cfg.mode.
Eigen::MatrixXd pair_residual(const Dataset& d, std::size_t i, std::size_t j,
                              const EngineConfig& cfg);

// Throws ConfigError if the measure cannot be applied to every experiment.
void check_measure_compatible(const Dataset& d, const RhoMeasure& rho);

// Fills both tables, diagonal included. The joint basis is computed once per
// unordered pair {i, j} and shared by (i, j) and (j, i).
PairTables pair_tables(const Dataset& d, const EngineConfig& cfg);

// G_i = (1/N) sum_j (a(i, j) - b(i, j)); the j == i term is exactly zero.
std::vector<double> g_statistics(const PairTables& tables);

struct TTestResult {
  double t_stat = 0.0;  // +-infinity when G has zero spread and nonzero mean
  double df = 0.0;
  double p_value = 1.0;
  std::vector<std::string> warnings;
};

// One-sample t-test of mean(g) == 0 with df = N - 1.
TTestResult t_test(std::span<const double> g, Sidedness sidedness = Sidedness::two_sided,
                   double zero_tol = kDefaultGZeroTol);

struct QQPoint {
  double theoretical = 0.0;
  double empirical = 0.0;
};

struct SymmetryDiagnostics {
  double skewness = 0.0;
  std::vector<QQPoint> qq_points;
  std::vector<std::string> warnings;
};

inline constexpr double kSkewnessWarningThreshold = 1.0;

// Moment skewness m3 / m2^(3/2) and sorted g against normal quantiles at
// (k - 0.5) / N.
SymmetryDiagnostics symmetry_diagnostics(std::span<const double> g,
                                         double zero_tol = kDefaultGZeroTol);

struct TestReport {
  std::vector<double> g;
  double mean_g = 0.0;
  double t_stat = 0.0;
  double df = 0.0;
  double p_value = 1.0;
  double skewness = 0.0;
  std::vector<QQPoint> qq_points;
  ProjectionMode mode = ProjectionMode::valid_joint;
  RhoMeasure rho;
  bool confounder_intercept = true;
  double rank_tol = kDefaultRankTol;
  Sidedness sidedness = Sidedness::two_sided;
  double alpha = 0.05;
  bool reject = false;
  std::size_t n = 0;
  std::size_t t_len = 0;
  std::vector<std::string> labels;
  std::vector<std::string> warnings;
};

// validate -> pair_tables -> g_statistics -> t_test -> symmetry_diagnostics.
TestReport run_test(const Dataset& d, const EngineConfig& cfg);

struct NaiveResult {
  double r = 0.0;
  double t_stat = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

// Single-experiment partial Pearson test between the first columns of X and
// Y after removing the confounder, treating timepoints as independent. This
// is the textbook test that autocorrelation invalidates.
NaiveResult naive_partial_pearson(const Experiment& e, bool intercept = true,
                                  double rank_tol = kDefaultRankTol);

}  // namespace parcorr
