#pragma once

#include "parcorr/dataset.hpp"
#include "parcorr/engine.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace parcorr {

// Step-plus-pulse scenarios: X_i = Y_i = S_0 + S_i, with Z_i = S_0 (fig1) or
// Z_i = S_i (fig2, fig3). fig3 data equals fig2 data; it is analysed with
// ProjectionMode::invalid_single.
enum class Scenario { fig1, fig2, fig3 };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);
ProjectionMode scenario_mode(Scenario s);

// Engine settings that reproduce the scenarios: mode from scenario_mode and
// Z projected exactly as generated (no extra intercept column). Pearson rho
// is mean-invariant, so the intercept matters only through the projection.
EngineConfig scenario_engine_config(Scenario s);

struct ScenarioConfig {
  Scenario scenario = Scenario::fig1;
  std::size_t n = 10;
  std::size_t t_len = 100;
  std::size_t pulse_width = 5;
  double noise_sd = 0.0;
  std::uint64_t seed = 42;

  void check() const;
};

// 0 on the first half of the timepoints, 1 on the second half.
Eigen::VectorXd step_series(std::size_t t_len);

// Admissible 0-based pulse start positions: pulses lie in the second half of
// the series, at least pulse_width away from the step edge and the end.
std::vector<std::size_t> admissible_pulse_starts(std::size_t t_len, std::size_t pulse_width);

// Distinct pulse starts, one per experiment, drawn from a seeded shuffle.
std::vector<std::size_t> pulse_starts(const ScenarioConfig& cfg);

Dataset gen_scenario(const ScenarioConfig& cfg);

enum class NullGenerator { ar1, random_walk };

std::string_view to_string(NullGenerator g);
NullGenerator parse_null_generator(std::string_view name);

// Synthetic data satisfying Y_i = Z_i W_i + E_i with E_i independent of X, Z.
struct NullGenConfig {
  NullGenerator generator = NullGenerator::ar1;
  double ar_coeff = 0.9;  // ar1 only, in (-1, 1)
  std::size_t n = 10;
  std::size_t t_len = 100;
  std::size_t p = 1;
  std::size_t q = 1;
  std::size_t r = 1;
  double w_scale = 1.0;
  double x_z_coupling = 0.7;
  std::uint64_t seed = 0;

  void check() const;
};

Dataset gen_null(const NullGenConfig& cfg);

using DataGenConfig = std::variant<ScenarioConfig, NullGenConfig>;

// Generates one dataset with the config's seed replaced by `seed`.
Dataset generate(const DataGenConfig& cfg, std::uint64_t seed);
std::uint64_t master_seed(const DataGenConfig& cfg);

struct MonteCarloConfig {
  DataGenConfig datagen;
  EngineConfig engine;
  std::size_t reps = 1000;
  double alpha = 0.05;
  unsigned threads = 0;  // parallelism across reps; 0 = automatic
  bool naive_baseline = true;
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  double fraction_negative = 0.0;
};

Summary summarize(std::span<const double> values);

struct MonteCarloResult {
  std::size_t reps = 0;
  double alpha = 0.05;
  std::size_t rejections = 0;
  double rejection_rate = 0.0;
  Summary mean_g;  // distribution of per-rep mean(G)
  std::vector<std::uint64_t> seeds;
  std::vector<double> p_values;
  std::vector<double> mean_g_values;
  // Rejection rate of naive_partial_pearson over every (rep, experiment).
  std::optional<double> naive_rejection_rate;
  std::size_t naive_tests = 0;
};

// Rep k generates data with seed master + k and runs the engine on it.
// Results are gathered in rep order, so the aggregate is deterministic.
MonteCarloResult monte_carlo(const MonteCarloConfig& cfg);

}  // namespace parcorr
