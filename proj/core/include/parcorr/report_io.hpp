#pragma once

#include "parcorr/dataset.hpp"
#include "parcorr/engine.hpp"
#include "parcorr/simulate.hpp"

#include <filesystem>
#include <string>

namespace parcorr {

// Keys: g, mean_g, t_stat, df, p_value, skewness, qq_points, mode, rho,
// confounder_intercept, rank_tol, sidedness, alpha, reject, n, t_len,
// labels, warnings, tool_version. Every key is always present. Non-finite
// numbers are written as null.
std::string report_to_json(const TestReport& report, int indent = 2);

void write_report(const TestReport& report, const std::filesystem::path& path);

std::string calibration_to_json(const MonteCarloConfig& cfg, const MonteCarloResult& result,
                                int indent = 2);

void write_calibration(const MonteCarloConfig& cfg, const MonteCarloResult& result,
                       const std::filesystem::path& path);

// CSVs for external plotting: per-experiment X, Y, Z, the residual of Y_1
// used for pair (1, 2), g_values.csv and qq.csv. Throws before writing
// anything if the dataset has fewer than two experiments.
void emit_plot_data(const Dataset& d, const TestReport& report, const std::filesystem::path& out_dir);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace parcorr
