#pragma once

#include "parcorr/dataset.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace parcorr {

// Parses comma-separated numeric rows. A first row containing any
// non-numeric cell is taken as a header and skipped. Blank lines are
// ignored. `source` names the input in error messages.
SeriesMatrix parse_csv_series(std::string_view text, std::string_view source = "<memory>");

SeriesMatrix load_csv_series(const std::filesystem::path& path);

// Shortest decimal form that reads back to the identical double.
std::string format_double(double v);

std::string format_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& header = {});

void write_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path,
               const std::vector<std::string>& header = {});

}  // namespace parcorr
