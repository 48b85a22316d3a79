#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace parcorr {

// Minimum number of experiments accepted by validation, and the count below
// which the t-test on G is flagged as unreliable.
inline constexpr std::size_t kMinExperiments = 3;
inline constexpr std::size_t kFewExperimentsWarning = 8;

// One experiment's observation of one variable: rows are timepoints, columns
// are dimensions. A zero-column matrix is a valid (empty) confounder.
class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  explicit SeriesMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {}

  // Convenience for single-column series.
  static SeriesMatrix column(const Eigen::VectorXd& v) { return SeriesMatrix(Eigen::MatrixXd(v)); }
  static SeriesMatrix empty(std::size_t t_len) {
    return SeriesMatrix(Eigen::MatrixXd(static_cast<Eigen::Index>(t_len), 0));
  }

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  std::size_t t_len() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t n_cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  bool all_finite() const { return values_.allFinite(); }

  friend bool operator==(const SeriesMatrix& a, const SeriesMatrix& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           a.values_ == b.values_;
  }

 private:
  Eigen::MatrixXd values_;
};

struct Experiment {
  SeriesMatrix x;
  SeriesMatrix y;
  SeriesMatrix z;  // may have zero columns
  std::string label;
};

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Experiment> experiments) : experiments_(std::move(experiments)) {}

  const std::vector<Experiment>& experiments() const noexcept { return experiments_; }
  const Experiment& operator[](std::size_t i) const { return experiments_[i]; }
  std::size_t size() const noexcept { return experiments_.size(); }
  bool empty() const noexcept { return experiments_.empty(); }

  // Timepoint count of the first experiment; 0 for an empty dataset.
  std::size_t t_len() const noexcept { return experiments_.empty() ? 0 : experiments_.front().y.t_len(); }

 private:
  std::vector<Experiment> experiments_;
};

struct Violation {
  std::string label;  // experiment label, empty for dataset-wide rules
  std::string rule;    // short stable key, e.g. "t_len mismatch"
  std::string detail;  // free-form context, may be empty

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationResult {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return violations.empty(); }
  // All violations joined into one human-readable line.
  std::string summary() const;

  friend bool operator==(const ValidationResult&, const ValidationResult&) = default;
};

// Checks every structural precondition of the test. Never throws.
ValidationResult validate_dataset(const Dataset& d);

// Throws ValidationError carrying the summary when validation fails.
void require_valid(const Dataset& d);

}  // namespace parcorr
