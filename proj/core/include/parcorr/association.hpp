#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>

namespace parcorr {

enum class RhoKind { pearson1d, linreg_r2, ridge_r2 };

std::string_view to_string(RhoKind kind);
// Accepts "pearson", "pearson1d", "linreg", "linreg_r2", "ridge", "ridge_r2".
RhoKind parse_rho_kind(std::string_view name);

// Association measure rho(X; Y): how well Y is predicted from X.
struct RhoMeasure {
  RhoKind kind = RhoKind::pearson1d;
  double ridge_lambda = 0.0;  // ridge_r2 only
  bool add_intercept = true;  // regression measures fit an unpenalized intercept
  bool standardize = false;   // ridge_r2 only: scale x columns to unit sd before fitting

  // Throws ConfigError when the fields are inconsistent.
  void check() const;
};

// Sample Pearson correlation of two equal-length vectors.
// Throws DegenerateSeries if either has zero variance.
double rho_pearson(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

// In-sample fraction of variance of y explained by a (ridge) regression on x:
// 1 - SSE/SST, with SSE summed over all columns of y and SST the total
// squared deviation of y from its column means.
//
// lambda == 0 is ordinary least squares and needs T > p (+1 with intercept),
// otherwise IllConditioned is thrown. Zero total variance of y throws
// DegenerateSeries.
double rho_r2(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double lambda,
              bool add_intercept, bool standardize = false);

double apply_rho(const RhoMeasure& measure, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

}  // namespace parcorr
