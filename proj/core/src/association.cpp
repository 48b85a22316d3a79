#include "parcorr/association.hpp"

#include "parcorr/error.hpp"
#include "parcorr/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace parcorr {

namespace {

// Centered sum of squares at or below this fraction of the raw sum of
// squares is indistinguishable from a constant series.
constexpr double kRelVarianceFloor = 1e-26;

bool negligible_spread(double centered_ss, double raw_ss) {
  return centered_ss <= 0.0 || centered_ss <= kRelVarianceFloor * raw_ss;
}

Eigen::MatrixXd center_columns(const Eigen::MatrixXd& m) {
  return m.rowwise() - m.colwise().mean();
}

void check_rows(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const char* who) {
  if (x.rows() != y.rows()) {
    throw StructuralError(std::string(who) + ": x has " + std::to_string(x.rows()) +
                          " rows, y has " + std::to_string(y.rows()));
  }
}

struct Prepared {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  double sst = 0.0;
};

Prepared prepare(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double lambda,
                 bool add_intercept, bool standardize) {
  check_rows(x, y, "rho_r2");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("ridge lambda must be finite and >= 0, got " + std::to_string(lambda));
  }
  const Eigen::Index t = x.rows();
  const Eigen::Index p = x.cols();
  if (lambda == 0.0 && t <= p + (add_intercept ? 1 : 0)) {
    throw IllConditioned("least squares with T=" + std::to_string(t) + " and p=" +
                         std::to_string(p) + (add_intercept ? " plus intercept" : "") +
                         " is underdetermined");
  }

  Prepared out;
  const Eigen::MatrixXd yc = center_columns(y);
  out.sst = yc.squaredNorm();
  if (negligible_spread(out.sst, y.squaredNorm())) {
    throw DegenerateSeries("target series has zero variance");
  }
  out.x = add_intercept ? center_columns(x) : x;
  out.y = add_intercept ? yc : y;
  if (standardize) {
    for (Eigen::Index c = 0; c < out.x.cols(); ++c) {
      const double sd = std::sqrt(center_columns(out.x.col(c)).squaredNorm() /
                                  static_cast<double>(std::max<Eigen::Index>(t - 1, 1)));
      if (sd > 0.0) out.x.col(c) /= sd;
    }
  }
  return out;
}

// Ordinary least squares via the rank-revealing orthonormal basis of x.
double r2_least_squares(const Prepared& pr) {
  const auto basis = orthonormal_basis(pr.x);
  const double sse = residualize(pr.y, basis).squaredNorm();
  return 1.0 - sse / pr.sst;
}

// Ridge via the thin SVD of x: fitted = U diag(s^2 / (s^2 + lambda)) U^T y.
// Singular values below the rank tolerance are treated as zero, so
// lambda = 0 is the minimum-norm least-squares fit.
double r2_ridge_svd(const Prepared& pr, double lambda) {
  if (pr.x.cols() == 0) return 1.0 - pr.y.squaredNorm() / pr.sst;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(pr.x, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? s(0) * kDefaultRankTol : 0.0;
  Eigen::VectorXd shrink(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double s2 = s(k) * s(k);
    shrink(k) = s(k) > cutoff ? s2 / (s2 + lambda) : 0.0;
  }
  const Eigen::MatrixXd coef = svd.matrixU().transpose() * pr.y;
  const Eigen::MatrixXd fitted = svd.matrixU() * (shrink.asDiagonal() * coef);
  const double sse = (pr.y - fitted).squaredNorm();
  return 1.0 - sse / pr.sst;
}

}  // namespace

std::string_view to_string(RhoKind kind) {
  switch (kind) {
    case RhoKind::pearson1d: return "pearson1d";
    case RhoKind::linreg_r2: return "linreg_r2";
    case RhoKind::ridge_r2: return "ridge_r2";
  }
  return "unknown";
}

RhoKind parse_rho_kind(std::string_view name) {
  if (name == "pearson" || name == "pearson1d") return RhoKind::pearson1d;
  if (name == "linreg" || name == "linreg_r2") return RhoKind::linreg_r2;
  if (name == "ridge" || name == "ridge_r2") return RhoKind::ridge_r2;
  throw ConfigError("unknown rho measure '" + std::string(name) + "'");
}

void RhoMeasure::check() const {
  if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
    throw ConfigError("ridge lambda must be finite and >= 0");
  }
}

double rho_pearson(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) {
    throw StructuralError("rho_pearson: lengths " + std::to_string(x.size()) + " and " +
                          std::to_string(y.size()) + " differ");
  }
  if (x.size() < 2) throw StructuralError("rho_pearson: need at least 2 timepoints");
  const Eigen::ArrayXd xc = x.array() - x.mean();
  const Eigen::ArrayXd yc = y.array() - y.mean();
  const double sxx = (xc * xc).sum();
  const double syy = (yc * yc).sum();
  if (negligible_spread(sxx, x.squaredNorm())) throw DegenerateSeries("first series has zero variance");
  if (negligible_spread(syy, y.squaredNorm())) throw DegenerateSeries("second series has zero variance");
  const double r = (xc * yc).sum() / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double rho_r2(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double lambda,
              bool add_intercept, bool standardize) {
  const auto pr = prepare(x, y, lambda, add_intercept, standardize);
  return lambda == 0.0 ? r2_least_squares(pr) : r2_ridge_svd(pr, lambda);
}

double apply_rho(const RhoMeasure& measure, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  switch (measure.kind) {
    case RhoKind::pearson1d:
      if (x.cols() != 1 || y.cols() != 1) {
        throw ConfigError("pearson1d needs single-column x and y, got p=" +
                          std::to_string(x.cols()) + ", q=" + std::to_string(y.cols()));
      }
      return rho_pearson(x.col(0), y.col(0));
    case RhoKind::linreg_r2:
      return rho_r2(x, y, 0.0, measure.add_intercept);
    case RhoKind::ridge_r2: {
      measure.check();
      const auto pr = prepare(x, y, measure.ridge_lambda, measure.add_intercept, measure.standardize);
      return r2_ridge_svd(pr, measure.ridge_lambda);
    }
  }
  throw ConfigError("unknown rho measure");
}

}  // namespace parcorr
