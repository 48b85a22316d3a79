#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace parcorr {

inline constexpr double kDefaultRankTol = 1e-10;

// Orthonormal basis of a confounder column space. The projector onto the
// orthogonal complement, I - Q Q^T, is only ever applied, never formed.
struct OrthonormalBasis {
  Eigen::MatrixXd q;  // T x rank, orthonormal columns
  double tol_used = kDefaultRankTol;

  std::size_t rank() const noexcept { return static_cast<std::size_t>(q.cols()); }
  std::size_t t_len() const noexcept { return static_cast<std::size_t>(q.rows()); }
};

// Rank-revealing basis via column-pivoted Householder QR. Columns whose
// pivot magnitude falls below tol * (largest pivot) are dropped.
OrthonormalBasis orthonormal_basis(const Eigen::MatrixXd& m, double tol = kDefaultRankTol);

// y - Q (Q^T y). Throws StructuralError on a row-count mismatch.
Eigen::MatrixXd residualize(const Eigen::MatrixXd& y, const OrthonormalBasis& basis);

// Basis for span([a | b]). Symmetric in its arguments up to rounding.
OrthonormalBasis joint_basis(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             double tol = kDefaultRankTol);

// Residual of y against the union of the column spaces of z_a and z_b.
Eigen::MatrixXd joint_residualize(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z_a,
                                  const Eigen::MatrixXd& z_b, double tol = kDefaultRankTol);

// [ones | z], the confounder with an explicit intercept column.
Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& z);

}  // namespace parcorr
