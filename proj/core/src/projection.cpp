#include "parcorr/projection.hpp"

#include "parcorr/error.hpp"

#include <algorithm>
#include <string>

namespace parcorr {

OrthonormalBasis orthonormal_basis(const Eigen::MatrixXd& m, double tol) {
  OrthonormalBasis out;
  out.tol_used = tol;
  const Eigen::Index t = m.rows();
  if (m.cols() == 0 || t == 0) {
    out.q.resize(t, 0);
    return out;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  // Pivots are sorted by decreasing magnitude, so the rank cutoff is
  // relative to |R(0,0)|.
  qr.setThreshold(tol);
  const Eigen::Index rank = qr.rank();
  out.q = qr.householderQ() * Eigen::MatrixXd::Identity(t, rank);
  return out;
}

Eigen::MatrixXd residualize(const Eigen::MatrixXd& y, const OrthonormalBasis& basis) {
  if (y.rows() != basis.q.rows()) {
    throw StructuralError("residualize: y has " + std::to_string(y.rows()) +
                          " rows but the basis has " + std::to_string(basis.q.rows()));
  }
  if (basis.rank() == 0) return y;
  return y - basis.q * (basis.q.transpose() * y);
}

OrthonormalBasis joint_basis(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
  if (a.rows() != b.rows()) {
    throw StructuralError("joint_basis: confounders have " + std::to_string(a.rows()) + " and " +
                          std::to_string(b.rows()) + " rows");
  }
  Eigen::MatrixXd stacked(a.rows(), a.cols() + b.cols());
  stacked << a, b;
  return orthonormal_basis(stacked, tol);
}

Eigen::MatrixXd joint_residualize(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z_a,
                                  const Eigen::MatrixXd& z_b, double tol) {
  if (y.rows() != z_a.rows() || y.rows() != z_b.rows()) {
    throw StructuralError("joint_residualize: row counts differ (y=" + std::to_string(y.rows()) +
                          ", z_a=" + std::to_string(z_a.rows()) +
                          ", z_b=" + std::to_string(z_b.rows()) + ")");
  }
  return residualize(y, joint_basis(z_a, z_b, tol));
}

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd out(z.rows(), z.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(z.cols()) = z;
  return out;
}

}  // namespace parcorr
