#include <doctest.h>

#include "oracles.hpp"

#include <parcorr/association.hpp>
#include <parcorr/error.hpp>

#include <random>

using namespace parcorr;
using doctest::Approx;
using oracle::random_matrix;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("rho_pearson examples") {
  CHECK(rho_pearson(vec({1, 2, 3}), vec({1, 2, 3})) == Approx(1.0).epsilon(1e-15));
  CHECK(rho_pearson(vec({1, 2, 3}), vec({3, 2, 1})) == Approx(-1.0).epsilon(1e-15));
  // cov = 1, var_x = var_y = 2 (sums of squares about the mean)
  CHECK(rho_pearson(vec({1, 2, 3}), vec({1, 3, 2})) == Approx(0.5).epsilon(1e-15));
}

TEST_CASE("rho_pearson degenerate and structural errors") {
  CHECK_THROWS_AS(rho_pearson(vec({1, 1, 1}), vec({1, 2, 3})), DegenerateSeries);
  CHECK_THROWS_AS(rho_pearson(vec({1, 2, 3}), vec({4, 4, 4})), DegenerateSeries);
  CHECK_THROWS_AS(rho_pearson(vec({1e9, 1e9 + 1e-7, 1e9}), vec({1, 2, 3})), DegenerateSeries);
  CHECK_THROWS_AS(rho_pearson(vec({1, 2}), vec({1, 2, 3})), StructuralError);
}

TEST_CASE("rho_pearson properties") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index t = 3 + trial % 60;
    const Eigen::VectorXd x = random_matrix(t, 1, rng);
    const Eigen::VectorXd y = random_matrix(t, 1, rng) + 0.3 * x;
    const double r = rho_pearson(x, y);
    CHECK(r == rho_pearson(y, x));
    CHECK(std::abs(r) <= 1.0);
    CHECK(r == Approx(oracle::pearson_loop(x, y)).epsilon(1e-12));
    double a = n01(rng);
    if (std::abs(a) < 1e-3) a = 1.0;
    const double b = 10.0 * n01(rng);
    const Eigen::VectorXd ax = (a * x.array() + b).matrix();
    CHECK(std::abs(rho_pearson(ax, y) - (a > 0 ? r : -r)) < 1e-12);
  }
}

TEST_CASE("rho_r2 examples") {
  std::mt19937_64 rng(12);
  const Eigen::MatrixXd x = random_matrix(50, 3, rng);

  SUBCASE("perfect fit") {
    const Eigen::MatrixXd y = x * Eigen::Vector3d(1.5, -2.0, 0.25);
    CHECK(rho_r2(x, y, 0.0, true) == Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("nothing explainable") {
    // y orthogonal to the constant column and to x.
    Eigen::MatrixXd design(50, 4);
    design << Eigen::VectorXd::Ones(50), x;
    const auto p = oracle::explicit_projector(design);
    const Eigen::MatrixXd y = p * random_matrix(50, 2, rng);
    CHECK(std::abs(rho_r2(x, y, 0.0, true)) < 1e-9);
  }
  SUBCASE("matches the normal equations") {
    const Eigen::MatrixXd y = x * Eigen::Vector3d(0.5, 1.0, -1.0) + random_matrix(50, 1, rng, 0.8);
    const double want = oracle::r2_normal_equations(x, y, true);
    CHECK(rho_r2(x, y, 0.0, true) == Approx(want).epsilon(1e-8));
    CHECK(rho_r2(x, y, 0.0, false) == Approx(oracle::r2_normal_equations(x, y, false)).epsilon(1e-8));
    // ridge path against the penalized normal equations
    CHECK(rho_r2(x, y, 3.0, true) == Approx(oracle::r2_normal_equations(x, y, true, 3.0)).epsilon(1e-8));
  }
}

TEST_CASE("rho_r2 errors") {
  std::mt19937_64 rng(13);
  CHECK_THROWS_AS(rho_r2(random_matrix(10, 2, rng), Eigen::MatrixXd::Constant(10, 1, 3.0), 0.0, true),
                  DegenerateSeries);
  CHECK_THROWS_AS(rho_r2(random_matrix(3, 3, rng), random_matrix(3, 1, rng), 0.0, true), IllConditioned);
  CHECK_THROWS_AS(rho_r2(random_matrix(3, 3, rng), random_matrix(3, 1, rng), 0.0, false), IllConditioned);
  // ridge is determined even when T <= p
  CHECK_NOTHROW(rho_r2(random_matrix(3, 3, rng), random_matrix(3, 1, rng), 0.5, true));
  CHECK_THROWS_AS(rho_r2(random_matrix(10, 1, rng), random_matrix(10, 1, rng), -1.0, true), ConfigError);
  CHECK_THROWS_AS(rho_r2(random_matrix(10, 1, rng), random_matrix(9, 1, rng), 0.0, true), StructuralError);
}

TEST_CASE("apply_rho dispatch") {
  std::mt19937_64 rng(14);
  const Eigen::MatrixXd x = random_matrix(40, 1, rng);
  CHECK(apply_rho({RhoKind::pearson1d}, x, x) == Approx(1.0).epsilon(1e-15));
  CHECK(apply_rho({RhoKind::linreg_r2}, x, 2.0 * x) == Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(apply_rho({RhoKind::pearson1d}, random_matrix(40, 2, rng), x), ConfigError);

  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd xm = random_matrix(30, 1 + trial % 4, rng);
    const Eigen::MatrixXd y = random_matrix(30, 1 + trial % 3, rng) + xm.leftCols(1) * 0.5;
    RhoMeasure ridge{RhoKind::ridge_r2, 0.0};
    CHECK(std::abs(apply_rho(ridge, xm, y) - apply_rho({RhoKind::linreg_r2}, xm, y)) < 1e-9);
  }
}

TEST_CASE("rho_r2 properties") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index p = 1 + trial % 4;
    const Eigen::MatrixXd x = random_matrix(40, p, rng);
    const Eigen::MatrixXd y = x * random_matrix(p, 2, rng) + random_matrix(40, 2, rng);

    // invertible recombination of x's columns
    Eigen::MatrixXd mix = random_matrix(p, p, rng) + 3.0 * Eigen::MatrixXd::Identity(p, p);
    const double r2 = rho_r2(x, y, 0.0, true);
    CHECK(std::isfinite(r2));
    CHECK(r2 <= 1.0);
    CHECK(std::abs(rho_r2(x * mix, y, 0.0, true) - r2) < 1e-8);

    // training score is nonincreasing along the penalty path
    double prev = r2;
    for (double lambda : {1e-3, 1e-1, 1.0, 10.0, 1e3}) {
      const double cur = rho_r2(x, y, lambda, true);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("standardized ridge is scale-free in x") {
  std::mt19937_64 rng(16);
  const Eigen::MatrixXd x = random_matrix(40, 2, rng);
  const Eigen::MatrixXd y = x.col(0) + random_matrix(40, 1, rng);
  Eigen::MatrixXd scaled = x;
  scaled.col(1) *= 1000.0;
  CHECK(rho_r2(x, y, 2.0, true, true) == Approx(rho_r2(scaled, y, 2.0, true, true)).epsilon(1e-10));
  CHECK(rho_r2(x, y, 2.0, true) != Approx(rho_r2(scaled, y, 2.0, true)).epsilon(1e-6));
}

TEST_CASE("rho kind names") {
  CHECK(parse_rho_kind("pearson") == RhoKind::pearson1d);
  CHECK(parse_rho_kind("linreg") == RhoKind::linreg_r2);
  CHECK(parse_rho_kind("ridge_r2") == RhoKind::ridge_r2);
  CHECK_THROWS_AS(parse_rho_kind("cca"), ConfigError);
}
