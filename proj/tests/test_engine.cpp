#include <doctest.h>

#include "oracles.hpp"

#include <parcorr/engine.hpp>
#include <parcorr/error.hpp>
#include <parcorr/simulate.hpp>

#include <algorithm>
#include <numeric>
#include <random>

using namespace parcorr;
using doctest::Approx;
using oracle::random_matrix;

namespace {

Dataset random_dataset(std::mt19937_64& rng, std::size_t n, Eigen::Index t, Eigen::Index p,
                       Eigen::Index q, Eigen::Index r) {
  std::vector<Experiment> e;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::MatrixXd z = random_matrix(t, r, rng);
    Eigen::MatrixXd x = random_matrix(t, p, rng);
    if (r > 0) x.col(0) += z.col(0);
    Eigen::MatrixXd y = random_matrix(t, q, rng);
    if (r > 0) y.col(0) += 0.7 * z.col(0) + 0.2 * x.col(0);
    e.push_back({SeriesMatrix(x), SeriesMatrix(y), SeriesMatrix(z), "e" + std::to_string(i)});
  }
  return Dataset(std::move(e));
}

Dataset permuted(const Dataset& d, const std::vector<std::size_t>& perm) {
  std::vector<Experiment> e;
  for (auto k : perm) e.push_back(d[k]);
  return Dataset(std::move(e));
}

// Pair tables straight from the definition with explicit T x T projectors.
PairTables brute_force_tables(const Dataset& d, const EngineConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(d.size());
  PairTables out;
  out.a.resize(n, n);
  out.b.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto zi = effective_confounder(d[i], cfg);
      const auto zj = effective_confounder(d[j], cfg);
      Eigen::MatrixXd z(zi.rows(), zi.cols() + zj.cols());
      z << zi, zj;
      const Eigen::MatrixXd r = oracle::explicit_projector(cfg.mode == ProjectionMode::valid_joint ? z : zi) *
                                d[i].y.values();
      out.a(i, j) = apply_rho(cfg.rho, d[i].x.values(), r);
      out.b(i, j) = apply_rho(cfg.rho, d[j].x.values(), r);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("pair tables agree with explicit projectors") {
  std::mt19937_64 rng(21);
  for (auto kind : {RhoKind::pearson1d, RhoKind::linreg_r2, RhoKind::ridge_r2}) {
    for (auto mode : {ProjectionMode::valid_joint, ProjectionMode::invalid_single}) {
      const bool pearson = kind == RhoKind::pearson1d;
      const auto d = random_dataset(rng, 5, 40, pearson ? 1 : 3, pearson ? 1 : 2, 2);
      EngineConfig cfg;
      cfg.rho = {kind, 0.7};
      cfg.mode = mode;
      const auto got = pair_tables(d, cfg);
      const auto want = brute_force_tables(d, cfg);
      CHECK((got.a - want.a).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((got.b - want.b).cwiseAbs().maxCoeff() < 1e-9);
      for (Eigen::Index i = 0; i < got.a.rows(); ++i) CHECK(got.a(i, i) == got.b(i, i));
    }
  }
}

TEST_CASE("identical experiments give a == b") {
  std::mt19937_64 rng(22);
  const auto base = random_dataset(rng, 1, 30, 1, 1, 1)[0];
  std::vector<Experiment> e(4, base);
  const auto tables = pair_tables(Dataset(e), EngineConfig{});
  CHECK(tables.a == tables.b);
  for (double g : g_statistics(tables)) CHECK(g == 0.0);
}

TEST_CASE("g_statistics arithmetic") {
  PairTables t;
  t.a = Eigen::MatrixXd::Ones(4, 4);
  t.b = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) t.b(i, i) = 1.0;
  for (double g : g_statistics(t)) CHECK(g == 0.75);

  t.b = t.a;
  for (double g : g_statistics(t)) CHECK(g == 0.0);
}

TEST_CASE("t_test examples") {
  SUBCASE("zero mean") {
    const std::vector<double> g{1, -1, 1, -1};
    const auto r = t_test(g);
    CHECK(r.t_stat == 0.0);
    CHECK(r.p_value == Approx(1.0).epsilon(1e-14));
    CHECK(r.df == 3.0);
  }
  SUBCASE("1..4") {
    const std::vector<double> g{1, 2, 3, 4};
    const auto r = t_test(g);
    // scipy.stats.ttest_1samp([1, 2, 3, 4], 0)
    CHECK(r.t_stat == Approx(3.872983346207417).epsilon(1e-14));
    CHECK(std::abs(r.p_value - 0.030466291662170977) < 1e-12);
    CHECK(r.warnings.empty());
  }
  SUBCASE("constant positive") {
    const std::vector<double> g{0.3, 0.3, 0.3};
    const auto r = t_test(g);
    CHECK(r.p_value == 0.0);
    CHECK(std::isinf(r.t_stat));
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0] == kZeroVarianceWarning);
  }
  SUBCASE("rounding-level values count as zero") {
    const std::vector<double> g{1e-16, -2e-16, 5e-17, 0.0};
    const auto r = t_test(g);
    CHECK(r.p_value == 1.0);
    CHECK(r.warnings.size() == 1);
  }
  SUBCASE("one-sided") {
    const std::vector<double> g{1, 2, 3, 4};
    const auto two = t_test(g);
    CHECK(t_test(g, Sidedness::greater).p_value == Approx(two.p_value / 2).epsilon(1e-12));
    CHECK(t_test(g, Sidedness::less).p_value == Approx(1 - two.p_value / 2).epsilon(1e-12));
    const std::vector<double> c{0.3, 0.3, 0.3};
    CHECK(t_test(c, Sidedness::less).p_value == 1.0);
  }
  SUBCASE("too few values") {
    const std::vector<double> g{1, 2};
    CHECK_THROWS_AS(t_test(g), StructuralError);
  }
}

TEST_CASE("symmetry diagnostics") {
  const std::vector<double> sym{-2, -1, 0, 1, 2};
  CHECK(symmetry_diagnostics(sym).skewness == Approx(0.0));
  CHECK(symmetry_diagnostics(sym).warnings.empty());

  const std::vector<double> skewed{0, 0, 0, 10};
  const auto d = symmetry_diagnostics(skewed);
  // scipy.stats.skew([0, 0, 0, 10]) = 2 / sqrt(3)
  CHECK(d.skewness == Approx(1.1547005383792515).epsilon(1e-14));
  CHECK(d.warnings.size() == 1);

  REQUIRE(d.qq_points.size() == 4);
  const double z[] = {-1.1503493803760079, -0.31863936396437514, 0.31863936396437514, 1.1503493803760079};
  for (int k = 0; k < 4; ++k) CHECK(d.qq_points[k].theoretical == Approx(z[k]).epsilon(1e-12));
  CHECK(d.qq_points[3].empirical == 10.0);

  const std::vector<double> flat{2, 2, 2};
  const auto f = symmetry_diagnostics(flat);
  CHECK(f.skewness == 0.0);
  CHECK(f.warnings.size() == 1);
}

TEST_CASE("swap bookkeeping and projector sharing") {
  std::mt19937_64 rng(23);
  const auto d = random_dataset(rng, 6, 35, 1, 1, 2);
  const EngineConfig cfg;
  const auto t = pair_tables(d, cfg);
  double lhs = 0, rhs = 0;
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) {
      lhs += t.a(i, j) - t.b(i, j);
      rhs += t.a(i, j) - t.b(j, i);
    }
  CHECK(std::abs(lhs - rhs) < 1e-12);
  // b(j, i) uses the same projector as a(i, j), with the arguments of P in
  // the (i, j) order.
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const auto r = joint_residualize(d[j].y.values(), effective_confounder(d[i], cfg),
                                       effective_confounder(d[j], cfg));
      CHECK(std::abs(t.b(Eigen::Index(j), Eigen::Index(i)) - apply_rho(cfg.rho, d[i].x.values(), r)) < 1e-10);
    }
}

TEST_CASE("experiment order equivariance") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = random_dataset(rng, 7, 30, 1, 1, 1);
    std::vector<std::size_t> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto base = run_test(d, EngineConfig{});
    const auto moved = run_test(permuted(d, perm), EngineConfig{});
    for (std::size_t k = 0; k < 7; ++k) CHECK(std::abs(moved.g[k] - base.g[perm[k]]) < 1e-12);
    CHECK(std::abs(moved.t_stat - base.t_stat) < 1e-12 * std::max(1.0, std::abs(base.t_stat)));
    CHECK(std::abs(moved.p_value - base.p_value) < 1e-12);
  }
}

TEST_CASE("empty confounders reduce to rho on raw series") {
  std::mt19937_64 rng(25);
  const auto d = random_dataset(rng, 5, 30, 1, 1, 0);
  EngineConfig cfg;
  cfg.confounder_intercept = false;
  const auto t = pair_tables(d, cfg);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(t.a(Eigen::Index(i), Eigen::Index(j)) == rho_pearson(d[i].x.values().col(0), d[i].y.values().col(0)));
      CHECK(t.b(Eigen::Index(i), Eigen::Index(j)) == rho_pearson(d[j].x.values().col(0), d[i].y.values().col(0)));
    }
  // Pearson ignores the mean, so the intercept-only projection agrees.
  const auto with_mean = pair_tables(d, EngineConfig{});
  CHECK((with_mean.a - t.a).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("figure scenarios through the engine") {
  ScenarioConfig sc;
  sc.n = 3;
  SUBCASE("fig1: same-session residual is more similar") {
    sc.scenario = Scenario::fig1;
    const auto t = pair_tables(gen_scenario(sc), scenario_engine_config(sc.scenario));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(t.a(i, j) > t.b(i, j));
    for (double g : g_statistics(t)) CHECK(g > 0.0);
  }
  SUBCASE("fig2: joint projection leaves nothing to detect") {
    sc.scenario = Scenario::fig2;
    const auto t = pair_tables(gen_scenario(sc), scenario_engine_config(sc.scenario));
    CHECK((t.a - t.b).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("run_test on figure data") {
  ScenarioConfig sc;
  sc.scenario = Scenario::fig1;
  const auto r1 = run_test(gen_scenario(sc), scenario_engine_config(Scenario::fig1));
  CHECK(r1.p_value < 0.01);
  CHECK(r1.reject);

  sc.scenario = Scenario::fig2;
  const auto r2 = run_test(gen_scenario(sc), scenario_engine_config(Scenario::fig2));
  CHECK_FALSE(r2.reject);
  CHECK(std::find(r2.warnings.begin(), r2.warnings.end(), kZeroVarianceWarning) != r2.warnings.end());

  // fig3 on noisy replicates: negative and mostly significant
  int negative_significant = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    sc.scenario = Scenario::fig3;
    sc.noise_sd = 0.5;
    sc.seed = seed;
    const auto r = run_test(gen_scenario(sc), scenario_engine_config(Scenario::fig3));
    if (r.mean_g < 0 && r.p_value < 0.05) ++negative_significant;
  }
  CHECK(negative_significant > 10);
}

TEST_CASE("degenerate pairs") {
  // Y_i lies entirely in the span of Z_i.
  std::mt19937_64 rng(26);
  std::vector<Experiment> e;
  for (int i = 0; i < 4; ++i) {
    const Eigen::MatrixXd z = random_matrix(20, 1, rng);
    e.push_back({SeriesMatrix(random_matrix(20, 1, rng)), SeriesMatrix(2.0 * z), SeriesMatrix(z),
                 "d" + std::to_string(i)});
  }
  const Dataset d(e);
  EngineConfig cfg;
  try {
    run_test(d, cfg);
    FAIL("expected DegenerateSeries");
  } catch (const DegenerateSeries& err) {
    CHECK(std::string(err.what()).find("'d0'") != std::string::npos);
  }
  cfg.degenerate = DegeneratePolicy::zero;
  const auto r = run_test(d, cfg);
  for (double g : r.g) CHECK(g == 0.0);
  CHECK(std::any_of(r.warnings.begin(), r.warnings.end(),
                    [](const std::string& w) { return w.find("replaced by 0") != std::string::npos; }));
}

TEST_CASE("run_test rejects bad input") {
  std::mt19937_64 rng(27);
  CHECK_THROWS_AS(run_test(random_dataset(rng, 2, 20, 1, 1, 1), EngineConfig{}), ValidationError);
  EngineConfig cfg;
  CHECK_THROWS_AS(run_test(random_dataset(rng, 4, 20, 2, 1, 1), cfg), ConfigError);
  cfg.rho.kind = RhoKind::linreg_r2;
  CHECK_NOTHROW(run_test(random_dataset(rng, 4, 20, 2, 1, 1), cfg));
}

TEST_CASE("threaded and serial pair tables are identical") {
  std::mt19937_64 rng(28);
  const auto d = random_dataset(rng, 9, 50, 2, 2, 3);
  EngineConfig cfg;
  cfg.rho.kind = RhoKind::linreg_r2;
  cfg.threads = 1;
  const auto serial = pair_tables(d, cfg);
  cfg.threads = 4;
  const auto threaded = pair_tables(d, cfg);
  CHECK(serial.a == threaded.a);
  CHECK(serial.b == threaded.b);
}

TEST_CASE("naive partial Pearson") {
  std::mt19937_64 rng(29);
  const auto d = random_dataset(rng, 1, 60, 1, 1, 1);
  const auto nr = naive_partial_pearson(d[0]);
  CHECK(nr.df == 57.0);
  CHECK(nr.p_value >= 0.0);
  CHECK(nr.p_value <= 1.0);
  const auto design = with_intercept(d[0].z.values());
  const auto p = oracle::explicit_projector(design);
  CHECK(nr.r == Approx(oracle::pearson_loop(p * d[0].x.values(), p * d[0].y.values())).epsilon(1e-12));
}
