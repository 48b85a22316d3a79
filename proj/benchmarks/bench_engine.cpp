#include <parcorr/engine.hpp>
#include <parcorr/projection.hpp>
#include <parcorr/simulate.hpp>
#include <parcorr/student_t.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace parcorr;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n01(rng);
  return m;
}

Dataset null_dataset(std::size_t n, std::size_t t, std::size_t r) {
  NullGenConfig cfg;
  cfg.n = n;
  cfg.t_len = t;
  cfg.r = r;
  cfg.seed = 7;
  return gen_null(cfg);
}

}  // namespace

static void BM_OrthonormalBasis(benchmark::State& state) {
  const auto z = gaussian(state.range(0), state.range(1), 1);
  for (auto _ : state) benchmark::DoNotOptimize(orthonormal_basis(z));
}
BENCHMARK(BM_OrthonormalBasis)->Args({100, 2})->Args({1000, 4})->Args({1000, 16});

static void BM_Residualize(benchmark::State& state) {
  const auto z = gaussian(state.range(0), 4, 2);
  const auto y = gaussian(state.range(0), 1, 3);
  const auto basis = orthonormal_basis(z);
  for (auto _ : state) benchmark::DoNotOptimize(residualize(y, basis));
}
BENCHMARK(BM_Residualize)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_PairTables(benchmark::State& state) {
  const auto d = null_dataset(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 2);
  EngineConfig cfg;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(pair_tables(d, cfg));
}
BENCHMARK(BM_PairTables)->Args({10, 100})->Args({30, 100})->Args({100, 100})->Args({30, 1000});

static void BM_PairTablesThreaded(benchmark::State& state) {
  const auto d = null_dataset(100, 200, 2);
  EngineConfig cfg;
  cfg.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pair_tables(d, cfg));
}
BENCHMARK(BM_PairTablesThreaded)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

static void BM_RunTestFig1(benchmark::State& state) {
  ScenarioConfig sc;
  sc.noise_sd = 0.5;
  const auto d = gen_scenario(sc);
  const auto cfg = scenario_engine_config(Scenario::fig1);
  for (auto _ : state) benchmark::DoNotOptimize(run_test(d, cfg));
}
BENCHMARK(BM_RunTestFig1);

static void BM_StudentT(benchmark::State& state) {
  double t = -10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(student_t_two_sided(t, 9.0));
    t = t > 10.0 ? -10.0 : t + 0.37;
  }
}
BENCHMARK(BM_StudentT);

static void BM_MonteCarloNull(benchmark::State& state) {
  NullGenConfig ng;
  ng.seed = 3;
  MonteCarloConfig mc;
  mc.datagen = ng;
  mc.reps = static_cast<std::size_t>(state.range(0));
  mc.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo(mc));
}
BENCHMARK(BM_MonteCarloNull)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
