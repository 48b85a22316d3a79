#include "parcorr/simulate.hpp"

#include "parcorr/error.hpp"
#include "parcorr/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <type_traits>
#include <variant>

namespace parcorr {

namespace {

using Rng = std::mt19937_64;

Eigen::VectorXd gaussian(std::size_t len, double sd, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(len));
  for (Eigen::Index t = 0; t < v.size(); ++t) v(t) = sd * dist(rng);
  return v;
}

// One autocorrelated series with unit-variance innovations. AR(1) starts
// from its stationary distribution.
Eigen::VectorXd autocorrelated(const NullGenConfig& cfg, Rng& rng) {
  Eigen::VectorXd eps = gaussian(cfg.t_len, 1.0, rng);
  Eigen::VectorXd out(eps.size());
  if (cfg.generator == NullGenerator::ar1) {
    const double phi = cfg.ar_coeff;
    out(0) = eps(0) / std::sqrt(1.0 - phi * phi);
    for (Eigen::Index t = 1; t < out.size(); ++t) out(t) = phi * out(t - 1) + eps(t);
  } else {
    out(0) = eps(0);
    for (Eigen::Index t = 1; t < out.size(); ++t) out(t) = out(t - 1) + eps(t);
  }
  return out;
}

Eigen::MatrixXd autocorrelated_block(const NullGenConfig& cfg, std::size_t cols, Rng& rng) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(cfg.t_len), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < m.cols(); ++c) m.col(c) = autocorrelated(cfg, rng);
  return m;
}

std::string experiment_label(std::size_t i) { return "exp" + std::to_string(i + 1); }

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::fig1: return "fig1";
    case Scenario::fig2: return "fig2";
    case Scenario::fig3: return "fig3";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  if (name == "fig1") return Scenario::fig1;
  if (name == "fig2") return Scenario::fig2;
  if (name == "fig3") return Scenario::fig3;
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

ProjectionMode scenario_mode(Scenario s) {
  return s == Scenario::fig3 ? ProjectionMode::invalid_single : ProjectionMode::valid_joint;
}

EngineConfig scenario_engine_config(Scenario s) {
  EngineConfig cfg;
  cfg.mode = scenario_mode(s);
  cfg.confounder_intercept = false;
  return cfg;
}

void ScenarioConfig::check() const {
  if (n < 1) throw ConfigError("scenario needs n >= 1");
  if (pulse_width < 1) throw ConfigError("pulse_width must be >= 1");
  if (t_len < 4 * pulse_width) {
    throw ConfigError("t_len must be at least 4 * pulse_width (t_len=" + std::to_string(t_len) +
                      ", pulse_width=" + std::to_string(pulse_width) + ")");
  }
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw ConfigError("noise_sd must be finite and >= 0");
  const auto slots = admissible_pulse_starts(t_len, pulse_width).size();
  if (slots < n) {
    throw ConfigError("cannot place " + std::to_string(n) + " distinct pulses of width " +
                      std::to_string(pulse_width) + " in t_len=" + std::to_string(t_len) +
                      " (only " + std::to_string(slots) + " admissible starts)");
  }
}

Eigen::VectorXd step_series(std::size_t t_len) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(t_len));
  const auto half = static_cast<Eigen::Index>(t_len / 2);
  s.tail(s.size() - half).setOnes();
  return s;
}

std::vector<std::size_t> admissible_pulse_starts(std::size_t t_len, std::size_t pulse_width) {
  std::vector<std::size_t> out;
  const std::size_t lo = t_len / 2 + pulse_width;
  if (t_len < 2 * pulse_width) return out;
  const std::size_t hi = t_len - 2 * pulse_width;
  for (std::size_t s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

std::vector<std::size_t> pulse_starts(const ScenarioConfig& cfg) {
  cfg.check();
  auto slots = admissible_pulse_starts(cfg.t_len, cfg.pulse_width);
  Rng rng(cfg.seed);
  std::shuffle(slots.begin(), slots.end(), rng);
  slots.resize(cfg.n);
  return slots;
}

Dataset gen_scenario(const ScenarioConfig& cfg) {
  cfg.check();
  auto slots = admissible_pulse_starts(cfg.t_len, cfg.pulse_width);
  Rng rng(cfg.seed);
  std::shuffle(slots.begin(), slots.end(), rng);

  const Eigen::VectorXd s0 = step_series(cfg.t_len);
  std::vector<Experiment> exps;
  exps.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    Eigen::VectorXd pulse = Eigen::VectorXd::Zero(s0.size());
    pulse.segment(static_cast<Eigen::Index>(slots[i]), static_cast<Eigen::Index>(cfg.pulse_width))
        .setOnes();
    Eigen::VectorXd x = s0 + pulse;
    Eigen::VectorXd y = x;
    if (cfg.noise_sd > 0.0) {
      x += gaussian(cfg.t_len, cfg.noise_sd, rng);
      y += gaussian(cfg.t_len, cfg.noise_sd, rng);
    }
    const Eigen::VectorXd& z = cfg.scenario == Scenario::fig1 ? s0 : pulse;
    exps.push_back({SeriesMatrix::column(x), SeriesMatrix::column(y), SeriesMatrix::column(z),
                    experiment_label(i)});
  }
  return Dataset(std::move(exps));
}

std::string_view to_string(NullGenerator g) {
  return g == NullGenerator::ar1 ? "ar1" : "randomwalk";
}

NullGenerator parse_null_generator(std::string_view name) {
  if (name == "ar1") return NullGenerator::ar1;
  if (name == "randomwalk" || name == "random_walk") return NullGenerator::random_walk;
  throw ConfigError("unknown null generator '" + std::string(name) + "'");
}

void NullGenConfig::check() const {
  if (n < 1) throw ConfigError("null generator needs n >= 1");
  if (t_len < 2) throw ConfigError("null generator needs t_len >= 2");
  if (p < 1 || q < 1) throw ConfigError("null generator needs p >= 1 and q >= 1");
  if (generator == NullGenerator::ar1 && !(ar_coeff > -1.0 && ar_coeff < 1.0)) {
    throw ConfigError("ar_coeff must lie in (-1, 1), got " + std::to_string(ar_coeff));
  }
  if (!std::isfinite(w_scale) || !std::isfinite(x_z_coupling)) {
    throw ConfigError("w_scale and x_z_coupling must be finite");
  }
}

Dataset gen_null(const NullGenConfig& cfg) {
  cfg.check();
  Rng rng(cfg.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  const auto t = static_cast<Eigen::Index>(cfg.t_len);

  std::vector<Experiment> exps;
  exps.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const Eigen::MatrixXd z = autocorrelated_block(cfg, cfg.r, rng);

    // X shares the confounder (column k of X loads on Z column k mod r).
    Eigen::MatrixXd x = autocorrelated_block(cfg, cfg.p, rng);
    if (cfg.r > 0) {
      for (Eigen::Index c = 0; c < x.cols(); ++c) {
        x.col(c) += cfg.x_z_coupling * z.col(c % static_cast<Eigen::Index>(cfg.r));
      }
    }

    Eigen::MatrixXd w(static_cast<Eigen::Index>(cfg.r), static_cast<Eigen::Index>(cfg.q));
    for (Eigen::Index k = 0; k < w.size(); ++k) w.data()[k] = cfg.w_scale * unit(rng);
    const Eigen::MatrixXd e = autocorrelated_block(cfg, cfg.q, rng);
    Eigen::MatrixXd y = e;
    if (cfg.r > 0) y += z * w;

    exps.push_back({SeriesMatrix(std::move(x)), SeriesMatrix(std::move(y)),
                    cfg.r > 0 ? SeriesMatrix(z) : SeriesMatrix::empty(static_cast<std::size_t>(t)),
                    experiment_label(i)});
  }
  return Dataset(std::move(exps));
}

Dataset generate(const DataGenConfig& cfg, std::uint64_t seed) {
  return std::visit(
      [seed](auto c) {
        c.seed = seed;
        if constexpr (std::is_same_v<decltype(c), ScenarioConfig>) {
          return gen_scenario(c);
        } else {
          return gen_null(c);
        }
      },
      cfg);
}

std::uint64_t master_seed(const DataGenConfig& cfg) {
  return std::visit([](const auto& c) { return c.seed; }, cfg);
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  const auto n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  std::size_t neg = 0;
  for (double v : values) {
    ss += (v - s.mean) * (v - s.mean);
    if (v < 0.0) ++neg;
  }
  s.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  s.fraction_negative = static_cast<double>(neg) / n;
  return s;
}

namespace {

[[noreturn]] void rethrow_tagged(std::size_t rep, std::uint64_t seed) {
  const std::string tag = "rep " + std::to_string(rep) + " (seed " + std::to_string(seed) + "): ";
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(tag + e.what());
  } catch (const DegenerateSeries& e) {
    throw DegenerateSeries(tag + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(tag + e.what());
  } catch (const Error& e) {
    throw Error(tag + e.what());
  }
}

}  // namespace

MonteCarloResult monte_carlo(const MonteCarloConfig& cfg) {
  if (cfg.reps < 1) throw ConfigError("monte carlo needs reps >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");

  EngineConfig engine = cfg.engine;
  engine.threads = 1;
  if (const auto* sc = std::get_if<ScenarioConfig>(&cfg.datagen); sc && sc->scenario == Scenario::fig3) {
    engine.mode = ProjectionMode::invalid_single;
  }

  const std::uint64_t master = master_seed(cfg.datagen);
  MonteCarloResult out;
  out.reps = cfg.reps;
  out.alpha = cfg.alpha;
  out.seeds.resize(cfg.reps);
  out.p_values.resize(cfg.reps);
  out.mean_g_values.resize(cfg.reps);
  std::vector<std::size_t> naive_rejects(cfg.reps, 0);
  std::vector<std::size_t> naive_tests(cfg.reps, 0);

  parallel_for(cfg.reps, resolve_threads(cfg.threads), [&](std::size_t k) {
    const std::uint64_t seed = master + k;
    out.seeds[k] = seed;
    try {
      const Dataset d = generate(cfg.datagen, seed);
      const auto rep = run_test(d, engine);
      out.p_values[k] = rep.p_value;
      out.mean_g_values[k] = rep.mean_g;
      if (cfg.naive_baseline) {
        for (const auto& e : d.experiments()) {
          try {
            const auto nr = naive_partial_pearson(e, engine.confounder_intercept, engine.rank_tol);
            ++naive_tests[k];
            if (nr.p_value < cfg.alpha) ++naive_rejects[k];
          } catch (const DegenerateSeries&) {
            // X or Y fully explained by Z: the naive test is undefined here.
          }
        }
      }
    } catch (const Error&) {
      rethrow_tagged(k, seed);
    }
  });

  for (double p : out.p_values)
    if (p < cfg.alpha) ++out.rejections;
  out.rejection_rate = static_cast<double>(out.rejections) / static_cast<double>(cfg.reps);
  out.mean_g = summarize(out.mean_g_values);
  if (cfg.naive_baseline) {
    const auto tests = std::accumulate(naive_tests.begin(), naive_tests.end(), std::size_t{0});
    const auto rejects = std::accumulate(naive_rejects.begin(), naive_rejects.end(), std::size_t{0});
    out.naive_tests = tests;
    if (tests > 0) out.naive_rejection_rate = static_cast<double>(rejects) / static_cast<double>(tests);
  }
  return out;
}

}  // namespace parcorr
