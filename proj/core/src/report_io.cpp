#include "parcorr/report_io.hpp"

#include "parcorr/error.hpp"
#include "parcorr/version.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <type_traits>
#include <variant>

namespace parcorr {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json rho_json(const RhoMeasure& rho) {
  return {{"kind", std::string(to_string(rho.kind))},
          {"ridge_lambda", rho.ridge_lambda},
          {"add_intercept", rho.add_intercept},
          {"standardize", rho.standardize}};
}

json summary_json(const Summary& s) {
  return {{"mean", number(s.mean)},     {"sd", number(s.sd)},
          {"min", number(s.min)},       {"median", number(s.median)},
          {"max", number(s.max)},       {"fraction_negative", s.fraction_negative}};
}

}  // namespace

std::string report_to_json(const TestReport& r, int indent) {
  json doc;
  json g = json::array();
  for (double v : r.g) g.push_back(number(v));
  json qq = json::array();
  for (const auto& p : r.qq_points) qq.push_back(json::array({number(p.theoretical), number(p.empirical)}));

  doc["g"] = std::move(g);
  doc["mean_g"] = number(r.mean_g);
  doc["t_stat"] = number(r.t_stat);
  doc["df"] = r.df;
  doc["p_value"] = r.p_value;
  doc["skewness"] = number(r.skewness);
  doc["qq_points"] = std::move(qq);
  doc["mode"] = std::string(to_string(r.mode));
  doc["rho"] = rho_json(r.rho);
  doc["confounder_intercept"] = r.confounder_intercept;
  doc["rank_tol"] = r.rank_tol;
  doc["sidedness"] = std::string(to_string(r.sidedness));
  doc["alpha"] = r.alpha;
  doc["reject"] = r.reject;
  doc["n"] = r.n;
  doc["t_len"] = r.t_len;
  doc["labels"] = r.labels;
  doc["warnings"] = r.warnings.empty() ? json::array() : json(r.warnings);
  doc["tool_version"] = kVersion;
  return doc.dump(indent);
}

void write_report(const TestReport& report, const std::filesystem::path& path) {
  write_text_file(path, report_to_json(report) + "\n");
}

std::string calibration_to_json(const MonteCarloConfig& cfg, const MonteCarloResult& r, int indent) {
  json gen = std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ScenarioConfig>) {
          return {{"type", "scenario"},        {"scenario", std::string(to_string(c.scenario))},
                  {"n", c.n},                  {"t_len", c.t_len},
                  {"pulse_width", c.pulse_width}, {"noise_sd", c.noise_sd},
                  {"seed", c.seed}};
        } else {
          return {{"type", "null"},           {"generator", std::string(to_string(c.generator))},
                  {"ar_coeff", c.ar_coeff},   {"n", c.n},
                  {"t_len", c.t_len},         {"p", c.p},
                  {"q", c.q},                 {"r", c.r},
                  {"w_scale", c.w_scale},     {"x_z_coupling", c.x_z_coupling},
                  {"seed", c.seed}};
        }
      },
      cfg.datagen);

  json doc;
  doc["generator"] = std::move(gen);
  doc["mode"] = std::string(to_string(cfg.engine.mode));
  if (const auto* sc = std::get_if<ScenarioConfig>(&cfg.datagen); sc && sc->scenario == Scenario::fig3) {
    doc["mode"] = std::string(to_string(ProjectionMode::invalid_single));
  }
  doc["rho"] = rho_json(cfg.engine.rho);
  doc["confounder_intercept"] = cfg.engine.confounder_intercept;
  doc["reps"] = r.reps;
  doc["alpha"] = r.alpha;
  doc["rejections"] = r.rejections;
  doc["rejection_rate"] = r.rejection_rate;
  doc["mean_g_summary"] = summary_json(r.mean_g);
  doc["naive_rejection_rate"] = r.naive_rejection_rate ? json(*r.naive_rejection_rate) : json(nullptr);
  doc["naive_tests"] = r.naive_tests;
  doc["seeds"] = r.seeds;
  json p = json::array();
  for (double v : r.p_values) p.push_back(number(v));
  doc["p_values"] = std::move(p);
  json mg = json::array();
  for (double v : r.mean_g_values) mg.push_back(number(v));
  doc["mean_g_values"] = std::move(mg);
  doc["tool_version"] = kVersion;
  return doc.dump(indent);
}

void write_calibration(const MonteCarloConfig& cfg, const MonteCarloResult& result,
                       const std::filesystem::path& path) {
  write_text_file(path, calibration_to_json(cfg, result) + "\n");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace parcorr
