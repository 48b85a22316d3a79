#include "parcorr/csv.hpp"
#include "parcorr/error.hpp"
#include "parcorr/report_io.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace parcorr {

namespace fs = std::filesystem;

namespace {

std::string safe_name(const std::string& label) {
  std::string out = label;
  std::replace_if(out.begin(), out.end(),
                  [](char c) { return !(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'); },
                  '_');
  return out;
}

std::vector<std::string> column_header(const char* prefix, Eigen::Index cols) {
  std::vector<std::string> h;
  for (Eigen::Index c = 0; c < cols; ++c) h.push_back(prefix + std::to_string(c));
  return h;
}

}  // namespace

void emit_plot_data(const Dataset& d, const TestReport& report, const fs::path& out_dir) {
  if (d.size() < 2) {
    throw ValidationError("plot data needs at least two experiments, got " + std::to_string(d.size()));
  }
  if (report.g.size() != d.size()) {
    throw StructuralError("report has " + std::to_string(report.g.size()) + " G values for " +
                          std::to_string(d.size()) + " experiments");
  }
  EngineConfig cfg;
  cfg.mode = report.mode;
  cfg.rho = report.rho;
  cfg.confounder_intercept = report.confounder_intercept;
  cfg.rank_tol = report.rank_tol;
  // Compute before touching the filesystem so a failure writes nothing.
  const Eigen::MatrixXd resid = pair_residual(d, 0, 1, cfg);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + out_dir.string() + "': " + ec.message());

  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& e = d[i];
    const std::string stem = "exp" + std::to_string(i + 1) + "_" + safe_name(e.label);
    write_csv(e.x.values(), out_dir / (stem + "_x.csv"), column_header("x", e.x.values().cols()));
    write_csv(e.y.values(), out_dir / (stem + "_y.csv"), column_header("y", e.y.values().cols()));
    if (e.z.n_cols() > 0) {
      write_csv(e.z.values(), out_dir / (stem + "_z.csv"), column_header("z", e.z.values().cols()));
    }
  }
  write_csv(resid, out_dir / "residual_pair_1_2.csv", column_header("resid", resid.cols()));

  std::string g = "index,label,g\n";
  for (std::size_t i = 0; i < report.g.size(); ++i) {
    g += std::to_string(i + 1) + "," + (i < report.labels.size() ? report.labels[i] : d[i].label) +
         "," + format_double(report.g[i]) + "\n";
  }
  write_text_file(out_dir / "g_values.csv", g);

  std::string qq = "theoretical,empirical\n";
  for (const auto& p : report.qq_points) qq += format_double(p.theoretical) + "," + format_double(p.empirical) + "\n";
  write_text_file(out_dir / "qq.csv", qq);
}

}  // namespace parcorr
