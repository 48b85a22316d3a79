#include "parcorr/dataset.hpp"

#include "parcorr/error.hpp"

#include <string>

namespace parcorr {

std::string ValidationResult::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    if (!v.label.empty()) out += "[" + v.label + "] ";
    out += v.rule;
    if (!v.detail.empty()) out += " (" + v.detail + ")";
  }
  return out;
}

ValidationResult validate_dataset(const Dataset& d) {
  ValidationResult res;
  const auto n = d.size();
  if (n < kMinExperiments) {
    res.violations.push_back({"", "N below minimum 3", "N=" + std::to_string(n)});
  } else if (n < kFewExperimentsWarning) {
    res.warnings.push_back("N=" + std::to_string(n) +
                           " is below 8: the t-test on G has little power and relies "
                           "heavily on symmetry of G");
  }
  if (d.empty()) return res;

  const auto& first = d[0];
  const std::size_t t_ref = first.y.t_len();
  for (const auto& e : d.experiments()) {
    auto add = [&](std::string rule, std::string detail = {}) {
      res.violations.push_back({e.label, std::move(rule), std::move(detail)});
    };
    if (e.x.t_len() != e.y.t_len() || e.z.t_len() != e.y.t_len()) {
      add("x/y/z t_len differ", "x=" + std::to_string(e.x.t_len()) + " y=" +
                                    std::to_string(e.y.t_len()) + " z=" +
                                    std::to_string(e.z.t_len()));
    }
    if (e.y.t_len() != t_ref) {
      add("t_len mismatch", "T=" + std::to_string(e.y.t_len()) + ", expected " +
                                std::to_string(t_ref) + " from '" + first.label + "'");
    }
    if (e.y.t_len() < 2) add("t_len below 2");
    if (e.x.n_cols() < 1) add("x has no columns");
    if (e.y.n_cols() < 1) add("y has no columns");
    if (!e.x.all_finite()) add("non-finite values", "x");
    if (!e.y.all_finite()) add("non-finite values", "y");
    if (!e.z.all_finite()) add("non-finite values", "z");
  }
  return res;
}

void require_valid(const Dataset& d) {
  auto res = validate_dataset(d);
  if (!res.ok()) throw ValidationError("invalid dataset: " + res.summary());
}

}  // namespace parcorr
