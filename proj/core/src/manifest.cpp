#include "parcorr/manifest.hpp"

#include "parcorr/csv.hpp"
#include "parcorr/error.hpp"
#include "parcorr/report_io.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace parcorr {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string required_string(const json& obj, const char* key, std::string_view where) {
  if (!obj.contains(key)) throw ParseError(std::string(where) + ": missing key '" + key + "'");
  if (!obj.at(key).is_string()) throw ParseError(std::string(where) + ": '" + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

}  // namespace

Manifest parse_manifest(std::string_view json_text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(source) + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ParseError(std::string(source) + ": manifest must be a JSON object");
  if (!doc.contains("version") || !doc.at("version").is_number_integer()) {
    throw ParseError(std::string(source) + ": missing integer 'version'");
  }
  Manifest m;
  m.version = doc.at("version").get<int>();
  if (m.version != kManifestVersion) {
    throw ParseError(std::string(source) + ": unsupported manifest version " + std::to_string(m.version));
  }
  if (!doc.contains("experiments") || !doc.at("experiments").is_array()) {
    throw ParseError(std::string(source) + ": missing array 'experiments'");
  }
  std::set<std::string> seen;
  std::size_t idx = 0;
  for (const auto& item : doc.at("experiments")) {
    const std::string where = std::string(source) + ": experiments[" + std::to_string(idx++) + "]";
    if (!item.is_object()) throw ParseError(where + " must be an object");
    ManifestEntry e;
    e.label = required_string(item, "label", where);
    e.x_path = required_string(item, "x_path", where);
    e.y_path = required_string(item, "y_path", where);
    if (item.contains("z_path") && !item.at("z_path").is_null()) {
      e.z_path = fs::path(required_string(item, "z_path", where));
    }
    if (!seen.insert(e.label).second) throw ParseError(where + ": duplicate label '" + e.label + "'");
    m.experiments.push_back(std::move(e));
  }
  return m;
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path.string());
}

Dataset load_manifest(const fs::path& path) {
  const Manifest m = read_manifest(path);
  const fs::path base = path.parent_path();
  auto resolve = [&](const fs::path& p) { return p.is_absolute() ? p : base / p; };
  auto load = [&](const ManifestEntry& e, const fs::path& p) {
    const fs::path full = resolve(p);
    if (!fs::exists(full)) {
      throw IoError("experiment '" + e.label + "': file '" + full.string() + "' does not exist");
    }
    return load_csv_series(full);
  };

  std::vector<Experiment> exps;
  exps.reserve(m.experiments.size());
  for (const auto& e : m.experiments) {
    Experiment ex;
    ex.label = e.label;
    ex.x = load(e, e.x_path);
    ex.y = load(e, e.y_path);
    ex.z = e.z_path ? load(e, *e.z_path) : SeriesMatrix::empty(ex.y.t_len());
    exps.push_back(std::move(ex));
  }
  Dataset d(std::move(exps));
  require_valid(d);
  return d;
}

void write_manifest(const Manifest& m, const fs::path& path) {
  json doc;
  doc["version"] = m.version;
  doc["experiments"] = json::array();
  for (const auto& e : m.experiments) {
    json item;
    item["label"] = e.label;
    item["x_path"] = e.x_path.generic_string();
    item["y_path"] = e.y_path.generic_string();
    if (e.z_path) item["z_path"] = e.z_path->generic_string();
    doc["experiments"].push_back(std::move(item));
  }
  write_text_file(path, doc.dump(2) + "\n");
}

void dump_dataset(const Dataset& d, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  Manifest m;
  for (const auto& e : d.experiments()) {
    ManifestEntry entry;
    entry.label = e.label;
    entry.x_path = e.label + "_x.csv";
    entry.y_path = e.label + "_y.csv";
    write_csv(e.x.values(), dir / entry.x_path);
    write_csv(e.y.values(), dir / entry.y_path);
    if (e.z.n_cols() > 0) {
      entry.z_path = fs::path(e.label + "_z.csv");
      write_csv(e.z.values(), dir / *entry.z_path);
    }
    m.experiments.push_back(std::move(entry));
  }
  write_manifest(m, dir / "manifest.json");
}

}  // namespace parcorr
