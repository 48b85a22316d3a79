#pragma once

#include "parcorr/dataset.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace parcorr {

inline constexpr int kManifestVersion = 1;

// JSON manifest:
//   {"version": 1,
//    "experiments": [{"label": "s1", "x_path": "s1_x.csv",
//                     "y_path": "s1_y.csv", "z_path": "s1_z.csv"}, ...]}
// z_path is optional. Relative paths resolve against the manifest's directory.
struct ManifestEntry {
  std::string label;
  std::filesystem::path x_path;
  std::filesystem::path y_path;
  std::optional<std::filesystem::path> z_path;
};

struct Manifest {
  int version = kManifestVersion;
  std::vector<ManifestEntry> experiments;
};

// Parses and checks the schema (version, unique labels). Paths are returned
// as written. Throws ParseError.
Manifest parse_manifest(std::string_view json_text, std::string_view source = "<memory>");

Manifest read_manifest(const std::filesystem::path& path);

// Reads every series and validates the assembled dataset. Missing files
// throw IoError, bad CSV ParseError, failed validation ValidationError.
Dataset load_manifest(const std::filesystem::path& path);

void write_manifest(const Manifest& m, const std::filesystem::path& path);

// Writes one CSV per series plus manifest.json into dir.
void dump_dataset(const Dataset& d, const std::filesystem::path& dir);

}  // namespace parcorr
