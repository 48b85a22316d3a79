#include "parcorr/csv.hpp"

#include "parcorr/error.hpp"
#include "parcorr/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace parcorr {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

// Parses a complete cell as a double; nullopt if it is not a number.
std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

std::string at(std::string_view source, std::size_t row, std::size_t col = 0) {
  std::string s = std::string(source) + ":" + std::to_string(row);
  if (col > 0) s += ":" + std::to_string(col);
  return s;
}

}  // namespace

SeriesMatrix parse_csv_series(std::string_view text, std::string_view source) {
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  bool first = true;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;

    const auto cells = split_cells(line);
    std::vector<double> values;
    values.reserve(cells.size());
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_number(cells[c]);
      if (!v) {
        bad_col = c + 1;
        break;
      }
      values.push_back(*v);
    }
    if (first) {
      first = false;
      width = cells.size();
      if (bad_col) continue;  // header row
    } else if (bad_col) {
      throw ParseError(at(source, line_no, bad_col) + ": non-numeric cell '" +
                           std::string(cells[bad_col - 1]) + "'",
                       line_no, bad_col);
    }
    if (cells.size() != width) {
      throw ParseError(at(source, line_no) + ": ragged row with " + std::to_string(cells.size()) +
                           " cells, expected " + std::to_string(width),
                       line_no);
    }
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (!std::isfinite(values[c])) {
        throw ParseError(at(source, line_no, c + 1) + ": non-finite value", line_no, c + 1);
      }
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(std::string(source) + ": no numeric rows");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < width; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return SeriesMatrix(std::move(m));
}

SeriesMatrix load_csv_series(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_series(buf.str(), path.string());
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& header) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out += ',';
    out += header[c];
  }
  if (!header.empty()) out += '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path,
               const std::vector<std::string>& header) {
  write_text_file(path, format_csv(m, header));
}

}  // namespace parcorr
