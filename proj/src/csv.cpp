#include "seqgibbs/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "seqgibbs/errors.hpp"

namespace seqgibbs {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& raw, std::size_t row, std::size_t col) {
  const std::string cell = trim(raw);
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;  // from_chars rejects leading '+'
  double value = 0.0;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last)
    throw DataError("csv: non-numeric cell at row " + std::to_string(row + 1) +
                    ", column " + std::to_string(col + 1) + " ('" + cell + "')");
  return value;
}

}  // namespace

LoadedCsv load_matrix_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open '" + path + "'");

  LoadedCsv out;
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t expected_cols = 0;
  std::size_t line_index = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      ++line_index;
      continue;
    }
    const std::vector<std::string> cells = split_line(line);
    if (header_pending) {
      for (const auto& c : cells) out.column_names.push_back(trim(c));
      expected_cols = cells.size();
      header_pending = false;
      ++line_index;
      continue;
    }
    if (expected_cols == 0) expected_cols = cells.size();
    if (cells.size() != expected_cols)
      throw DataError("csv: ragged row " + std::to_string(line_index + 1) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(expected_cols));
    std::vector<double> parsed;
    parsed.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      parsed.push_back(parse_cell(cells[c], rows.size(), c));
    rows.push_back(std::move(parsed));
    ++line_index;
  }
  if (rows.empty()) throw DataError("csv: no data rows in '" + path + "'");

  out.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(expected_cols));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < expected_cols; ++c)
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return out;
}

std::string format_double(double value) {
  char buffer[40];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, res.ptr);
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& column_names) {
  std::ofstream out(path);
  if (!out) throw DataError("csv: cannot write '" + path + "'");
  if (!column_names.empty()) {
    if (static_cast<Eigen::Index>(column_names.size()) != values.cols())
      throw std::invalid_argument("write_matrix_csv: header width mismatch");
    for (std::size_t c = 0; c < column_names.size(); ++c) {
      if (c) out << ',';
      out << column_names[c];
    }
    out << '\n';
  }
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c) out << ',';
      out << format_double(values(r, c));
    }
    out << '\n';
  }
  if (!out) throw DataError("csv: write failed for '" + path + "'");
}

}  // namespace seqgibbs
