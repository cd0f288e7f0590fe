#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace seqgibbs {

struct LoadedCsv {
  Eigen::MatrixXd values;
  std::vector<std::string> column_names;  // empty when has_header is false
};

/// Parses a rectangular numeric CSV (decimal or scientific notation).
/// Errors name the offending row/column.
LoadedCsv load_matrix_csv(const std::string& path, bool has_header);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& column_names = {});

}  // namespace seqgibbs
