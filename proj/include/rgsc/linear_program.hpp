#pragma once

#include <limits>
#include <string>
#include <vector>

namespace rgsc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Solver-facing problem: min c'x + offset  s.t.  row_lower <= Ax <= row_upper,
/// col_lower <= x <= col_upper, x_j integer where is_integer[j].
/// A is stored row-wise (CSR).
struct LinearProgram {
  std::string name = "RGSC";
  std::vector<double> cost;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<char> is_integer;
  std::vector<std::string> col_names;

  std::vector<std::size_t> row_start{0};
  std::vector<int> row_index;
  std::vector<double> row_value;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
  std::vector<std::string> row_names;

  double objective_offset = 0.0;

  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(row_lower.size()); }
  std::size_t num_nonzeros() const { return row_value.size(); }

  int add_col(double c, double lo, double hi, bool integer, std::string name = {}) {
    cost.push_back(c);
    col_lower.push_back(lo);
    col_upper.push_back(hi);
    is_integer.push_back(integer ? 1 : 0);
    col_names.push_back(std::move(name));
    return num_cols() - 1;
  }

  /// Entries with zero coefficient are dropped.
  int add_row(const std::vector<std::pair<int, double>>& entries, double lo, double hi,
              std::string name = {}) {
    for (const auto& [col, val] : entries) {
      if (val == 0.0) continue;
      row_index.push_back(col);
      row_value.push_back(val);
    }
    row_start.push_back(row_index.size());
    row_lower.push_back(lo);
    row_upper.push_back(hi);
    row_names.push_back(std::move(name));
    return num_rows() - 1;
  }

  double objective(const std::vector<double>& x) const {
    double z = objective_offset;
    for (std::size_t j = 0; j < cost.size(); ++j) z += cost[j] * x[j];
    return z;
  }

  double row_activity(int r, const std::vector<double>& x) const {
    double a = 0.0;
    for (std::size_t p = row_start[r]; p < row_start[r + 1]; ++p) a += row_value[p] * x[row_index[p]];
    return a;
  }
};

}  // namespace rgsc
