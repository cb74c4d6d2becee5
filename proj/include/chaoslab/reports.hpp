#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "chaoslab/mc_engine.hpp"
#include "chaoslab/moments.hpp"

namespace chaoslab {

/// One output row: ordered (column, value) pairs. Values are numbers or text.
struct Row {
  std::vector<std::pair<std::string, std::string>> cells;
  std::vector<bool> numeric;  // parallel to cells

  void add(const std::string& key, double value);
  void add(const std::string& key, long long value);
  void add_text(const std::string& key, const std::string& value);
};

/// Shortest decimal with 17 significant digits.
std::string format_double(double v);

/// Columns q, N, second, third, fourth, gamma_statistic, c_r_l..., l4,
/// middle_dev, middle_dev_reflected, a_prime, r_term.
Row report_row(std::size_t cells, const MomentReport& m, const DiagnosticsReport& d);
/// mc_draws, mc_m1..mc_m4, mc_se1..mc_se4.
void append_mc_columns(Row& row, const McResult& r);

/// key=value lines.
void write_key_values(std::ostream& out, const Row& row);
/// Header from the first row; all rows must share its columns.
void write_csv(std::ostream& out, const std::vector<Row>& rows);
/// Array of objects mirroring the CSV columns.
void write_json(std::ostream& out, const std::vector<Row>& rows);

}  // namespace chaoslab
