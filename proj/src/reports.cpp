#include "chaoslab/reports.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

#include "chaoslab/errors.hpp"

namespace chaoslab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Row::add(const std::string& key, double value) {
  cells.emplace_back(key, format_double(value));
  numeric.push_back(true);
}

void Row::add(const std::string& key, long long value) {
  cells.emplace_back(key, std::to_string(value));
  numeric.push_back(true);
}

void Row::add_text(const std::string& key, const std::string& value) {
  cells.emplace_back(key, value);
  numeric.push_back(false);
}

Row report_row(std::size_t cells, const MomentReport& m, const DiagnosticsReport& d) {
  Row row;
  row.add("q", static_cast<long long>(m.q));
  row.add("N", static_cast<long long>(cells));
  row.add("second", m.second);
  row.add("third", m.third);
  row.add("fourth", m.fourth);
  row.add("gamma_statistic", m.gamma_statistic);
  for (const auto& [key, value] : d.contraction_norms) {
    row.add("c_" + std::to_string(key.first) + "_" + std::to_string(key.second), value);
  }
  row.add("l4", d.l4);
  row.add("middle_dev", d.middle_deviation);
  row.add("middle_dev_reflected", d.middle_deviation_reflected);
  row.add("a_prime", d.a_prime);
  row.add("r_term", d.r_term);
  return row;
}

void append_mc_columns(Row& row, const McResult& r) {
  row.add("mc_draws", static_cast<long long>(r.draws));
  for (int k = 0; k < 4; ++k) row.add("mc_m" + std::to_string(k + 1), r.moment[static_cast<std::size_t>(k)]);
  for (int k = 0; k < 4; ++k) {
    row.add("mc_se" + std::to_string(k + 1), r.standard_error[static_cast<std::size_t>(k)]);
  }
}

void write_key_values(std::ostream& out, const Row& row) {
  for (const auto& [key, value] : row.cells) out << key << '=' << value << '\n';
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<Row>& rows) {
  if (rows.empty()) return;
  const auto& head = rows.front().cells;
  for (std::size_t i = 0; i < head.size(); ++i) out << (i ? "," : "") << csv_field(head[i].first);
  out << '\n';
  for (const Row& row : rows) {
    if (row.cells.size() != head.size()) throw ShapeError("write_csv: rows disagree on columns");
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      if (row.cells[i].first != head[i].first) throw ShapeError("write_csv: rows disagree on columns");
      out << (i ? "," : "") << csv_field(row.cells[i].second);
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<Row>& rows) {
  out << "[\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    out << "  {";
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      const auto& [key, value] = row.cells[i];
      out << (i ? ", " : "") << nlohmann::json(key).dump() << ": ";
      const bool number = i < row.numeric.size() && row.numeric[i];
      if (number && (value == "nan" || value == "inf" || value == "-inf")) {
        out << "null";
      } else if (number) {
        out << value;
      } else {
        out << nlohmann::json(value).dump();
      }
    }
    out << (r + 1 < rows.size() ? "},\n" : "}\n");
  }
  out << "]\n";
}

}  // namespace chaoslab
