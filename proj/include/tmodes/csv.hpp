#pragma once
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Tabular output: '#'-prefixed metadata lines (key = value), a header row of
// column names, then comma-separated numeric rows printed with 17 significant
// digits so values round-trip exactly through text.

namespace tmodes {

struct CsvSeries {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void validate() const {
    if (columns.empty()) throw std::domain_error("CsvSeries: no columns");
    for (const auto& r : rows)
      if (r.size() != columns.size())
        throw std::domain_error("CsvSeries: ragged row (expected " +
                                std::to_string(columns.size()) + " fields, got " +
                                std::to_string(r.size()) + ")");
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (!(rows[i][0] > rows[i - 1][0]))
        throw std::domain_error("CsvSeries: first column must be strictly increasing");
  }

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw std::domain_error("CsvSeries: no column named '" + name + "'");
  }
};

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv(std::ostream& os, const CsvSeries& s) {
  s.validate();
  for (const auto& [k, v] : s.metadata) os << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < s.columns.size(); ++i)
    os << (i ? "," : "") << s.columns[i];
  os << "\n";
  for (const auto& r : s.rows) {
    for (std::size_t i = 0; i < r.size(); ++i)
      os << (i ? "," : "") << format_double(r[i]);
    os << "\n";
  }
}

inline CsvSeries parse_csv(std::istream& is) {
  CsvSeries s;
  std::string line;
  bool header_seen = false;
  auto trim = [](std::string t) {
    const char* ws = " \t\r\n";
    const auto b = t.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    const auto e = t.find_last_not_of(ws);
    return t.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos)
        s.metadata.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
      else if (!body.empty())
        s.metadata.emplace_back(body, "");
      continue;
    }
    if (!header_seen) {
      std::size_t pos = 0;
      while (pos <= line.size()) {
        const auto c = line.find(',', pos);
        if (c == std::string::npos) {
          s.columns.push_back(trim(line.substr(pos)));
          break;
        }
        s.columns.push_back(trim(line.substr(pos, c - pos)));
        pos = c + 1;
      }
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    const char* p = line.c_str();
    while (true) {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p) throw std::domain_error("parse_csv: bad numeric field in '" + line + "'");
      row.push_back(v);
      while (*end == ' ' || *end == '\t') ++end;
      if (*end == ',') {
        p = end + 1;
      } else if (*end == '\0') {
        break;
      } else {
        throw std::domain_error("parse_csv: trailing junk in '" + line + "'");
      }
    }
    s.rows.push_back(std::move(row));
  }
  if (!header_seen) throw std::domain_error("parse_csv: no header row found");
  s.validate();
  return s;
}

// NaN-aware elementwise comparison (NaN == NaN); used when checking
// round-trips of tables that legitimately contain undefined entries.
inline bool rows_equal(const std::vector<std::vector<double>>& a,
                       const std::vector<std::vector<double>>& b, double tol = 0.0) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      const double x = a[i][j], y = b[i][j];
      if (std::isnan(x) && std::isnan(y)) continue;
      if (!(std::fabs(x - y) <= tol)) return false;
    }
  }
  return true;
}

}  // namespace tmodes
