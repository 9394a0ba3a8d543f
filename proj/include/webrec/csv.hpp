#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "webrec/errors.hpp"

// Small CSV layer shared by the persistence formats: '#'-prefixed "key = value"
// comment lines, one header row, numeric/string cells. Doubles are written with
// %.17g so files round-trip bit-exactly and reruns are byte-identical.

namespace webrec::csv {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;  // comment key/value pairs
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  const std::string& meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta)
      if (k == key) return v;
    throw RangeError("csv: missing metadata key '" + key + "'");
  }

  bool has_meta(const std::string& key) const {
    for (const auto& [k, v] : meta)
      if (k == key) return true;
    return false;
  }

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw RangeError("csv: missing column '" + name + "'");
  }

  std::vector<double> numeric_column(const std::string& name) const {
    const std::size_t j = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(std::stod(r.at(j)));
    return out;
  }
};

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

inline Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RangeError("csv: cannot open '" + path + "'");
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      std::string body = trim(s.substr(1));
      const std::size_t eq = body.find('=');
      if (eq != std::string::npos)
        t.meta.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
      continue;
    }
    if (!have_header) {
      t.columns = split(s, ',');
      have_header = true;
    } else {
      t.rows.push_back(split(s, ','));
    }
  }
  if (!have_header) throw RangeError("csv: no header row in '" + path + "'");
  return t;
}

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path) {
    if (!out_) throw RangeError("csv: cannot open '" + path + "' for writing");
  }

  void comment(const std::string& key, const std::string& value) {
    out_ << "# " << key << " = " << value << "\n";
  }

  void header(const std::string& h) { out_ << h << "\n"; }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

}  // namespace webrec::csv
