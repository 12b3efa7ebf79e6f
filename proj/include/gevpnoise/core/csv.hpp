#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/text.hpp"

namespace gevpnoise::csv {

/// Splits one CSV record. Fields may be wrapped in double quotes, with `""`
/// standing for a literal quote.
inline std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw FormatError("CSV: unterminated quote");
  out.push_back(std::move(field));
  return out;
}

/// Header plus rows; `#` lines are skipped.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw FormatError("CSV: missing column '" + std::string(name) + "'");
  }

  static Table parse(std::string_view content) {
    Table t;
    bool have_header = false;
    for (const auto& raw : text::split(content, '\n')) {
      if (raw.empty() || raw.front() == '#') continue;
      auto fields = split_line(raw);
      if (!have_header) {
        t.header = std::move(fields);
        have_header = true;
        continue;
      }
      if (fields.size() != t.header.size())
        throw FormatError("CSV: row has " + std::to_string(fields.size()) + " fields, header has " +
                          std::to_string(t.header.size()));
      t.rows.push_back(std::move(fields));
    }
    if (!have_header) throw FormatError("CSV: no header");
    return t;
  }

  static Table from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open CSV file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }
};

}  // namespace gevpnoise::csv
