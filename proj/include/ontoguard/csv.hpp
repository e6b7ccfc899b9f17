#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace ontoguard {

/// One parsed CSV record with the 1-based line it started on.
struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// RFC 4180 reader: comma separated, double-quoted fields with "" escapes,
/// CRLF or LF line ends. Blank lines are skipped.
inline std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;  // UTF-8 BOM

  while (i < text.size()) {
    CsvRow row;
    row.line = line;
    std::string field;
    bool quoted_field = false;
    while (true) {
      if (i < text.size() && text[i] == '"' && field.empty() && !quoted_field) {
        quoted_field = true;
        std::size_t start_line = line;
        ++i;
        while (true) {
          if (i >= text.size()) throw ParseError("unterminated quoted field", start_line, 1);
          char c = text[i];
          if (c == '"') {
            if (i + 1 < text.size() && text[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (c == '\n') ++line;
          field += c;
          ++i;
        }
        if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
          throw ParseError("unexpected character after closing quote", line, 1, std::string(1, text[i]));
        continue;
      }
      if (i >= text.size() || text[i] == '\n' || text[i] == '\r') {
        row.fields.push_back(std::move(field));
        if (i < text.size() && text[i] == '\r') ++i;
        if (i < text.size() && text[i] == '\n') ++i;
        ++line;
        break;
      }
      if (text[i] == ',') {
        row.fields.push_back(std::move(field));
        field.clear();
        quoted_field = false;
        ++i;
        continue;
      }
      field += text[i++];
    }
    bool blank = row.fields.size() == 1 && row.fields[0].empty() && !quoted_field;
    if (!blank) rows.push_back(std::move(row));
  }
  return rows;
}

/// Quotes a field only when it contains a comma, quote or line break.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace ontoguard
