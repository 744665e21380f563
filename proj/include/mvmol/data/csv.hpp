#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mvmol::data {

/// RFC 4180 style: quoted fields may hold the delimiter, doubled quotes and
/// newlines. CRLF and LF both end a record. Blank lines are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based physical line where each row starts

  /// Column index by exact header name, or npos.
  std::size_t column(std::string_view name) const;
};

/// Throws std::runtime_error on an unterminated quote or a row whose field
/// count differs from the header.
CsvTable parse_csv(std::string_view text, char delimiter = ',');

std::string csv_field(std::string_view value, char delimiter = ',');
std::string csv_line(const std::vector<std::string>& fields, char delimiter = ',');

}  // namespace mvmol::data
