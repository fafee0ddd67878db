#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace trustrpl::csv {

/// A header plus rows of already-formatted cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::size_t column(std::string_view name) const;

  bool operator==(const Table&) const = default;
};

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
double parse_double(std::string_view text);

/// RFC 4180 text with LF line endings.
std::string to_string(const Table& table);
Table parse(std::string_view text);

void write(const std::filesystem::path& path, const Table& table);
Table read(const std::filesystem::path& path);

}  // namespace trustrpl::csv
