#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace simploscore {

// Plain comma-separated table with a header row. No quoting; none of our schemas need it.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws SchemaError naming the column when it is absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);

// Shortest representation that round-trips exactly.
std::string format_double(double v);
double parse_double(std::string_view text);
std::int64_t parse_int64(std::string_view text);

}  // namespace simploscore
