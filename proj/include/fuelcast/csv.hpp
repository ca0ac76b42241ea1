#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace fuelcast::csv {

// Unquoted comma-separated text with a mandatory header row. Blank lines are skipped;
// a trailing '\r' is tolerated. Line numbers are 1-based with the header on line 1.
struct Row {
  std::size_t line;
  std::vector<std::string_view> fields;
};

// Checks the header against `expected` and calls `on_row` for every data row. Rows
// with the wrong field count raise DataError naming the line.
void read(std::string_view text, const std::vector<std::string_view>& expected_header,
          const std::function<void(const Row&)>& on_row);

// Field parsers; errors name the line and column.
double parse_double(const Row& row, std::size_t column, std::string_view name);
std::int64_t parse_int(const Row& row, std::size_t column, std::string_view name);

// Shortest round-trip representation in plain (non-exponent) decimal.
std::string format_double(double value);

}  // namespace fuelcast::csv
