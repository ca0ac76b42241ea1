#include "fuelcast/csv.hpp"

#include <charconv>
#include <cmath>

#include "fuelcast/errors.hpp"

namespace fuelcast::csv {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string where(const Row& row, std::string_view name) {
  return "line " + std::to_string(row.line) + ", column '" + std::string(name) + "'";
}

}  // namespace

void read(std::string_view text, const std::vector<std::string_view>& expected_header,
          const std::function<void(const Row&)>& on_row) {
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    Row row{line_no, split_fields(line)};
    if (!have_header) {
      if (row.fields != expected_header) {
        std::string want;
        for (auto h : expected_header) want += (want.empty() ? "" : ",") + std::string(h);
        throw DataError("line " + std::to_string(line_no) + ": bad header '" + std::string(line) +
                        "', expected '" + want + "'");
      }
      have_header = true;
      continue;
    }
    if (row.fields.size() != expected_header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(expected_header.size()) + " fields, got " +
                      std::to_string(row.fields.size()));
    }
    on_row(row);
  }
  if (!have_header) throw DataError("missing header row");
}

double parse_double(const Row& row, std::size_t column, std::string_view name) {
  std::string_view field = row.fields.at(column);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value,
                                   std::chars_format::fixed);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw DataError(where(row, name) + ": not a number: '" + std::string(field) + "'");
  }
  return value;
}

std::int64_t parse_int(const Row& row, std::size_t column, std::string_view name) {
  std::string_view field = row.fields.at(column);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    throw DataError(where(row, name) + ": not an integer: '" + std::string(field) + "'");
  }
  return value;
}

std::string format_double(double value) {
  char buf[512];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc{}) return "nan";
  std::string out(buf, ptr);
  if (out == "-0") out = "0";
  return out;
}

}  // namespace fuelcast::csv
