#include "fuelcast/month.hpp"

#include <charconv>
#include <cstdio>

#include "fuelcast/errors.hpp"

namespace fuelcast {

MonthKey::MonthKey(int year, int month) {
  if (year < kMinYear || year > kMaxYear) {
    throw DataError("year " + std::to_string(year) + " outside " + std::to_string(kMinYear) + "-" +
                    std::to_string(kMaxYear));
  }
  if (month < 1 || month > 12) {
    throw DataError("month " + std::to_string(month) + " outside 1-12");
  }
  year_ = static_cast<std::int16_t>(year);
  month_ = static_cast<std::int8_t>(month);
}

MonthKey MonthKey::from_ordinal(int ordinal) {
  // floor division so negative ordinals land on the range check instead of wrapping
  int year_offset = ordinal >= 0 ? ordinal / 12 : -((-ordinal + 11) / 12);
  int month = ordinal - year_offset * 12 + 1;
  return MonthKey(kMinYear + year_offset, month);
}

std::string MonthKey::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year(), month());
  return buf;
}

MonthKey MonthKey::parse(std::string_view text) {
  auto bad = [&] { return DataError("expected YYYY-MM, got '" + std::string(text) + "'"); };
  if (text.size() != 7 || text[4] != '-') throw bad();
  int year = 0;
  int month = 0;
  auto [p1, e1] = std::from_chars(text.data(), text.data() + 4, year);
  auto [p2, e2] = std::from_chars(text.data() + 5, text.data() + 7, month);
  if (e1 != std::errc{} || e2 != std::errc{} || p1 != text.data() + 4 || p2 != text.data() + 7) throw bad();
  return MonthKey(year, month);
}

}  // namespace fuelcast
