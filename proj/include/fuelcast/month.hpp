#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fuelcast {

// Calendar month on the panel time axis. Years are limited to 2000-2100.
class MonthKey {
 public:
  static constexpr int kMinYear = 2000;
  static constexpr int kMaxYear = 2100;

  // Throws DataError when year or month is out of range.
  MonthKey(int year, int month);

  int year() const { return year_; }
  int month() const { return month_; }

  // Months elapsed since Jan 2000; a dense ordinal for arithmetic.
  int ordinal() const { return (year_ - kMinYear) * 12 + (month_ - 1); }
  static MonthKey from_ordinal(int ordinal);

  MonthKey next() const { return plus(1); }
  MonthKey prev() const { return plus(-1); }
  MonthKey plus(int months) const { return from_ordinal(ordinal() + months); }

  // Signed number of months from `from` to `to`.
  friend int months_between(MonthKey from, MonthKey to) { return to.ordinal() - from.ordinal(); }

  // "YYYY-MM".
  std::string to_string() const;
  static MonthKey parse(std::string_view text);

  friend auto operator<=>(const MonthKey&, const MonthKey&) = default;

 private:
  std::int16_t year_;
  std::int8_t month_;
};

}  // namespace fuelcast
