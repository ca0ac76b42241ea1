#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fuelcast/matrix.hpp"
#include "fuelcast/panel.hpp"

namespace fuelcast {

// Column layout of the design matrix:
//   month_01..month_12   calendar-month indicators
//   state_XX             one indicator per modeling state, alphabetical by postal code
//   population           persons, calendar-year value
//   gasoline_rate        state gasoline tax, cents/gallon
//   diesel_rate          state diesel tax, cents/gallon
//   pandemic_clock       months since the April 2020 lockdown (0 before it)
// The target is monthly consumption of one fuel kind in million gallons.
struct FeatureSpec {
  std::vector<StateId> states = modeling_set();
  FuelKind target = FuelKind::gasoline;

  static constexpr std::size_t kMonthColumns = 12;
  static constexpr std::size_t kScalarColumns = 4;

  std::size_t width() const { return kMonthColumns + states.size() + kScalarColumns; }
  std::size_t month_column(int month) const { return static_cast<std::size_t>(month - 1); }
  // Throws DataError for a state outside the layout.
  std::size_t state_column(StateId state) const;
  bool has_state(StateId state) const;
  std::size_t population_column() const { return kMonthColumns + states.size(); }
  std::size_t gasoline_rate_column() const { return population_column() + 1; }
  std::size_t diesel_rate_column() const { return population_column() + 2; }
  std::size_t clock_column() const { return population_column() + 3; }

  std::vector<std::string> column_names() const;
  // Stable identifier of the column layout and target; models carry it.
  std::string fingerprint() const;
};

struct RowKey {
  StateId state;
  MonthKey when;
  friend auto operator<=>(const RowKey&, const RowKey&) = default;
};

struct DesignMatrix {
  Matrix x;
  std::vector<double> y;  // million gallons; empty for covariate-only matrices
  std::vector<RowKey> keys;

  std::size_t rows() const { return x.rows(); }
};

// 0 before April 2020, 1 in April 2020, +1 per month afterwards.
int pandemic_clock(MonthKey when);

// Fills one design row. `row` must have spec.width() entries.
void write_covariates(const FeatureSpec& spec, std::span<double> row, StateId state, MonthKey when,
                      const TaxRates& rates, double population, int clock);

// One row per panel record of a state in spec.states, in panel order. Throws DataError
// naming (state, year) when a tax rate or population value is missing.
DesignMatrix build_design(const FuelPanel& panel, const TaxSchedule& tax, const PopulationSeries& population,
                          const FeatureSpec& spec);

// Self-describing dump: state,year,month,<columns>[,target_mgal].
std::string to_csv(const DesignMatrix& design, const FeatureSpec& spec);

enum class SplitMode { random, chronological };

struct SplitIndex {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
  std::uint64_t seed;
  double fraction;
  friend bool operator==(const SplitIndex&, const SplitIndex&) = default;
};

// Random mode shuffles 0..n-1 with the seed and takes the first round(fraction*n) as
// training rows. Chronological mode trains on the earliest rows (by month, then state).
// Throws DataError when either side would be empty.
SplitIndex split(std::size_t n, double fraction, std::uint64_t seed);
SplitIndex split(const DesignMatrix& design, double fraction, std::uint64_t seed,
                 SplitMode mode = SplitMode::random);

}  // namespace fuelcast
