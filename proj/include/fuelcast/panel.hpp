#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuelcast/month.hpp"
#include "fuelcast/states.hpp"

namespace fuelcast {

enum class FuelKind { gasoline, special_fuel };

std::string_view to_string(FuelKind kind);
FuelKind parse_fuel_kind(std::string_view text);

// One state-month observation. Volumes are thousand gallons (kgal).
struct FuelRecord {
  StateId state;
  MonthKey when;
  double gasoline;
  double special_fuel;

  double volume(FuelKind kind) const { return kind == FuelKind::gasoline ? gasoline : special_fuel; }
  friend bool operator==(const FuelRecord&, const FuelRecord&) = default;
};

struct Coverage {
  MonthKey first;
  MonthKey last;
  friend bool operator==(const Coverage&, const Coverage&) = default;
};

// Immutable state x month consumption table. Records are held sorted by (state, month),
// so construction order never matters.
class FuelPanel {
 public:
  FuelPanel() = default;
  // Throws DataError on a duplicate key or a negative/non-finite volume.
  explicit FuelPanel(std::vector<FuelRecord> records);

  std::span<const FuelRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const FuelRecord* find(StateId state, MonthKey when) const;

  // States with at least one record, ascending.
  std::vector<StateId> states() const;
  std::optional<Coverage> coverage(StateId state) const;
  // Earliest and latest month over all states. Throws DataError on an empty panel.
  MonthKey first_month() const;
  MonthKey last_month() const;

  friend bool operator==(const FuelPanel&, const FuelPanel&) = default;

 private:
  std::vector<FuelRecord> records_;
  std::map<StateId, Coverage> coverage_;
};

FuelPanel parse_fuel_csv(std::string_view text);
std::string to_csv(const FuelPanel& panel);

struct TaxRates {
  double gasoline_cents;
  double diesel_cents;

  double cents(FuelKind kind) const { return kind == FuelKind::gasoline ? gasoline_cents : diesel_cents; }
  friend bool operator==(const TaxRates&, const TaxRates&) = default;
};

// Per-state and federal motor fuel tax rates in cents per gallon.
class TaxSchedule {
 public:
  TaxSchedule(std::map<StateId, TaxRates> state_rates, TaxRates federal);

  const TaxRates& rates(StateId state) const;
  bool contains(StateId state) const { return rates_.contains(state); }
  const TaxRates& federal() const { return federal_; }
  const std::map<StateId, TaxRates>& all() const { return rates_; }

  // Copy with one state's rates replaced.
  TaxSchedule with_rates(StateId state, TaxRates rates) const;

  friend bool operator==(const TaxSchedule&, const TaxSchedule&) = default;

 private:
  std::map<StateId, TaxRates> rates_;
  TaxRates federal_;
};

bool valid_rate(double cents);

// Requires a FED row and every state of `required` (default: the 50 states).
TaxSchedule parse_tax_csv(std::string_view text, std::span<const StateId> required);
TaxSchedule parse_tax_csv(std::string_view text);
std::string to_csv(const TaxSchedule& tax);
// July 2020 rates for all 50 states, DC and the federal government.
TaxSchedule bundled_tax_schedule();

// Annual population per state over a contiguous year range.
class PopulationSeries {
 public:
  PopulationSeries() = default;
  // Throws DataError on non-positive values or non-contiguous years.
  explicit PopulationSeries(std::map<StateId, std::map<int, std::int64_t>> values);

  std::optional<std::int64_t> lookup(StateId state, int year) const;
  // Inclusive year range available for the state.
  std::optional<std::pair<int, int>> years(StateId state) const;
  const std::map<StateId, std::map<int, std::int64_t>>& all() const { return values_; }

  friend bool operator==(const PopulationSeries&, const PopulationSeries&) = default;

 private:
  std::map<StateId, std::map<int, std::int64_t>> values_;
};

PopulationSeries parse_population_csv(std::string_view text);
std::string to_csv(const PopulationSeries& population);

struct ValidationIssue {
  enum class Kind { missing_month, zero_consumption };
  Kind kind;
  StateId state;
  MonthKey when;
  // Set for zero_consumption.
  std::optional<FuelKind> fuel;

  bool is_warning() const { return kind == Kind::zero_consumption; }
  std::string describe() const;
};

// Missing months within [from, to] for every state present in the panel, plus
// zero-consumption warnings. Never throws for data problems.
std::vector<ValidationIssue> validate_panel(const FuelPanel& panel, MonthKey from, MonthKey to);

struct ChangeEntry {
  StateId state;
  FuelKind fuel;
  double delta_mgal;          // million gallons
  std::optional<double> pct;  // empty when the starting volume is zero
  friend bool operator==(const ChangeEntry&, const ChangeEntry&) = default;
};

// Change between two months for every modeling-set state present in the panel, sorted by
// delta ascending (ties by state). Throws DataError naming the state and month when an
// endpoint is missing.
std::vector<ChangeEntry> change_report(const FuelPanel& panel, MonthKey from, MonthKey to, FuelKind kind,
                                       std::span<const StateId> modeling);
std::vector<ChangeEntry> change_report(const FuelPanel& panel, MonthKey from, MonthKey to, FuelKind kind);

std::string to_csv(std::span<const ChangeEntry> changes);
std::vector<ChangeEntry> parse_changes_csv(std::string_view text);

}  // namespace fuelcast
