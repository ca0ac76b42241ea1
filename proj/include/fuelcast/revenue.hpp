#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuelcast/forecast.hpp"
#include "fuelcast/panel.hpp"

namespace fuelcast {

// Dollars collected on `gallons` at `rate_cents` per gallon. Throws DataError for negative
// gallons or a rate outside (0, 200).
double monthly_revenue(double gallons, double rate_cents);

struct RevenueEntry {
  StateId state;
  MonthKey when;
  FuelKind fuel;
  double state_revenue;    // dollars
  double federal_revenue;  // dollars
};

// Revenue of the observed panel volumes.
std::vector<RevenueEntry> revenue_entries(const FuelPanel& panel, const TaxSchedule& tax, FuelKind kind);

struct NationalRevenue {
  double state_revenue = 0.0;
  double federal_revenue = 0.0;
};
std::map<MonthKey, NationalRevenue> national_revenue(std::span<const RevenueEntry> entries);

// The state's twelve monthly volumes (kgal) of `reference_year`. Throws DataError naming the
// first missing (state, month).
std::array<double, 12> baseline(const FuelPanel& panel, StateId state, FuelKind kind, int reference_year = 2019);

// 100 * (value / base - 1).
double pct_gap(double value, double base);

inline constexpr double kFlagBandLow = -15.0;
inline constexpr double kFlagBandHigh = -10.0;
// Band membership allows this much floating-point slack at the edges (percentage points).
inline constexpr double kFlagBandSlack = 1e-9;
bool in_flag_band(double pct);

enum class GapSeries { blended, predicted };

struct GapOptions {
  int baseline_year = 2019;
  // Rates applied to months after the panel's last month; months before use `tax`.
  std::map<StateId, TaxOverride> tax_overrides;
  GapSeries series = GapSeries::blended;
};

struct GapEntry {
  StateId state;
  MonthKey when;
  std::optional<double> pct_gap;  // empty when the baseline month has zero volume
};

struct GapSummary {
  StateId state;
  std::optional<double> trailing12_gap_pct;  // last 12 projected months, revenue-weighted
  bool flagged;                              // trailing gap inside [-15%, -10%]
};

struct GapReport {
  std::vector<GapEntry> months;     // sorted by (state, month)
  std::vector<GapSummary> summary;  // sorted by state
};

// State fuel-tax revenue of each projected month after the baseline year, compared with
// revenue on the same calendar month of the baseline year. Several projections (e.g. gasoline
// and special fuel) are combined by summing their revenues.
GapReport gap_report(std::span<const Projection> projections, const FuelPanel& panel, const TaxSchedule& tax,
                     const GapOptions& options = {});
GapReport gap_report(const Projection& projection, const FuelPanel& panel, const TaxSchedule& tax,
                     const GapOptions& options = {});

// state,year,month,pct_gap  and  state,trailing12_gap_pct,flagged
std::string months_to_csv(const GapReport& report);
std::string summary_to_csv(const GapReport& report);
std::vector<GapEntry> parse_gap_csv(std::string_view text);
std::vector<GapSummary> parse_gap_summary_csv(std::string_view text);

}  // namespace fuelcast
