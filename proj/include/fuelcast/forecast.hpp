#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fuelcast/features.hpp"
#include "fuelcast/model_io.hpp"
#include "fuelcast/panel.hpp"

namespace fuelcast {

// How the pandemic clock evolves past the last observed month.
struct ClockCap {
  std::optional<int> months;  // empty: the clock value of the panel's last month
};
struct ClockContinue {};
struct ClockZeroAfter {
  MonthKey after;  // clock is 0 for months strictly after this one
};
using ClockPolicy = std::variant<ClockCap, ClockContinue, ClockZeroAfter>;

// "cap", "cap:K", "continue", "zero_after:YYYY-MM".
ClockPolicy parse_clock_policy(std::string_view text);
std::string to_string(const ClockPolicy& policy);

enum class PopulationRule { hold_last_year, linear_extrapolate };
PopulationRule parse_population_rule(std::string_view text);
std::string_view to_string(PopulationRule rule);

// Replacement rates (cents/gallon) applied to forecast months only.
struct TaxOverride {
  std::optional<double> gasoline_cents;
  std::optional<double> diesel_cents;
};

// "NJ:gasoline=46.4" sets a rate; "NJ:gasoline+9.3" raises the current one.
void apply_tax_override(std::map<StateId, TaxOverride>& overrides, const TaxSchedule& tax, std::string_view text);

struct Scenario {
  MonthKey horizon_end{2024, 12};
  ClockPolicy clock = ClockCap{};
  std::map<StateId, TaxOverride> tax_overrides;
  PopulationRule population_rule = PopulationRule::hold_last_year;
};

// Rates for a state with any override applied.
TaxRates scenario_rates(const TaxSchedule& tax, const Scenario& scenario, StateId state);

// Population for any year: the known value, or the scenario rule beyond the last known
// year. Throws DataError before the first known year.
double scenario_population(const PopulationSeries& population, PopulationRule rule, StateId state, int year);

int scenario_clock(const ClockPolicy& policy, MonthKey when, MonthKey panel_end);

// Covariate rows (no targets) for every layout state present in the panel, from the month
// after the panel's last month through scenario.horizon_end, ordered by (state, month).
DesignMatrix make_future_rows(const FuelPanel& panel, const TaxSchedule& tax, const PopulationSeries& population,
                              const Scenario& scenario, const FeatureSpec& spec);

enum class Source { actual, predicted };
std::string_view to_string(Source source);
Source parse_source(std::string_view text);

struct ProjectionEntry {
  StateId state;
  MonthKey when;
  Source source;
  double mgal;  // million gallons

  friend bool operator==(const ProjectionEntry&, const ProjectionEntry&) = default;
};

// Actual and predicted monthly consumption per state, sorted by (state, month, source).
class Projection {
 public:
  Projection() = default;
  // Throws DataError on a duplicate (state, month, source).
  Projection(std::vector<ProjectionEntry> entries, FuelKind kind);

  std::span<const ProjectionEntry> entries() const { return entries_; }
  FuelKind kind() const { return kind_; }
  std::optional<double> value(StateId state, MonthKey when, Source source) const;
  // Actual where observed, predicted otherwise.
  std::optional<double> blended(StateId state, MonthKey when) const;
  std::vector<StateId> states() const;
  MonthKey first_month() const;
  MonthKey last_month() const;
  std::size_t count(Source source) const;

  friend bool operator==(const Projection&, const Projection&) = default;

 private:
  std::vector<ProjectionEntry> entries_;
  FuelKind kind_ = FuelKind::gasoline;
};

// Historical months from the panel start get a predicted entry (for overlays) and an
// actual entry where observed; forecast months through the horizon get predicted entries.
// Throws ModelError when the model's layout fingerprint does not match `spec`.
Projection project(const FittedModel& fitted, const FuelPanel& panel, const TaxSchedule& tax,
                   const PopulationSeries& population, const Scenario& scenario, const FeatureSpec& spec);

// state,year,month,source,million_gallons
std::string to_csv(const Projection& projection);
Projection parse_projection_csv(std::string_view text, FuelKind kind = FuelKind::gasoline);

}  // namespace fuelcast
