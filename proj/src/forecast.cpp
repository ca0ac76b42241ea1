#include "fuelcast/forecast.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "fuelcast/csv.hpp"
#include "fuelcast/errors.hpp"

namespace fuelcast {

ClockPolicy parse_clock_policy(std::string_view text) {
  if (text == "continue") return ClockContinue{};
  if (text == "cap") return ClockCap{};
  if (text.starts_with("cap:")) {
    auto digits = text.substr(4);
    int k = -1;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || k < 0) {
      throw ConfigError("clock cap must be a non-negative integer: '" + std::string(text) + "'");
    }
    return ClockCap{k};
  }
  if (text.starts_with("zero_after:")) {
    try {
      return ClockZeroAfter{MonthKey::parse(text.substr(11))};
    } catch (const DataError& e) {
      throw ConfigError(std::string("clock policy: ") + e.what());
    }
  }
  throw ConfigError("unknown clock policy '" + std::string(text) + "' (expected cap, cap:K, continue, zero_after:YYYY-MM)");
}

std::string to_string(const ClockPolicy& policy) {
  if (std::holds_alternative<ClockContinue>(policy)) return "continue";
  if (const auto* z = std::get_if<ClockZeroAfter>(&policy)) return "zero_after:" + z->after.to_string();
  const auto& cap = std::get<ClockCap>(policy);
  return cap.months ? "cap:" + std::to_string(*cap.months) : "cap";
}

PopulationRule parse_population_rule(std::string_view text) {
  if (text == "hold") return PopulationRule::hold_last_year;
  if (text == "linear") return PopulationRule::linear_extrapolate;
  throw ConfigError("unknown population rule '" + std::string(text) + "' (expected hold or linear)");
}

std::string_view to_string(PopulationRule rule) {
  return rule == PopulationRule::hold_last_year ? "hold" : "linear";
}

void apply_tax_override(std::map<StateId, TaxOverride>& overrides, const TaxSchedule& tax, std::string_view text) {
  auto bad = [&](const std::string& why) {
    return ConfigError("tax override '" + std::string(text) + "': " + why);
  };
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw bad("expected STATE:FUEL=RATE or STATE:FUEL+DELTA");
  StateId state = [&] {
    try {
      return StateId::parse(text.substr(0, colon));
    } catch (const DataError& e) {
      throw bad(e.what());
    }
  }();
  auto rest = text.substr(colon + 1);
  auto op = rest.find_first_of("=+-");
  if (op == std::string_view::npos) throw bad("missing '=', '+' or '-'");
  FuelKind kind = [&] {
    try {
      return parse_fuel_kind(rest.substr(0, op));
    } catch (const DataError& e) {
      throw bad(e.what());
    }
  }();
  auto number = rest.substr(rest[op] == '=' ? op + 1 : op);
  if (!number.empty() && number[0] == '+') number.remove_prefix(1);
  double amount = 0.0;
  auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), amount, std::chars_format::fixed);
  if (number.empty() || ec != std::errc{} || ptr != number.data() + number.size()) throw bad("bad number");

  auto& entry = overrides[state];
  auto& slot = kind == FuelKind::gasoline ? entry.gasoline_cents : entry.diesel_cents;
  double current = slot ? *slot : (tax.contains(state) ? tax.rates(state).cents(kind) : 0.0);
  double rate = rest[op] == '=' ? amount : current + amount;
  if (!valid_rate(rate)) throw bad("resulting rate outside (0, 200) cents/gallon");
  slot = rate;
}

TaxRates scenario_rates(const TaxSchedule& tax, const Scenario& scenario, StateId state) {
  TaxRates rates = tax.rates(state);
  auto it = scenario.tax_overrides.find(state);
  if (it != scenario.tax_overrides.end()) {
    if (it->second.gasoline_cents) rates.gasoline_cents = *it->second.gasoline_cents;
    if (it->second.diesel_cents) rates.diesel_cents = *it->second.diesel_cents;
  }
  return rates;
}

double scenario_population(const PopulationSeries& population, PopulationRule rule, StateId state, int year) {
  if (auto known = population.lookup(state, year)) return static_cast<double>(*known);
  auto range = population.years(state);
  if (!range) throw DataError("missing population for (" + std::string(state.code()) + ", " + std::to_string(year) + ")");
  auto [first, last] = *range;
  if (year < first) {
    throw DataError("missing population for (" + std::string(state.code()) + ", " + std::to_string(year) + ")");
  }
  double last_value = static_cast<double>(*population.lookup(state, last));
  if (rule == PopulationRule::hold_last_year || first == last) return last_value;
  double slope = last_value - static_cast<double>(*population.lookup(state, last - 1));
  return std::max(1.0, std::round(last_value + slope * (year - last)));
}

int scenario_clock(const ClockPolicy& policy, MonthKey when, MonthKey panel_end) {
  int clock = pandemic_clock(when);
  if (std::holds_alternative<ClockContinue>(policy)) return clock;
  if (const auto* z = std::get_if<ClockZeroAfter>(&policy)) return when > z->after ? 0 : clock;
  const auto& cap = std::get<ClockCap>(policy);
  return std::min(clock, cap.months.value_or(pandemic_clock(panel_end)));
}

namespace {

std::vector<StateId> projected_states(const FuelPanel& panel, const FeatureSpec& spec) {
  std::vector<StateId> out;
  for (StateId s : panel.states()) {
    if (spec.has_state(s)) out.push_back(s);
  }
  return out;
}

}  // namespace

DesignMatrix make_future_rows(const FuelPanel& panel, const TaxSchedule& tax, const PopulationSeries& population,
                              const Scenario& scenario, const FeatureSpec& spec) {
  const MonthKey end = panel.last_month();
  if (scenario.horizon_end <= end) {
    throw DataError("forecast horizon " + scenario.horizon_end.to_string() + " is not after the panel's last month " +
                    end.to_string());
  }
  auto states = projected_states(panel, spec);
  const auto months = static_cast<std::size_t>(months_between(end, scenario.horizon_end));
  DesignMatrix out{Matrix(states.size() * months, spec.width()), {}, {}};
  std::size_t row = 0;
  for (StateId s : states) {
    TaxRates rates = scenario_rates(tax, scenario, s);
    for (MonthKey t = end.next(); t <= scenario.horizon_end; t = t.next()) {
      write_covariates(spec, out.x.row(row++), s, t, rates,
                       scenario_population(population, scenario.population_rule, s, t.year()),
                       scenario_clock(scenario.clock, t, end));
      out.keys.push_back({s, t});
    }
  }
  return out;
}

std::string_view to_string(Source source) { return source == Source::actual ? "actual" : "predicted"; }

Source parse_source(std::string_view text) {
  if (text == "actual") return Source::actual;
  if (text == "predicted") return Source::predicted;
  throw DataError("unknown source '" + std::string(text) + "'");
}

Projection::Projection(std::vector<ProjectionEntry> entries, FuelKind kind) : entries_(std::move(entries)), kind_(kind) {
  auto key = [](const ProjectionEntry& e) { return std::tuple(e.state, e.when, e.source); };
  std::sort(entries_.begin(), entries_.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (key(entries_[i - 1]) == key(entries_[i])) {
      const auto& e = entries_[i];
      throw DataError("duplicate projection entry " + std::string(e.state.code()) + " " + e.when.to_string() + " " +
                      std::string(to_string(e.source)));
    }
  }
}

std::optional<double> Projection::value(StateId state, MonthKey when, Source source) const {
  auto target = std::tuple(state, when, source);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), target, [](const ProjectionEntry& e, const auto& k) {
    return std::tuple(e.state, e.when, e.source) < k;
  });
  if (it == entries_.end() || std::tuple(it->state, it->when, it->source) != target) return std::nullopt;
  return it->mgal;
}

std::optional<double> Projection::blended(StateId state, MonthKey when) const {
  if (auto a = value(state, when, Source::actual)) return a;
  return value(state, when, Source::predicted);
}

std::vector<StateId> Projection::states() const {
  std::vector<StateId> out;
  for (const auto& e : entries_) {
    if (out.empty() || out.back() != e.state) out.push_back(e.state);
  }
  return out;
}

MonthKey Projection::first_month() const {
  if (entries_.empty()) throw DataError("empty projection");
  return std::min_element(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) { return a.when < b.when; })->when;
}

MonthKey Projection::last_month() const {
  if (entries_.empty()) throw DataError("empty projection");
  return std::max_element(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) { return a.when < b.when; })->when;
}

std::size_t Projection::count(Source source) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.source == source; }));
}

Projection project(const FittedModel& fitted, const FuelPanel& panel, const TaxSchedule& tax,
                   const PopulationSeries& population, const Scenario& scenario, const FeatureSpec& spec) {
  require_layout(fitted, spec);
  const MonthKey start = panel.first_month();
  const MonthKey end = panel.last_month();
  auto states = projected_states(panel, spec);
  const auto history_months = static_cast<std::size_t>(months_between(start, end) + 1);

  // historical covariates use the unmodified schedule; the scenario only shapes the future
  DesignMatrix history{Matrix(states.size() * history_months, spec.width()), {}, {}};
  std::size_t row = 0;
  for (StateId s : states) {
    const TaxRates& rates = tax.rates(s);
    for (MonthKey t = start; t <= end; t = t.next()) {
      write_covariates(spec, history.x.row(row++), s, t, rates,
                       scenario_population(population, scenario.population_rule, s, t.year()), pandemic_clock(t));
      history.keys.push_back({s, t});
    }
  }
  DesignMatrix future = make_future_rows(panel, tax, population, scenario, spec);

  std::vector<ProjectionEntry> entries;
  entries.reserve(panel.size() + history.rows() + future.rows());
  for (const auto& r : panel.records()) {
    if (spec.has_state(r.state)) entries.push_back({r.state, r.when, Source::actual, r.volume(spec.target) / 1000.0});
  }
  for (const DesignMatrix* part : {&history, &future}) {
    auto predicted = predict(fitted.model, part->x);
    for (std::size_t i = 0; i < part->rows(); ++i) {
      entries.push_back({part->keys[i].state, part->keys[i].when, Source::predicted, predicted[i]});
    }
  }
  return Projection(std::move(entries), spec.target);
}

std::string to_csv(const Projection& projection) {
  std::string out = "state,year,month,source,million_gallons\n";
  for (const auto& e : projection.entries()) {
    out += std::string(e.state.code()) + ',' + std::to_string(e.when.year()) + ',' + std::to_string(e.when.month()) +
           ',' + std::string(to_string(e.source)) + ',' + csv::format_double(e.mgal) + '\n';
  }
  return out;
}

Projection parse_projection_csv(std::string_view text, FuelKind kind) {
  std::vector<ProjectionEntry> entries;
  csv::read(text, {"state", "year", "month", "source", "million_gallons"}, [&](const csv::Row& row) {
    try {
      entries.push_back({StateId::parse(row.fields[0]),
                         MonthKey(static_cast<int>(csv::parse_int(row, 1, "year")),
                                  static_cast<int>(csv::parse_int(row, 2, "month"))),
                         parse_source(row.fields[3]), csv::parse_double(row, 4, "million_gallons")});
    } catch (const DataError& e) {
      std::string what = e.what();
      if (what.starts_with("line ")) throw;
      throw DataError("line " + std::to_string(row.line) + ": " + what);
    }
  });
  return Projection(std::move(entries), kind);
}

}  // namespace fuelcast
