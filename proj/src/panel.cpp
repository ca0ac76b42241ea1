#include "fuelcast/panel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fuelcast/csv.hpp"
#include "fuelcast/errors.hpp"

namespace fuelcast {

std::string_view to_string(FuelKind kind) {
  return kind == FuelKind::gasoline ? "gasoline" : "special_fuel";
}

FuelKind parse_fuel_kind(std::string_view text) {
  if (text == "gasoline") return FuelKind::gasoline;
  if (text == "special_fuel") return FuelKind::special_fuel;
  throw DataError("unknown fuel kind '" + std::string(text) + "'");
}

namespace {

std::string key_name(StateId state, MonthKey when) {
  return std::string(state.code()) + " " + when.to_string();
}

// Wraps a MonthKey constructor failure with the row location.
MonthKey month_at(const csv::Row& row, std::int64_t year, std::int64_t month) {
  if (month < 1 || month > 12) {
    throw DataError("line " + std::to_string(row.line) + ": month " + std::to_string(month) +
                    " outside 1-12");
  }
  if (year < MonthKey::kMinYear || year > MonthKey::kMaxYear) {
    throw DataError("line " + std::to_string(row.line) + ": year " + std::to_string(year) +
                    " outside supported range");
  }
  return MonthKey(static_cast<int>(year), static_cast<int>(month));
}

StateId state_at(const csv::Row& row, std::size_t column) {
  try {
    return StateId::parse(row.fields[column]);
  } catch (const DataError& e) {
    throw DataError("line " + std::to_string(row.line) + ": " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// FuelPanel

FuelPanel::FuelPanel(std::vector<FuelRecord> records) : records_(std::move(records)) {
  auto key_less = [](const FuelRecord& a, const FuelRecord& b) {
    return std::tie(a.state, a.when) < std::tie(b.state, b.when);
  };
  std::sort(records_.begin(), records_.end(), key_less);
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (!std::isfinite(r.gasoline) || !std::isfinite(r.special_fuel) || r.gasoline < 0 || r.special_fuel < 0) {
      throw DataError("record " + key_name(r.state, r.when) + ": volumes must be finite and non-negative");
    }
    if (i > 0 && !key_less(records_[i - 1], r)) {
      throw DataError("duplicate record " + key_name(r.state, r.when));
    }
    auto [it, inserted] = coverage_.try_emplace(r.state, Coverage{r.when, r.when});
    if (!inserted) it->second.last = r.when;
  }
}

const FuelRecord* FuelPanel::find(StateId state, MonthKey when) const {
  auto it = std::lower_bound(records_.begin(), records_.end(), std::tie(state, when),
                             [](const FuelRecord& r, const auto& key) {
                               return std::tie(r.state, r.when) < key;
                             });
  if (it == records_.end() || it->state != state || it->when != when) return nullptr;
  return &*it;
}

std::vector<StateId> FuelPanel::states() const {
  std::vector<StateId> out;
  for (const auto& [state, _] : coverage_) out.push_back(state);
  return out;
}

std::optional<Coverage> FuelPanel::coverage(StateId state) const {
  auto it = coverage_.find(state);
  if (it == coverage_.end()) return std::nullopt;
  return it->second;
}

MonthKey FuelPanel::first_month() const {
  if (coverage_.empty()) throw DataError("empty panel");
  MonthKey best = coverage_.begin()->second.first;
  for (const auto& [_, c] : coverage_) best = std::min(best, c.first);
  return best;
}

MonthKey FuelPanel::last_month() const {
  if (coverage_.empty()) throw DataError("empty panel");
  MonthKey best = coverage_.begin()->second.last;
  for (const auto& [_, c] : coverage_) best = std::max(best, c.last);
  return best;
}

FuelPanel parse_fuel_csv(std::string_view text) {
  std::vector<FuelRecord> records;
  std::map<std::pair<StateId, MonthKey>, std::size_t> seen;
  csv::read(text, {"state", "year", "month", "gasoline_kgal", "special_fuel_kgal"}, [&](const csv::Row& row) {
    StateId state = state_at(row, 0);
    MonthKey when = month_at(row, csv::parse_int(row, 1, "year"), csv::parse_int(row, 2, "month"));
    double gasoline = csv::parse_double(row, 3, "gasoline_kgal");
    double special = csv::parse_double(row, 4, "special_fuel_kgal");
    if (gasoline < 0 || special < 0) {
      throw DataError("line " + std::to_string(row.line) + ": negative gallons");
    }
    auto [it, inserted] = seen.try_emplace({state, when}, row.line);
    if (!inserted) {
      throw DataError("line " + std::to_string(row.line) + ": duplicate key " + key_name(state, when) +
                      " (first seen on line " + std::to_string(it->second) + ")");
    }
    records.push_back({state, when, gasoline, special});
  });
  return FuelPanel(std::move(records));
}

std::string to_csv(const FuelPanel& panel) {
  std::string out = "state,year,month,gasoline_kgal,special_fuel_kgal\n";
  for (const auto& r : panel.records()) {
    out += std::string(r.state.code()) + ',' + std::to_string(r.when.year()) + ',' +
           std::to_string(r.when.month()) + ',' + csv::format_double(r.gasoline) + ',' +
           csv::format_double(r.special_fuel) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// TaxSchedule

bool valid_rate(double cents) { return std::isfinite(cents) && cents > 0.0 && cents < 200.0; }

TaxSchedule::TaxSchedule(std::map<StateId, TaxRates> state_rates, TaxRates federal)
    : rates_(std::move(state_rates)), federal_(federal) {
  auto check = [](const TaxRates& r, std::string_view who) {
    if (!valid_rate(r.gasoline_cents) || !valid_rate(r.diesel_cents)) {
      throw DataError("tax rate for " + std::string(who) + " outside (0, 200) cents/gallon");
    }
  };
  check(federal_, "FED");
  for (const auto& [state, r] : rates_) check(r, state.code());
}

const TaxRates& TaxSchedule::rates(StateId state) const {
  auto it = rates_.find(state);
  if (it == rates_.end()) throw DataError("no tax rate for " + std::string(state.code()));
  return it->second;
}

TaxSchedule TaxSchedule::with_rates(StateId state, TaxRates rates) const {
  auto copy = rates_;
  copy[state] = rates;
  return TaxSchedule(std::move(copy), federal_);
}

TaxSchedule parse_tax_csv(std::string_view text, std::span<const StateId> required) {
  std::map<StateId, TaxRates> rates;
  std::optional<TaxRates> federal;
  csv::read(text, {"state", "gasoline_cents", "diesel_cents"}, [&](const csv::Row& row) {
    TaxRates r{csv::parse_double(row, 1, "gasoline_cents"), csv::parse_double(row, 2, "diesel_cents")};
    if (!valid_rate(r.gasoline_cents) || !valid_rate(r.diesel_cents)) {
      throw DataError("line " + std::to_string(row.line) + ": rate outside (0, 200) cents/gallon");
    }
    if (row.fields[0] == "FED") {
      if (federal) throw DataError("line " + std::to_string(row.line) + ": duplicate FED row");
      federal = r;
      return;
    }
    StateId state = state_at(row, 0);
    if (!rates.emplace(state, r).second) {
      throw DataError("line " + std::to_string(row.line) + ": duplicate state " + std::string(state.code()));
    }
  });
  if (!federal) throw DataError("tax schedule is missing the FED row");
  for (StateId s : required) {
    if (!rates.contains(s)) throw DataError("tax schedule is missing state " + std::string(s.code()));
  }
  return TaxSchedule(std::move(rates), *federal);
}

TaxSchedule parse_tax_csv(std::string_view text) {
  auto required = modeling_set();
  return parse_tax_csv(text, required);
}

std::string to_csv(const TaxSchedule& tax) {
  std::string out = "state,gasoline_cents,diesel_cents\n";
  for (const auto& [state, r] : tax.all()) {
    out += std::string(state.code()) + ',' + csv::format_double(r.gasoline_cents) + ',' +
           csv::format_double(r.diesel_cents) + '\n';
  }
  out += "FED," + csv::format_double(tax.federal().gasoline_cents) + ',' +
         csv::format_double(tax.federal().diesel_cents) + '\n';
  return out;
}

TaxSchedule bundled_tax_schedule() {
  std::map<StateId, TaxRates> rates;
  for (std::size_t i = 0; i < state_table().size(); ++i) {
    const auto& info = state_table()[i];
    rates.emplace(StateId::from_index(i), TaxRates{info.gasoline_cents, info.diesel_cents});
  }
  return TaxSchedule(std::move(rates), {kFederalGasolineCents, kFederalDieselCents});
}

// ---------------------------------------------------------------------------
// PopulationSeries

PopulationSeries::PopulationSeries(std::map<StateId, std::map<int, std::int64_t>> values)
    : values_(std::move(values)) {
  for (const auto& [state, by_year] : values_) {
    int expected = by_year.empty() ? 0 : by_year.begin()->first;
    for (const auto& [year, persons] : by_year) {
      if (year != expected) {
        throw DataError("population for " + std::string(state.code()) + " has a gap at year " +
                        std::to_string(expected));
      }
      if (persons <= 0) {
        throw DataError("population for " + std::string(state.code()) + " in " + std::to_string(year) +
                        " is not positive");
      }
      ++expected;
    }
  }
}

std::optional<std::int64_t> PopulationSeries::lookup(StateId state, int year) const {
  auto it = values_.find(state);
  if (it == values_.end()) return std::nullopt;
  auto jt = it->second.find(year);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

std::optional<std::pair<int, int>> PopulationSeries::years(StateId state) const {
  auto it = values_.find(state);
  if (it == values_.end() || it->second.empty()) return std::nullopt;
  return std::pair{it->second.begin()->first, it->second.rbegin()->first};
}

PopulationSeries parse_population_csv(std::string_view text) {
  std::map<StateId, std::map<int, std::int64_t>> values;
  csv::read(text, {"state", "year", "population"}, [&](const csv::Row& row) {
    StateId state = state_at(row, 0);
    auto year = csv::parse_int(row, 1, "year");
    auto persons = csv::parse_int(row, 2, "population");
    if (persons <= 0) {
      throw DataError("line " + std::to_string(row.line) + ": population must be positive");
    }
    if (!values[state].emplace(static_cast<int>(year), persons).second) {
      throw DataError("line " + std::to_string(row.line) + ": duplicate year " + std::to_string(year));
    }
  });
  return PopulationSeries(std::move(values));
}

std::string to_csv(const PopulationSeries& population) {
  std::string out = "state,year,population\n";
  for (const auto& [state, by_year] : population.all()) {
    for (const auto& [year, persons] : by_year) {
      out += std::string(state.code()) + ',' + std::to_string(year) + ',' + std::to_string(persons) + '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation and change statistics

std::string ValidationIssue::describe() const {
  std::string where = std::string(state.code()) + " " + when.to_string();
  if (kind == Kind::missing_month) return "missing month " + where;
  return "zero " + std::string(to_string(*fuel)) + " consumption " + where;
}

std::vector<ValidationIssue> validate_panel(const FuelPanel& panel, MonthKey from, MonthKey to) {
  std::vector<ValidationIssue> issues;
  for (StateId state : panel.states()) {
    for (MonthKey m = from; m <= to; m = m.next()) {
      const FuelRecord* r = panel.find(state, m);
      if (r == nullptr) {
        issues.push_back({ValidationIssue::Kind::missing_month, state, m, std::nullopt});
        continue;
      }
      for (FuelKind kind : {FuelKind::gasoline, FuelKind::special_fuel}) {
        if (r->volume(kind) == 0.0) issues.push_back({ValidationIssue::Kind::zero_consumption, state, m, kind});
      }
    }
  }
  return issues;
}

std::vector<ChangeEntry> change_report(const FuelPanel& panel, MonthKey from, MonthKey to, FuelKind kind,
                                       std::span<const StateId> modeling) {
  std::vector<ChangeEntry> out;
  for (StateId state : panel.states()) {
    if (std::find(modeling.begin(), modeling.end(), state) == modeling.end()) continue;
    const FuelRecord* a = panel.find(state, from);
    const FuelRecord* b = panel.find(state, to);
    if (a == nullptr || b == nullptr) {
      throw DataError("change report: " + std::string(state.code()) + " has no record for " +
                      (a == nullptr ? from : to).to_string());
    }
    double start = a->volume(kind);
    double delta_kgal = b->volume(kind) - start;
    std::optional<double> pct;
    if (start > 0.0) pct = 100.0 * delta_kgal / start;
    out.push_back({state, kind, delta_kgal / 1000.0, pct});
  }
  std::stable_sort(out.begin(), out.end(), [](const ChangeEntry& x, const ChangeEntry& y) {
    return x.delta_mgal < y.delta_mgal;
  });
  return out;
}

std::vector<ChangeEntry> change_report(const FuelPanel& panel, MonthKey from, MonthKey to, FuelKind kind) {
  auto modeling = modeling_set();
  return change_report(panel, from, to, kind, modeling);
}

std::string to_csv(std::span<const ChangeEntry> changes) {
  std::string out = "state,fuel_kind,delta_mgal,pct\n";
  for (const auto& c : changes) {
    out += std::string(c.state.code()) + ',' + std::string(to_string(c.fuel)) + ',' +
           csv::format_double(c.delta_mgal) + ',' + (c.pct ? csv::format_double(*c.pct) : "") + '\n';
  }
  return out;
}

std::vector<ChangeEntry> parse_changes_csv(std::string_view text) {
  std::vector<ChangeEntry> out;
  csv::read(text, {"state", "fuel_kind", "delta_mgal", "pct"}, [&](const csv::Row& row) {
    std::optional<double> pct;
    if (!row.fields[3].empty()) pct = csv::parse_double(row, 3, "pct");
    out.push_back({state_at(row, 0), parse_fuel_kind(row.fields[1]), csv::parse_double(row, 2, "delta_mgal"), pct});
  });
  return out;
}

}  // namespace fuelcast
