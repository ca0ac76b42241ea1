#include "fuelcast/revenue.hpp"

#include <algorithm>
#include <cmath>

#include "fuelcast/csv.hpp"
#include "fuelcast/errors.hpp"

namespace fuelcast {

double monthly_revenue(double gallons, double rate_cents) {
  if (!(gallons >= 0.0) || !std::isfinite(gallons)) throw DataError("revenue: gallons must be finite and non-negative");
  if (!valid_rate(rate_cents)) throw DataError("revenue: rate outside (0, 200) cents/gallon");
  return gallons * rate_cents / 100.0;
}

std::vector<RevenueEntry> revenue_entries(const FuelPanel& panel, const TaxSchedule& tax, FuelKind kind) {
  std::vector<RevenueEntry> out;
  for (const auto& r : panel.records()) {
    if (!tax.contains(r.state)) continue;
    double gallons = r.volume(kind) * 1000.0;
    out.push_back({r.state, r.when, kind, monthly_revenue(gallons, tax.rates(r.state).cents(kind)),
                   monthly_revenue(gallons, tax.federal().cents(kind))});
  }
  return out;
}

std::map<MonthKey, NationalRevenue> national_revenue(std::span<const RevenueEntry> entries) {
  std::map<MonthKey, NationalRevenue> out;
  for (const auto& e : entries) {
    auto& total = out[e.when];
    total.state_revenue += e.state_revenue;
    total.federal_revenue += e.federal_revenue;
  }
  return out;
}

std::array<double, 12> baseline(const FuelPanel& panel, StateId state, FuelKind kind, int reference_year) {
  std::array<double, 12> out{};
  for (int m = 1; m <= 12; ++m) {
    MonthKey when(reference_year, m);
    const FuelRecord* r = panel.find(state, when);
    if (r == nullptr) {
      throw DataError("baseline: no record for (" + std::string(state.code()) + ", " + when.to_string() + ")");
    }
    out[static_cast<std::size_t>(m - 1)] = r->volume(kind);
  }
  return out;
}

double pct_gap(double value, double base) { return 100.0 * (value / base - 1.0); }

bool in_flag_band(double pct) { return pct >= kFlagBandLow - kFlagBandSlack && pct <= kFlagBandHigh + kFlagBandSlack; }

namespace {

double rate_for(const TaxSchedule& tax, const GapOptions& options, StateId state, FuelKind kind, bool override_month) {
  double rate = tax.rates(state).cents(kind);
  if (!override_month) return rate;
  auto it = options.tax_overrides.find(state);
  if (it == options.tax_overrides.end()) return rate;
  const auto& slot = kind == FuelKind::gasoline ? it->second.gasoline_cents : it->second.diesel_cents;
  return slot.value_or(rate);
}

}  // namespace

GapReport gap_report(std::span<const Projection> projections, const FuelPanel& panel, const TaxSchedule& tax,
                     const GapOptions& options) {
  if (projections.empty()) throw DataError("gap report: no projection given");
  const MonthKey panel_end = panel.last_month();
  GapReport report;

  for (StateId state : projections.front().states()) {
    // baselines per projection, in dollars per calendar month
    std::array<double, 12> base_revenue{};
    for (const auto& proj : projections) {
      auto kgal = baseline(panel, state, proj.kind(), options.baseline_year);
      double rate = tax.rates(state).cents(proj.kind());
      for (std::size_t m = 0; m < 12; ++m) base_revenue[m] += monthly_revenue(kgal[m] * 1000.0, rate);
    }
    bool undefined = std::any_of(base_revenue.begin(), base_revenue.end(), [](double v) { return !(v > 0.0); });

    std::vector<std::pair<double, double>> monthly;  // (projected, baseline) revenue
    MonthKey first(options.baseline_year + 1 > MonthKey::kMaxYear ? MonthKey::kMaxYear : options.baseline_year + 1, 1);
    MonthKey last = projections.front().last_month();
    for (MonthKey t = first; t <= last; t = t.next()) {
      double revenue = 0.0;
      bool covered = true;
      for (const auto& proj : projections) {
        auto mgal = options.series == GapSeries::blended ? proj.blended(state, t) : proj.value(state, t, Source::predicted);
        if (!mgal) {
          covered = false;
          break;
        }
        revenue += monthly_revenue(std::max(0.0, *mgal) * 1e6, rate_for(tax, options, state, proj.kind(), t > panel_end));
      }
      if (!covered) continue;
      double base = base_revenue[static_cast<std::size_t>(t.month() - 1)];
      std::optional<double> gap;
      if (!undefined) gap = pct_gap(revenue, base);
      report.months.push_back({state, t, gap});
      monthly.emplace_back(revenue, base);
    }

    GapSummary summary{state, std::nullopt, false};
    if (!undefined && monthly.size() >= 12) {
      double projected = 0.0;
      double base = 0.0;
      for (auto it = monthly.end() - 12; it != monthly.end(); ++it) {
        projected += it->first;
        base += it->second;
      }
      summary.trailing12_gap_pct = pct_gap(projected, base);
      summary.flagged = in_flag_band(*summary.trailing12_gap_pct);
    }
    report.summary.push_back(summary);
  }
  return report;
}

GapReport gap_report(const Projection& projection, const FuelPanel& panel, const TaxSchedule& tax,
                     const GapOptions& options) {
  return gap_report(std::span<const Projection>(&projection, 1), panel, tax, options);
}

std::string months_to_csv(const GapReport& report) {
  std::string out = "state,year,month,pct_gap\n";
  for (const auto& e : report.months) {
    out += std::string(e.state.code()) + ',' + std::to_string(e.when.year()) + ',' + std::to_string(e.when.month()) +
           ',' + (e.pct_gap ? csv::format_double(*e.pct_gap) : "") + '\n';
  }
  return out;
}

std::string summary_to_csv(const GapReport& report) {
  std::string out = "state,trailing12_gap_pct,flagged\n";
  for (const auto& s : report.summary) {
    out += std::string(s.state.code()) + ',' + (s.trailing12_gap_pct ? csv::format_double(*s.trailing12_gap_pct) : "") +
           ',' + (s.flagged ? "true" : "false") + '\n';
  }
  return out;
}

std::vector<GapEntry> parse_gap_csv(std::string_view text) {
  std::vector<GapEntry> out;
  csv::read(text, {"state", "year", "month", "pct_gap"}, [&](const csv::Row& row) {
    std::optional<double> gap;
    if (!row.fields[3].empty()) gap = csv::parse_double(row, 3, "pct_gap");
    out.push_back({StateId::parse(row.fields[0]),
                   MonthKey(static_cast<int>(csv::parse_int(row, 1, "year")), static_cast<int>(csv::parse_int(row, 2, "month"))),
                   gap});
  });
  return out;
}

std::vector<GapSummary> parse_gap_summary_csv(std::string_view text) {
  std::vector<GapSummary> out;
  csv::read(text, {"state", "trailing12_gap_pct", "flagged"}, [&](const csv::Row& row) {
    std::optional<double> gap;
    if (!row.fields[1].empty()) gap = csv::parse_double(row, 1, "trailing12_gap_pct");
    if (row.fields[2] != "true" && row.fields[2] != "false") {
      throw DataError("line " + std::to_string(row.line) + ": flagged must be true or false");
    }
    out.push_back({StateId::parse(row.fields[0]), gap, row.fields[2] == "true"});
  });
  return out;
}

}  // namespace fuelcast
