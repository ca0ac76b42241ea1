#include "fuelcast/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "fuelcast/csv.hpp"
#include "fuelcast/errors.hpp"

namespace fuelcast {

namespace {

const MonthKey kLockdown{2020, 4};

// FNV-1a, 64 bit.
std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::size_t FeatureSpec::state_column(StateId state) const {
  auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) throw DataError("state " + std::string(state.code()) + " is not in the feature layout");
  return kMonthColumns + static_cast<std::size_t>(it - states.begin());
}

bool FeatureSpec::has_state(StateId state) const {
  return std::find(states.begin(), states.end(), state) != states.end();
}

std::vector<std::string> FeatureSpec::column_names() const {
  std::vector<std::string> names;
  names.reserve(width());
  for (int m = 1; m <= 12; ++m) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "month_%02d", m);
    names.emplace_back(buf);
  }
  for (StateId s : states) names.push_back("state_" + std::string(s.code()));
  names.insert(names.end(), {"population", "gasoline_rate", "diesel_rate", "pandemic_clock"});
  return names;
}

std::string FeatureSpec::fingerprint() const {
  std::string joined = "layout-v1;target=" + std::string(to_string(target)) + ";";
  for (const auto& n : column_names()) joined += n + ",";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(joined)));
  return buf;
}

int pandemic_clock(MonthKey when) {
  if (when < kLockdown) return 0;
  return months_between(kLockdown, when) + 1;
}

void write_covariates(const FeatureSpec& spec, std::span<double> row, StateId state, MonthKey when,
                      const TaxRates& rates, double population, int clock) {
  std::fill(row.begin(), row.end(), 0.0);
  row[spec.month_column(when.month())] = 1.0;
  row[spec.state_column(state)] = 1.0;
  row[spec.population_column()] = population;
  row[spec.gasoline_rate_column()] = rates.gasoline_cents;
  row[spec.diesel_rate_column()] = rates.diesel_cents;
  row[spec.clock_column()] = static_cast<double>(clock);
}

DesignMatrix build_design(const FuelPanel& panel, const TaxSchedule& tax, const PopulationSeries& population,
                          const FeatureSpec& spec) {
  std::vector<const FuelRecord*> rows;
  for (const auto& r : panel.records()) {
    if (spec.has_state(r.state)) rows.push_back(&r);
  }

  DesignMatrix out{Matrix(rows.size(), spec.width()), {}, {}};
  out.y.reserve(rows.size());
  out.keys.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const FuelRecord& r = *rows[i];
    auto where = [&] { return "(" + std::string(r.state.code()) + ", " + std::to_string(r.when.year()) + ")"; };
    if (!tax.contains(r.state)) throw DataError("missing tax rate for " + where());
    auto persons = population.lookup(r.state, r.when.year());
    if (!persons) throw DataError("missing population for " + where());
    write_covariates(spec, out.x.row(i), r.state, r.when, tax.rates(r.state), static_cast<double>(*persons),
                     pandemic_clock(r.when));
    out.y.push_back(r.volume(spec.target) / 1000.0);
    out.keys.push_back({r.state, r.when});
  }
  return out;
}

std::string to_csv(const DesignMatrix& design, const FeatureSpec& spec) {
  std::string out = "state,year,month";
  for (const auto& n : spec.column_names()) out += "," + n;
  bool with_target = design.y.size() == design.rows();
  if (with_target) out += ",target_mgal";
  out += '\n';
  for (std::size_t i = 0; i < design.rows(); ++i) {
    const auto& k = design.keys[i];
    out += std::string(k.state.code()) + ',' + std::to_string(k.when.year()) + ',' + std::to_string(k.when.month());
    for (double v : design.x.row(i)) out += ',' + csv::format_double(v);
    if (with_target) out += ',' + csv::format_double(design.y[i]);
    out += '\n';
  }
  return out;
}

namespace {

SplitIndex split_ordered(const std::vector<std::size_t>& order, double fraction, std::uint64_t seed) {
  std::size_t n = order.size();
  if (!(fraction > 0.0 && fraction < 1.0)) throw DataError("split fraction must lie in (0, 1)");
  auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (n < 2 || k == 0 || k == n) {
    throw DataError("degenerate split: " + std::to_string(k) + " of " + std::to_string(n) + " rows for training");
  }
  SplitIndex out{{order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k)},
                 {order.begin() + static_cast<std::ptrdiff_t>(k), order.end()},
                 seed,
                 fraction};
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace

SplitIndex split(std::size_t n, double fraction, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return split_ordered(order, fraction, seed);
}

SplitIndex split(const DesignMatrix& design, double fraction, std::uint64_t seed, SplitMode mode) {
  if (mode == SplitMode::random) return split(design.rows(), fraction, seed);
  std::vector<std::size_t> order(design.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ka = design.keys[a];
    const auto& kb = design.keys[b];
    return std::tie(ka.when, ka.state) < std::tie(kb.when, kb.state);
  });
  return split_ordered(order, fraction, seed);
}

}  // namespace fuelcast
