#include "fuelcast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "fuelcast/errors.hpp"

namespace fuelcast {

SynthConfig default_synth_config() {
  SynthConfig config;
  config.states = modeling_set();
  for (StateId s : config.states) {
    // 28-40 gallons per person per month, spread deterministically by table position
    double spread = std::fmod(static_cast<double>(s.index()) * std::numbers::phi, 1.0);
    double per_capita_kgal = 0.028 + 0.012 * spread;
    config.base_kgal.push_back(std::round(static_cast<double>(s.info().population_2020) * per_capita_kgal));
  }
  return config;
}

void validate(const SynthConfig& c) {
  auto fail = [](const std::string& what) { throw DataError("synth config: " + what); };
  if (c.states.empty()) fail("no states");
  if (c.base_kgal.size() != c.states.size()) fail("base_kgal must have one entry per state");
  if (std::set<StateId>(c.states.begin(), c.states.end()).size() != c.states.size()) fail("duplicate state");
  for (double b : c.base_kgal) {
    if (!std::isfinite(b) || b < 0) fail("base levels must be finite and non-negative");
  }
  if (c.last < c.first) fail("span ends before it starts");
  if (!(c.seasonal_amplitude >= 0 && c.seasonal_amplitude < 1)) fail("seasonal_amplitude must lie in [0, 1)");
  if (!(c.dip_depth >= 0 && c.dip_depth < 1)) fail("dip_depth must lie in [0, 1)");
  if (!std::isfinite(c.annual_growth) || c.annual_growth <= -1) fail("annual_growth must be finite and > -1");
  if (!std::isfinite(c.recovery_halflife) || c.recovery_halflife <= 0) fail("recovery_halflife must be positive");
  if (!std::isfinite(c.noise_sigma) || c.noise_sigma < 0) fail("noise_sigma must be finite and >= 0");
  if (c.dip_onset < c.first) fail("dip_onset precedes the span");
}

double seasonal_factor(double amplitude, int month) {
  return 1.0 + amplitude * std::sin(2.0 * std::numbers::pi * (month - 3) / 12.0);
}

FuelPanel generate(const SynthConfig& c) {
  validate(c);
  std::vector<FuelRecord> records;
  for (std::size_t s = 0; s < c.states.size(); ++s) {
    StateId state = c.states[s];
    std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                      static_cast<std::uint32_t>(state.index())};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, 1.0);

    for (MonthKey t = c.first; t <= c.last; t = t.next()) {
      double years = months_between(c.first, t) / 12.0;
      double trend = std::pow(1.0 + c.annual_growth, years);
      double shock = 1.0;
      if (t >= c.dip_onset) shock = 1.0 - c.dip_depth * std::exp2(-months_between(c.dip_onset, t) / c.recovery_halflife);
      // draws happen unconditionally so sigma does not change the stream layout
      double eps_gas = c.noise_sigma * noise(rng);
      double eps_special = c.noise_sigma * noise(rng);
      double gasoline = c.base_kgal[s] * seasonal_factor(c.seasonal_amplitude, t.month()) * trend * shock * (1.0 + eps_gas);
      double special = 0.3 * c.base_kgal[s] * seasonal_factor(c.seasonal_amplitude / 2.0, t.month()) * trend * shock *
                       (1.0 + eps_special);
      records.push_back({state, t, std::max(0.0, gasoline), std::max(0.0, special)});
    }
  }
  return FuelPanel(std::move(records));
}

PopulationSeries synth_population(const std::vector<StateId>& states, int first_year, int last_year,
                                  double annual_growth) {
  if (last_year < first_year) throw DataError("population year range is empty");
  std::map<StateId, std::map<int, std::int64_t>> values;
  for (StateId s : states) {
    for (int year = first_year; year <= last_year; ++year) {
      double persons = static_cast<double>(s.info().population_2020) * std::pow(1.0 + annual_growth, year - 2020);
      values[s][year] = std::max<std::int64_t>(1, std::llround(persons));
    }
  }
  return PopulationSeries(std::move(values));
}

}  // namespace fuelcast
