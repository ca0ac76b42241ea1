#pragma once

#include <random>
#include <string>
#include <vector>

#include "fuelcast/panel.hpp"
#include "fuelcast/synth.hpp"

namespace testing_support {

using namespace fuelcast;

// Panel with constant volumes for every state in `states` over [first, last].
inline FuelPanel flat_panel(const std::vector<StateId>& states, MonthKey first, MonthKey last, double gasoline = 1000.0,
                            double special = 300.0) {
  std::vector<FuelRecord> records;
  for (StateId s : states) {
    for (MonthKey t = first; t <= last; t = t.next()) records.push_back({s, t, gasoline, special});
  }
  return FuelPanel(std::move(records));
}

inline FuelPanel random_panel(std::mt19937_64& rng, std::size_t max_states = 6, int max_months = 30) {
  std::uniform_int_distribution<std::size_t> n_states(1, max_states);
  std::uniform_int_distribution<int> n_months(1, max_months);
  std::uniform_int_distribution<int> start(0, 200);
  std::uniform_real_distribution<double> volume(0.0, 2e6);
  auto all = modeling_set(true);
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<FuelRecord> records;
  std::size_t count = n_states(rng);
  for (std::size_t i = 0; i < count; ++i) {
    MonthKey first = MonthKey::from_ordinal(start(rng));
    int months = n_months(rng);
    for (int k = 0; k < months; ++k) {
      // alternate between integral and fractional volumes
      double g = volume(rng);
      double s = volume(rng) * 0.3;
      if (k % 2 == 0) g = std::round(g);
      records.push_back({all[i], first.plus(k), g, s});
    }
  }
  return FuelPanel(std::move(records));
}

}  // namespace testing_support
