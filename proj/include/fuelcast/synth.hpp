#pragma once

#include <cstdint>
#include <vector>

#include "fuelcast/panel.hpp"

namespace fuelcast {

// Parameters of the synthetic panel generator. Gasoline follows
//   base * (1 + A sin(2 pi (month - 3) / 12)) * (1 + g)^(years since start) * shock(t) * (1 + eps)
// with shock(t) = 1 - d * 2^(-(t - onset) / halflife) from the onset month on and 1 before it.
// Special fuel uses the same law at 30% of base and half the seasonal amplitude.
struct SynthConfig {
  std::vector<StateId> states;
  MonthKey first{2012, 1};
  MonthKey last{2021, 8};
  std::vector<double> base_kgal;  // aligned with states
  double seasonal_amplitude = 0.06;
  double annual_growth = 0.01;
  double dip_depth = 0.12;
  double recovery_halflife = 6.0;  // months
  MonthKey dip_onset{2020, 4};
  double noise_sigma = 0.03;  // relative
  std::uint64_t seed = 20200401;
};

// 50 states, Jan 2012 - Aug 2021, base levels proportional to 2020 population with a
// per-state consumption-per-capita factor.
SynthConfig default_synth_config();

// Throws DataError for an invalid config.
void validate(const SynthConfig& config);

// Each state draws its noise from a generator seeded by (seed, state table index), so the
// order of config.states does not affect any value.
FuelPanel generate(const SynthConfig& config);

// The noise-free seasonal factor for a calendar month.
double seasonal_factor(double amplitude, int month);

// Annual population from 2020 census counts compounded at `annual_growth`.
PopulationSeries synth_population(const std::vector<StateId>& states, int first_year, int last_year,
                                  double annual_growth = 0.005);

}  // namespace fuelcast
