#include <doctest.h>

#include <cmath>

#include "fuelcast/errors.hpp"
#include "fuelcast/synth.hpp"

using namespace fuelcast;

namespace {

SynthConfig quiet() {
  auto c = default_synth_config();
  c.seasonal_amplitude = 0.0;
  c.annual_growth = 0.0;
  c.dip_depth = 0.0;
  c.noise_sigma = 0.0;
  return c;
}

}  // namespace

TEST_CASE("default config shape") {
  auto c = default_synth_config();
  CHECK(c.states.size() == 50);
  CHECK(c.base_kgal.size() == 50);
  CHECK(months_between(c.first, c.last) + 1 == 116);
  auto panel = generate(c);
  CHECK(panel.size() == 5800);
  CHECK(validate_panel(panel, c.first, c.last).empty());
}

TEST_CASE("with every modulator off the panel equals the base") {
  auto c = quiet();
  auto panel = generate(c);
  for (const auto& r : panel.records()) {
    auto i = static_cast<std::size_t>(std::find(c.states.begin(), c.states.end(), r.state) - c.states.begin());
    CHECK(r.gasoline == c.base_kgal[i]);
    CHECK(r.special_fuel == doctest::Approx(0.3 * c.base_kgal[i]));
  }
}

TEST_CASE("shock depth at onset and recovery") {
  auto c = quiet();
  c.dip_depth = 0.4;
  auto panel = generate(c);
  StateId s = c.states[0];
  double base = c.base_kgal[0];
  CHECK(panel.find(s, c.dip_onset.prev())->gasoline == base);
  CHECK(panel.find(s, c.dip_onset)->gasoline == doctest::Approx(0.6 * base));
  CHECK(panel.find(s, c.dip_onset.plus(6))->gasoline == doctest::Approx(0.8 * base));
  double previous = 0.0;
  for (MonthKey t = c.dip_onset; t <= c.last; t = t.next()) {
    double v = panel.find(s, t)->gasoline;
    CHECK(v > previous);
    CHECK(v < base);
    previous = v;
  }

  auto deeper = c;
  deeper.dip_depth = 0.5;
  auto other = generate(deeper);
  for (MonthKey t = c.dip_onset; t <= c.last; t = t.next()) CHECK(other.find(s, t)->gasoline < panel.find(s, t)->gasoline);
}

TEST_CASE("seasonality is periodic with a summer peak") {
  auto c = quiet();
  c.seasonal_amplitude = 0.12;
  auto panel = generate(c);
  StateId s = c.states[3];
  for (MonthKey t = c.first; t.plus(12) <= c.last; t = t.next())
    CHECK(panel.find(s, t.plus(12))->gasoline == doctest::Approx(panel.find(s, t)->gasoline).epsilon(1e-12));
  CHECK(seasonal_factor(0.12, 6) == doctest::Approx(1.12));
  CHECK(seasonal_factor(0.12, 12) == doctest::Approx(0.88));
}

TEST_CASE("growth compounds annually") {
  auto c = quiet();
  c.annual_growth = 0.02;
  auto panel = generate(c);
  StateId s = c.states[10];
  CHECK(panel.find(s, c.first.plus(12))->gasoline == doctest::Approx(1.02 * c.base_kgal[10]));
  CHECK(panel.find(s, c.first.plus(24))->gasoline == doctest::Approx(1.02 * 1.02 * c.base_kgal[10]));
}

TEST_CASE("generation is deterministic and independent of state order") {
  auto c = default_synth_config();
  CHECK(generate(c) == generate(c));
  auto reordered = c;
  std::reverse(reordered.states.begin(), reordered.states.end());
  std::reverse(reordered.base_kgal.begin(), reordered.base_kgal.end());
  CHECK(generate(reordered) == generate(c));
  auto other = c;
  other.seed += 1;
  CHECK_FALSE(generate(other) == generate(c));
}

TEST_CASE("noise is roughly the configured size") {
  auto c = default_synth_config();
  auto noisy = generate(c);
  c.noise_sigma = 0.0;
  auto clean = generate(c);
  double sum_sq = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    double rel = noisy.records()[i].gasoline / clean.records()[i].gasoline - 1.0;
    sum_sq += rel * rel;
    ++n;
  }
  double sigma = std::sqrt(sum_sq / static_cast<double>(n));
  CHECK(sigma == doctest::Approx(0.03).epsilon(0.1));
}

TEST_CASE("invalid configs are rejected") {
  auto bad = [](auto mutate) {
    auto c = default_synth_config();
    mutate(c);
    CHECK_THROWS_AS(generate(c), DataError);
  };
  bad([](SynthConfig& c) { c.states.clear(); c.base_kgal.clear(); });
  bad([](SynthConfig& c) { c.base_kgal.pop_back(); });
  bad([](SynthConfig& c) { c.base_kgal[0] = -1; });
  bad([](SynthConfig& c) { c.states[1] = c.states[0]; });
  bad([](SynthConfig& c) { c.last = c.first.prev(); });
  bad([](SynthConfig& c) { c.seasonal_amplitude = 1.0; });
  bad([](SynthConfig& c) { c.dip_depth = -0.1; });
  bad([](SynthConfig& c) { c.recovery_halflife = 0; });
  bad([](SynthConfig& c) { c.noise_sigma = std::nan(""); });
  bad([](SynthConfig& c) { c.annual_growth = -1; });
}

TEST_CASE("synthetic population") {
  auto states = modeling_set();
  auto pop = synth_population(states, 2012, 2024);
  auto tx = StateId::parse("TX");
  CHECK(*pop.lookup(tx, 2020) == tx.info().population_2020);
  CHECK(*pop.lookup(tx, 2021) > *pop.lookup(tx, 2020));
  CHECK(pop.years(tx)->first == 2012);
  CHECK(pop.years(tx)->second == 2024);
  CHECK_THROWS_AS(synth_population(states, 2020, 2019), DataError);
}
