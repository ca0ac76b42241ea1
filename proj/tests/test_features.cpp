#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "fuelcast/errors.hpp"
#include "fuelcast/features.hpp"
#include "fuelcast/synth.hpp"
#include "helpers.hpp"

using namespace fuelcast;

TEST_CASE("pandemic clock") {
  CHECK(pandemic_clock(MonthKey(2020, 3)) == 0);
  CHECK(pandemic_clock(MonthKey(2020, 4)) == 1);
  CHECK(pandemic_clock(MonthKey(2015, 6)) == 0);
  // April 2020 .. August 2021 inclusive: 9 months of 2020 + 8 of 2021
  CHECK(pandemic_clock(MonthKey(2021, 8)) == 9 + 8);

  int previous = pandemic_clock(MonthKey(2012, 1));
  for (MonthKey t = MonthKey(2012, 2); t <= MonthKey(2030, 12); t = t.next()) {
    int now = pandemic_clock(t);
    CHECK(now >= previous);
    if (t > MonthKey(2020, 4)) CHECK(now == previous + 1);
    previous = now;
  }
}

TEST_CASE("feature layout") {
  FeatureSpec spec;
  CHECK(spec.width() == 66);
  auto names = spec.column_names();
  REQUIRE(names.size() == 66);
  CHECK(names[0] == "month_01");
  CHECK(names[11] == "month_12");
  CHECK(names[12] == "state_AK");
  CHECK(names[13] == "state_AL");
  CHECK(names[61] == "state_WY");
  CHECK(names[62] == "population");
  CHECK(names[63] == "gasoline_rate");
  CHECK(names[64] == "diesel_rate");
  CHECK(names[65] == "pandemic_clock");
  CHECK(spec.state_column(StateId::parse("TX")) == 12 + 42);

  FeatureSpec other = spec;
  other.target = FuelKind::special_fuel;
  CHECK(other.fingerprint() != spec.fingerprint());
  FeatureSpec with_dc;
  with_dc.states = modeling_set(true);
  CHECK(with_dc.width() == 67);
  CHECK(with_dc.fingerprint() != spec.fingerprint());
}

TEST_CASE("build_design single record") {
  auto tx = StateId::parse("TX");
  FuelPanel panel({{tx, MonthKey(2021, 8), 1000000, 300000}});
  auto pop = parse_population_csv("state,year,population\nTX,2021,29500000\n");
  FeatureSpec spec;
  auto design = build_design(panel, bundled_tax_schedule(), pop, spec);
  REQUIRE(design.rows() == 1);
  auto row = design.x.row(0);
  CHECK(row[spec.month_column(8)] == 1.0);
  CHECK(row[spec.state_column(tx)] == 1.0);
  CHECK(row[spec.clock_column()] == 17.0);
  CHECK(row[spec.population_column()] == 29500000.0);
  CHECK(row[spec.gasoline_rate_column()] == 20.0);
  CHECK(row[spec.diesel_rate_column()] == 20.0);
  int nonzero_indicators = 0;
  for (std::size_t c = 0; c < spec.population_column(); ++c) nonzero_indicators += row[c] != 0.0;
  CHECK(nonzero_indicators == 2);
  CHECK(design.y[0] == 1000.0);

  spec.target = FuelKind::special_fuel;
  CHECK(build_design(panel, bundled_tax_schedule(), pop, spec).y[0] == 300.0);
}

TEST_CASE("build_design on the full synthetic panel") {
  auto config = default_synth_config();
  auto panel = generate(config);
  auto pop = synth_population(config.states, 2012, 2021);
  FeatureSpec spec;
  auto design = build_design(panel, bundled_tax_schedule(), pop, spec);
  CHECK(design.x.rows() == 5800);
  CHECK(design.x.cols() == 66);
  CHECK(design.y.size() == 5800);

  std::set<RowKey> keys(design.keys.begin(), design.keys.end());
  CHECK(keys.size() == 5800);
  for (std::size_t i = 0; i < design.rows(); ++i) {
    auto row = design.x.row(i);
    double indicators = std::accumulate(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(spec.population_column()), 0.0);
    CHECK(indicators == 2.0);
    if (design.keys[i].when.year() == 2015) CHECK(row[spec.clock_column()] == 0.0);
    for (double v : row) CHECK(std::isfinite(v));
  }

  auto header = to_csv(design, spec).substr(0, 40);
  CHECK(header.starts_with("state,year,month,month_01,month_02"));
}

TEST_CASE("build_design missing inputs name the state and year") {
  auto tx = StateId::parse("TX");
  FuelPanel panel({{tx, MonthKey(2021, 8), 1, 1}});
  auto pop = parse_population_csv("state,year,population\nTX,2020,29500000\n");
  try {
    build_design(panel, bundled_tax_schedule(), pop, FeatureSpec{});
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("(TX, 2021)") != std::string::npos);
  }
  std::map<StateId, TaxRates> rates{{StateId::parse("CA"), {1, 1}}};
  auto pop21 = parse_population_csv("state,year,population\nTX,2021,29500000\n");
  CHECK_THROWS_WITH_AS(build_design(panel, TaxSchedule(rates, {1, 1}), pop21, FeatureSpec{}),
                       doctest::Contains("(TX, 2021)"), DataError);
}

TEST_CASE("build_design ignores record order") {
  std::mt19937_64 rng(3);
  auto config = default_synth_config();
  config.last = MonthKey(2012, 12);
  auto panel = generate(config);
  std::vector<FuelRecord> shuffled(panel.records().begin(), panel.records().end());
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto pop = synth_population(config.states, 2012, 2012);
  auto a = build_design(panel, bundled_tax_schedule(), pop, FeatureSpec{});
  auto b = build_design(FuelPanel(shuffled), bundled_tax_schedule(), pop, FeatureSpec{});
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.keys == b.keys);
}

TEST_CASE("split sizes and determinism") {
  auto s = split(10, 0.7, 1);
  CHECK(s.train.size() == 7);
  CHECK(s.test.size() == 3);
  CHECK(split(10, 0.7, 1) == s);
  CHECK(split(10, 0.7, 2) != s);

  auto big = split(5800, 0.7, 42);
  CHECK(big.train.size() == 4060);
  CHECK(big.test.size() == 1740);

  CHECK_THROWS_AS(split(1, 0.5, 1), DataError);
  CHECK_THROWS_AS(split(10, 0.01, 1), DataError);
  CHECK_THROWS_AS(split(10, 0.99, 1), DataError);
  CHECK_THROWS_AS(split(10, 1.0, 1), DataError);
  CHECK_THROWS_AS(split(10, 0.0, 1), DataError);
}

TEST_CASE("split partitions every row") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> size(2, 500);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = size(rng);
    double f = frac(rng);
    SplitIndex s;
    try {
      s = split(n, f, rng());
    } catch (const DataError&) {
      continue;  // degenerate for tiny n
    }
    CHECK(std::fabs(static_cast<double>(s.train.size()) - f * static_cast<double>(n)) <= 0.5);
    std::vector<std::size_t> all = s.train;
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(n);
    std::iota(expected.begin(), expected.end(), std::size_t{0});
    CHECK(all == expected);
  }
}

TEST_CASE("chronological split trains on the earliest months") {
  auto tx = StateId::parse("TX");
  auto ca = StateId::parse("CA");
  std::vector<FuelRecord> records;
  for (MonthKey t(2019, 1); t <= MonthKey(2019, 10); t = t.next()) {
    records.push_back({tx, t, 1, 1});
    records.push_back({ca, t, 1, 1});
  }
  auto pop = synth_population({tx, ca}, 2019, 2019);
  auto design = build_design(FuelPanel(records), bundled_tax_schedule(), pop, FeatureSpec{});
  auto s = split(design, 0.7, 9, SplitMode::chronological);
  CHECK(s.train.size() == 14);
  MonthKey latest_train(2000, 1);
  for (auto i : s.train) latest_train = std::max(latest_train, design.keys[i].when);
  for (auto i : s.test) CHECK(design.keys[i].when > latest_train);
}
