#include <doctest.h>

#include <cmath>
#include <random>

#include "fuelcast/errors.hpp"
#include "fuelcast/panel.hpp"
#include "fuelcast/synth.hpp"
#include "helpers.hpp"

using namespace fuelcast;

namespace {

const std::string kHeader = "state,year,month,gasoline_kgal,special_fuel_kgal\n";

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("month keys order and roll over years") {
  MonthKey dec(2019, 12);
  CHECK(dec.next() == MonthKey(2020, 1));
  CHECK(MonthKey(2020, 1).prev() == dec);
  CHECK(MonthKey(2012, 1) < MonthKey(2012, 2));
  CHECK(MonthKey(2012, 12) < MonthKey(2013, 1));
  CHECK(months_between(MonthKey(2012, 1), MonthKey(2021, 8)) == 115);
  CHECK(MonthKey::parse("2021-08") == MonthKey(2021, 8));
  CHECK(MonthKey(2024, 3).to_string() == "2024-03");
  CHECK_THROWS_AS(MonthKey(2020, 13), DataError);
  CHECK_THROWS_AS(MonthKey(1999, 1), DataError);
  CHECK_THROWS_AS(MonthKey::parse("2021-8"), DataError);
  CHECK_THROWS_AS(MonthKey(2000, 1).prev(), DataError);
}

TEST_CASE("state codes") {
  CHECK(StateId::parse("TX").code() == "TX");
  CHECK(StateId::parse("DC").is_dc());
  CHECK_THROWS_AS(StateId::parse("XX"), DataError);
  CHECK_THROWS_AS(StateId::parse("tx"), DataError);
  CHECK(modeling_set().size() == 50);
  CHECK(modeling_set(true).size() == 51);
  auto set = modeling_set();
  CHECK(std::is_sorted(set.begin(), set.end(), [](StateId a, StateId b) { return a.code() < b.code(); }));
}

TEST_CASE("parse_fuel_csv single row") {
  auto panel = parse_fuel_csv(kHeader + "TX,2021,8,1000000,300000\n");
  REQUIRE(panel.size() == 1);
  auto tx = StateId::parse("TX");
  CHECK(panel.coverage(tx) == Coverage{MonthKey(2021, 8), MonthKey(2021, 8)});
  const FuelRecord* r = panel.find(tx, MonthKey(2021, 8));
  REQUIRE(r != nullptr);
  CHECK(r->gasoline == 1000000.0);
  CHECK(r->special_fuel == 300000.0);
}

TEST_CASE("parse_fuel_csv errors carry line numbers") {
  auto dup = error_of([&] { parse_fuel_csv(kHeader + "TX,2021,8,1,1\nTX,2021,8,2,2\n"); });
  CHECK(dup.find("line 3") != std::string::npos);
  CHECK(dup.find("duplicate") != std::string::npos);

  CHECK(error_of([&] { parse_fuel_csv("state,year,month\nTX,2021,8\n"); }).find("header") != std::string::npos);
  CHECK(error_of([&] { parse_fuel_csv(""); }).find("header") != std::string::npos);
  CHECK(error_of([&] { parse_fuel_csv(kHeader + "TX,2021,8,1,1\nZZ,2021,8,1,1\n"); }).find("line 3") != std::string::npos);
  auto month = error_of([&] { parse_fuel_csv(kHeader + "TX,2021,13,1,1\n"); });
  CHECK(month.find("line 2") != std::string::npos);
  CHECK(month.find("month") != std::string::npos);
  CHECK(error_of([&] { parse_fuel_csv(kHeader + "TX,2021,1,-1,1\n"); }).find("negative") != std::string::npos);
  CHECK(error_of([&] { parse_fuel_csv(kHeader + "TX,2021,1,abc,1\n"); }).find("line 2") != std::string::npos);
  CHECK(error_of([&] { parse_fuel_csv(kHeader + "TX,2021,1,1e6,1\n"); }).find("line 2") != std::string::npos);
  CHECK(error_of([&] { parse_fuel_csv(kHeader + "TX,2021,1,1\n"); }).find("fields") != std::string::npos);
}

TEST_CASE("full synthetic span has 5800 records") {
  auto text = to_csv(generate(default_synth_config()));
  auto panel = parse_fuel_csv(text);
  CHECK(panel.size() == 5800);
  CHECK(panel.states().size() == 50);
  CHECK(panel.first_month() == MonthKey(2012, 1));
  CHECK(panel.last_month() == MonthKey(2021, 8));
}

TEST_CASE("row order does not matter and CSV round-trips") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    FuelPanel panel = testing_support::random_panel(rng);
    std::string text = to_csv(panel);
    CHECK(parse_fuel_csv(text) == panel);

    // shuffle the data rows
    std::vector<std::string> lines;
    std::size_t pos = text.find('\n') + 1;
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      lines.push_back(text.substr(pos, nl - pos + 1));
      pos = nl + 1;
    }
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string shuffled = kHeader;
    for (const auto& l : lines) shuffled += l;
    CHECK(parse_fuel_csv(shuffled) == panel);
  }
}

TEST_CASE("coverage tracks per-state bounds") {
  auto ca = StateId::parse("CA");
  auto tx = StateId::parse("TX");
  FuelPanel panel({{tx, MonthKey(2015, 3), 1, 1}, {ca, MonthKey(2013, 1), 1, 1}, {tx, MonthKey(2012, 6), 1, 1}});
  CHECK(panel.coverage(tx) == Coverage{MonthKey(2012, 6), MonthKey(2015, 3)});
  CHECK(panel.coverage(ca) == Coverage{MonthKey(2013, 1), MonthKey(2013, 1)});
  CHECK_FALSE(panel.coverage(StateId::parse("NY")).has_value());
}

TEST_CASE("tax schedule parsing") {
  auto schedule = bundled_tax_schedule();
  auto parsed = parse_tax_csv(to_csv(schedule));
  CHECK(parsed == schedule);
  CHECK(parsed.rates(StateId::parse("TX")) == TaxRates{20.0, 20.0});
  CHECK(parsed.rates(StateId::parse("CA")) == TaxRates{50.5, 38.5});
  CHECK(parsed.federal() == TaxRates{18.4, 24.4});
  CHECK(parsed.rates(StateId::parse("PA")) == TaxRates{57.6, 74.1});

  std::string text = to_csv(schedule);
  auto without = [&](const std::string& row) {
    std::string out = text;
    out.erase(out.find(row), row.size());
    return out;
  };
  CHECK(error_of([&] { parse_tax_csv(without("TX,20,20\n")); }).find("TX") != std::string::npos);
  CHECK(error_of([&] { parse_tax_csv(without("FED,18.4,24.4\n")); }).find("FED") != std::string::npos);
  // DC is not in the default modeling set, so it may be absent
  CHECK_NOTHROW(parse_tax_csv(without("DC,23.5,23.5\n")));
  CHECK_THROWS_AS(parse_tax_csv("state,gasoline_cents,diesel_cents\nFED,18.4,24.4\nTX,0,20\n"), DataError);
  CHECK_THROWS_AS(parse_tax_csv("state,gasoline_cents,diesel_cents\nFED,18.4,24.4\nTX,20,200\n"), DataError);
}

TEST_CASE("population parsing") {
  auto tx = StateId::parse("TX");
  auto series = parse_population_csv("state,year,population\nTX,2020,29000000\n");
  CHECK(series.lookup(tx, 2020) == 29000000);
  CHECK_FALSE(series.lookup(tx, 2019).has_value());

  std::string gap = "state,year,population\n";
  for (int y = 2012; y <= 2021; ++y) {
    if (y != 2020) gap += "TX," + std::to_string(y) + ",1000\n";
  }
  CHECK(error_of([&] { parse_population_csv(gap); }).find("2020") != std::string::npos);
  CHECK(error_of([&] { parse_population_csv("state,year,population\nTX,2020,-5\n"); }).find("positive") !=
        std::string::npos);
  CHECK_THROWS_AS(parse_population_csv("state,year,population\nQQ,2020,5\n"), DataError);

  auto synth = synth_population(modeling_set(), 2012, 2021);
  CHECK(parse_population_csv(to_csv(synth)) == synth);
}

TEST_CASE("validate_panel") {
  auto states = modeling_set();
  MonthKey first(2012, 1), last(2021, 8);
  auto full = testing_support::flat_panel(states, first, last);
  CHECK(validate_panel(full, first, last).empty());

  auto tx = StateId::parse("TX");
  std::vector<FuelRecord> records(full.records().begin(), full.records().end());
  std::erase_if(records, [&](const FuelRecord& r) { return r.state == tx && r.when == MonthKey(2020, 3); });
  auto issues = validate_panel(FuelPanel(records), first, last);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].kind == ValidationIssue::Kind::missing_month);
  CHECK(issues[0].state == tx);
  CHECK(issues[0].when == MonthKey(2020, 3));

  records.push_back({tx, MonthKey(2020, 3), 0.0, 5.0});
  auto zero = validate_panel(FuelPanel(records), first, last);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].is_warning());
  CHECK(zero[0].fuel == FuelKind::gasoline);
}

TEST_CASE("change_report matches published deltas") {
  auto ca = StateId::parse("CA");
  auto il = StateId::parse("IL");
  MonthKey from(2019, 8), to(2021, 8);
  FuelPanel panel({{ca, from, 1200000, 500000}, {ca, to, 1086300, 500000}, {il, from, 400000, 150000},
                   {il, to, 400000, 122200}});

  auto gas = change_report(panel, from, to, FuelKind::gasoline);
  REQUIRE(gas.size() == 2);
  CHECK(gas[0].state == ca);
  CHECK(gas[0].delta_mgal == -113.7);
  CHECK(*gas[0].pct == doctest::Approx(-9.475));
  CHECK(gas[1].delta_mgal == 0.0);
  CHECK(*gas[1].pct == 0.0);

  auto special = change_report(panel, from, to, FuelKind::special_fuel);
  CHECK(special[0].state == il);
  CHECK(special[0].delta_mgal == doctest::Approx(-27.8).epsilon(1e-12));

  auto csv_text = to_csv(special);
  auto back = parse_changes_csv(csv_text);
  REQUIRE(back.size() == special.size());
  CHECK(back[0].delta_mgal == special[0].delta_mgal);
}

TEST_CASE("change_report errors and undefined percentages") {
  auto ca = StateId::parse("CA");
  auto tx = StateId::parse("TX");
  MonthKey from(2019, 8), to(2021, 8);
  FuelPanel missing({{ca, from, 1, 1}, {ca, to, 1, 1}, {tx, from, 1, 1}});
  auto msg = error_of([&] { change_report(missing, from, to, FuelKind::gasoline); });
  CHECK(msg.find("TX") != std::string::npos);
  CHECK(msg.find("2021-08") != std::string::npos);

  FuelPanel zero({{tx, from, 0, 1}, {tx, to, 10, 1}});
  auto entries = change_report(zero, from, to, FuelKind::gasoline);
  CHECK_FALSE(entries[0].pct.has_value());
  CHECK(entries[0].delta_mgal == doctest::Approx(0.01));

  // DC is skipped unless it is part of the modeling set
  auto dc = StateId::parse("DC");
  FuelPanel with_dc({{dc, from, 5, 1}, {dc, to, 1, 1}});
  CHECK(change_report(with_dc, from, to, FuelKind::gasoline).empty());
  auto all = modeling_set(true);
  CHECK(change_report(with_dc, from, to, FuelKind::gasoline, all).size() == 1);
}

TEST_CASE("change_report properties on random panels") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> volume(0.0, 3e6);
  std::uniform_real_distribution<double> shift(-1e5, 1e5);
  auto states = modeling_set();
  for (int trial = 0; trial < 100; ++trial) {
    MonthKey from(2019, 8), to(2021, 8);
    std::vector<FuelRecord> records;
    for (StateId s : states) {
      records.push_back({s, from, volume(rng), volume(rng)});
      records.push_back({s, to, volume(rng), volume(rng)});
    }
    FuelPanel panel(records);
    auto forward = change_report(panel, from, to, FuelKind::gasoline);
    auto backward = change_report(panel, to, from, FuelKind::gasoline);
    std::map<StateId, double> back;
    for (const auto& e : backward) back[e.state] = e.delta_mgal;
    double sum = 0.0;
    for (const auto& e : forward) {
      CHECK(back[e.state] == -e.delta_mgal);
      sum += e.delta_mgal;
    }
    double national_from = 0.0, national_to = 0.0;
    for (const auto& r : records) (r.when == from ? national_from : national_to) += r.gasoline;
    double expected = (national_to - national_from) / 1000.0;
    CHECK(std::fabs(sum - expected) <= 1e-9 * std::max(1.0, std::fabs(expected)));

    // translation covariance for one state (integral shift keeps the arithmetic exact)
    double c = std::round(shift(rng));
    std::vector<FuelRecord> moved = records;
    for (auto& r : moved) {
      if (r.state == states[0]) r.gasoline = std::round(r.gasoline) + c + 2e5;
    }
    std::vector<FuelRecord> rounded = records;
    for (auto& r : rounded) {
      if (r.state == states[0]) r.gasoline = std::round(r.gasoline) + 2e5;
    }
    auto a = change_report(FuelPanel(moved), from, to, FuelKind::gasoline);
    auto b = change_report(FuelPanel(rounded), from, to, FuelKind::gasoline);
    auto pick = [&](const std::vector<ChangeEntry>& v) {
      for (const auto& e : v) {
        if (e.state == states[0]) return e.delta_mgal;
      }
      return std::nan("");
    };
    CHECK(pick(a) == pick(b));
  }
}
