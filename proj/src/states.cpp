#include "fuelcast/states.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "fuelcast/errors.hpp"

namespace fuelcast {

namespace {

// Rates: cents per gallon as of July 2020. Population: 2020 census counts.
constexpr std::array<StateInfo, 51> kStates{{
    {"AK", "Alaska", 8.0, 8.0, 733391},
    {"AL", "Alabama", 26.0, 27.0, 5024279},
    {"AR", "Arkansas", 24.8, 28.8, 3011524},
    {"AZ", "Arizona", 18.0, 26.0, 7151502},
    {"CA", "California", 50.5, 38.5, 39538223},
    {"CO", "Colorado", 22.0, 20.5, 5773714},
    {"CT", "Connecticut", 25.0, 46.5, 3605944},
    {"DC", "District of Columbia", 23.5, 23.5, 689545},
    {"DE", "Delaware", 23.0, 22.0, 989948},
    {"FL", "Florida", 37.8, 37.8, 21538187},
    {"GA", "Georgia", 27.9, 31.3, 10711908},
    {"HI", "Hawaii", 16.0, 16.0, 1455271},
    {"IA", "Iowa", 31.0, 33.5, 3190369},
    {"ID", "Idaho", 33.0, 33.0, 1839106},
    {"IL", "Illinois", 39.8, 47.3, 12812508},
    {"IN", "Indiana", 32.0, 52.0, 6785528},
    {"KS", "Kansas", 24.0, 26.0, 2937880},
    {"KY", "Kentucky", 24.6, 21.6, 4505836},
    {"LA", "Louisiana", 20.0, 20.0, 4657757},
    {"MA", "Massachusetts", 24.0, 24.0, 7029917},
    {"MD", "Maryland", 36.3, 37.1, 6177224},
    {"ME", "Maine", 30.0, 31.2, 1362359},
    {"MI", "Michigan", 26.3, 26.3, 10077331},
    {"MN", "Minnesota", 28.5, 28.5, 5706494},
    {"MO", "Missouri", 17.0, 17.0, 6154913},
    {"MS", "Mississippi", 18.4, 18.4, 2961279},
    {"MT", "Montana", 32.8, 30.2, 1084225},
    {"NC", "North Carolina", 36.4, 36.4, 10439388},
    {"ND", "North Dakota", 23.0, 23.0, 779094},
    {"NE", "Nebraska", 34.1, 34.1, 1961504},
    {"NH", "New Hampshire", 23.8, 23.8, 1377529},
    {"NJ", "New Jersey", 37.1, 40.1, 9288994},
    {"NM", "New Mexico", 17.0, 21.0, 2117522},
    {"NV", "Nevada", 23.8, 27.0, 3104614},
    {"NY", "New York", 25.5, 23.7, 20201249},
    {"OH", "Ohio", 38.5, 47.0, 11799448},
    {"OK", "Oklahoma", 20.0, 20.0, 3959353},
    {"OR", "Oregon", 36.0, 36.0, 4237256},
    {"PA", "Pennsylvania", 57.6, 74.1, 13002700},
    {"RI", "Rhode Island", 35.0, 35.0, 1097379},
    {"SC", "South Carolina", 24.0, 24.0, 5118425},
    {"SD", "South Dakota", 30.0, 30.0, 886667},
    {"TN", "Tennessee", 26.0, 27.0, 6910840},
    {"TX", "Texas", 20.0, 20.0, 29145505},
    {"UT", "Utah", 30.0, 30.0, 3271616},
    {"VA", "Virginia", 16.2, 20.2, 8631393},
    {"VT", "Vermont", 30.5, 31.0, 643077},
    {"WA", "Washington", 49.4, 49.4, 7705281},
    {"WI", "Wisconsin", 30.9, 30.9, 5893718},
    {"WV", "West Virginia", 35.7, 35.7, 1793716},
    {"WY", "Wyoming", 24.0, 24.0, 576851},
}};

constexpr std::size_t kDcIndex = 7;

}  // namespace

std::span<const StateInfo> state_table() { return kStates; }

StateId StateId::parse(std::string_view code) {
  auto it = std::lower_bound(kStates.begin(), kStates.end(), code,
                             [](const StateInfo& s, std::string_view c) { return s.code < c; });
  if (it == kStates.end() || it->code != code) {
    throw DataError("unknown state code '" + std::string(code) + "'");
  }
  return StateId(static_cast<std::size_t>(it - kStates.begin()));
}

StateId StateId::from_index(std::size_t index) {
  if (index >= kStates.size()) throw DataError("state index out of range");
  return StateId(index);
}

std::string_view StateId::code() const { return kStates[index_].code; }
const StateInfo& StateId::info() const { return kStates[index_]; }
bool StateId::is_dc() const { return index_ == kDcIndex; }

std::vector<StateId> modeling_set(bool include_dc) {
  std::vector<StateId> out;
  for (std::size_t i = 0; i < kStates.size(); ++i) {
    if (i == kDcIndex && !include_dc) continue;
    out.push_back(StateId::from_index(i));
  }
  return out;
}

}  // namespace fuelcast
