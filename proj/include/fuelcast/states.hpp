#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuelcast {

// Reference data for the 50 states plus DC, ordered alphabetically by postal code.
struct StateInfo {
  std::string_view code;
  std::string_view name;
  double gasoline_cents;  // state motor fuel tax, July 2020
  double diesel_cents;
  std::int64_t population_2020;
};

std::span<const StateInfo> state_table();

inline constexpr double kFederalGasolineCents = 18.4;
inline constexpr double kFederalDieselCents = 24.4;

// Two-letter postal code of one of the 50 states or DC.
class StateId {
 public:
  // Throws DataError for unknown codes.
  static StateId parse(std::string_view code);
  static StateId from_index(std::size_t index);

  std::string_view code() const;
  const StateInfo& info() const;
  bool is_dc() const;
  // Position in state_table().
  std::size_t index() const { return index_; }

  friend auto operator<=>(const StateId&, const StateId&) = default;

 private:
  explicit StateId(std::size_t index) : index_(static_cast<std::uint8_t>(index)) {}
  std::uint8_t index_;
};

// States whose records enter modeling. The default is the 50 states; DC only on request.
std::vector<StateId> modeling_set(bool include_dc = false);

}  // namespace fuelcast
