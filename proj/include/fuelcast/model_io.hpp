#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fuelcast/features.hpp"
#include "fuelcast/learn.hpp"

namespace fuelcast {

inline constexpr int kModelFormatVersion = 1;

// A fitted model bound to the feature layout it was trained under.
struct FittedModel {
  Model model;
  std::string fingerprint;
  std::vector<std::string> feature_names;
  Hyperparameters hyperparameters;
};

FittedModel bind_model(Model model, const FeatureSpec& spec, Hyperparameters hyperparameters = {});

// Versioned JSON document: kind tag, hyperparameters, flattened parameters and the
// feature-layout fingerprint. Doubles round-trip exactly.
std::string to_json(const FittedModel& fitted);
// Throws ModelError for malformed documents or unsupported versions.
FittedModel model_from_json(std::string_view text);

// Throws ModelError unless the model was trained under `spec`'s layout.
void require_layout(const FittedModel& fitted, const FeatureSpec& spec);

}  // namespace fuelcast
