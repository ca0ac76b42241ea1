#pragma once

#include <stdexcept>
#include <string>

namespace fuelcast {

// Malformed or inconsistent input data (CSV files, panels, schedules).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fitting, prediction and model (de)serialization failures.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration keys/values or command-line usage.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fuelcast
