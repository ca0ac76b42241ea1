#pragma once

#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "fuelcast/learn.hpp"

namespace fuelcast::detail {

// Gains within this fraction of the node SSE of the current best count as ties.
inline constexpr double kGainTolerance = 1e-12;

struct SplitChoice {
  std::size_t feature;
  double threshold;
};

// Recursive CART growth over a row-index buffer. With an rng, each split considers a fresh
// random subset of m_features columns; otherwise all columns.
class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const double> y, const TreeParams& params, std::size_t m_features,
              std::mt19937_64* rng);

  // `rows` may repeat indices (bootstrap samples).
  TreeModel build(std::vector<std::size_t> rows);

 private:
  std::int32_t grow(std::size_t begin, std::size_t end, std::size_t depth);
  std::optional<SplitChoice> find_split(std::size_t begin, std::size_t end, double mean, double sse);
  std::span<const std::size_t> candidate_features();

  const Matrix& x_;
  std::span<const double> y_;
  TreeParams params_;
  std::size_t m_features_;
  std::mt19937_64* rng_;

  TreeModel model_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> features_;
  std::vector<std::pair<double, double>> pairs_;
};

}  // namespace fuelcast::detail
