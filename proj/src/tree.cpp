#include "tree_builder.hpp"

#include <algorithm>
#include <numeric>

#include "fuelcast/errors.hpp"

namespace fuelcast {

double TreeModel::predict_row(std::span<const double> row) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& node = nodes[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right);
  }
  return nodes[i].value;
}

std::size_t TreeModel::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  // children always follow their parent in the node array
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].is_leaf()) {
      level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

namespace detail {

TreeBuilder::TreeBuilder(const Matrix& x, std::span<const double> y, const TreeParams& params,
                         std::size_t m_features, std::mt19937_64* rng)
    : x_(x), y_(y), params_(params), m_features_(m_features), rng_(rng) {
  features_.resize(x.cols());
  std::iota(features_.begin(), features_.end(), std::size_t{0});
}

TreeModel TreeBuilder::build(std::vector<std::size_t> rows) {
  if (rows.empty()) throw ModelError("fit_tree: empty training set");
  rows_ = std::move(rows);
  model_ = TreeModel{};
  model_.n_features = x_.cols();
  model_.params = params_;
  grow(0, rows_.size(), 0);
  return std::move(model_);
}

std::int32_t TreeBuilder::grow(std::size_t begin, std::size_t end, std::size_t depth) {
  const std::size_t count = end - begin;
  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) sum += y_[rows_[i]];
  const double mean = sum / static_cast<double>(count);
  double sse = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    double d = y_[rows_[i]] - mean;
    sse += d * d;
  }

  auto id = static_cast<std::int32_t>(model_.nodes.size());
  model_.nodes.push_back(TreeNode{-1, 0.0, -1, -1, mean, count});

  if (depth >= params_.max_depth || count < params_.min_split || count < 2 * params_.min_leaf || sse <= 0.0) {
    return id;
  }
  auto best = find_split(begin, end, mean, sse);
  if (!best) return id;

  auto middle = std::stable_partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                      rows_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t r) {
                                        return x_(r, best->feature) <= best->threshold;
                                      });
  auto mid = static_cast<std::size_t>(middle - rows_.begin());

  std::int32_t left = grow(begin, mid, depth + 1);
  std::int32_t right = grow(mid, end, depth + 1);
  auto& node = model_.nodes[static_cast<std::size_t>(id)];
  node.feature = static_cast<std::int32_t>(best->feature);
  node.threshold = best->threshold;
  node.left = left;
  node.right = right;
  return id;
}

std::span<const std::size_t> TreeBuilder::candidate_features() {
  const std::size_t p = features_.size();
  if (rng_ == nullptr || m_features_ >= p) {
    std::iota(features_.begin(), features_.end(), std::size_t{0});
    return features_;
  }
  // partial Fisher-Yates: the first m entries become a uniform random subset
  for (std::size_t i = 0; i < m_features_; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, p - 1);
    std::swap(features_[i], features_[pick(*rng_)]);
  }
  std::sort(features_.begin(), features_.begin() + static_cast<std::ptrdiff_t>(m_features_));
  return {features_.data(), m_features_};
}

std::optional<SplitChoice> TreeBuilder::find_split(std::size_t begin, std::size_t end, double mean, double sse) {
  const std::size_t count = end - begin;
  const double tolerance = kGainTolerance * sse;
  std::optional<SplitChoice> best;
  double best_gain = tolerance;

  auto consider = [&](std::size_t feature, double threshold, std::size_t n_left, double left_sum) {
    std::size_t n_right = count - n_left;
    if (n_left < params_.min_leaf || n_right < params_.min_leaf) return;
    // y is centred on the node mean, so the right-hand sum is -left_sum
    double gain = left_sum * left_sum / static_cast<double>(n_left) + left_sum * left_sum / static_cast<double>(n_right);
    if (gain > best_gain + (best ? tolerance : 0.0)) {
      best_gain = gain;
      best = SplitChoice{feature, threshold};
    }
  };

  for (std::size_t feature : candidate_features()) {
    pairs_.clear();
    bool binary = true;
    for (std::size_t i = begin; i < end; ++i) {
      std::size_t r = rows_[i];
      double v = x_(r, feature);
      binary = binary && (v == 0.0 || v == 1.0);
      pairs_.push_back({v, y_[r] - mean});
    }

    if (binary) {
      std::size_t zeros = 0;
      double zero_sum = 0.0;
      for (const auto& [v, centred] : pairs_) {
        if (v == 0.0) {
          ++zeros;
          zero_sum += centred;
        }
      }
      if (zeros > 0 && zeros < count) consider(feature, 0.5, zeros, zero_sum);
      continue;
    }

    std::sort(pairs_.begin(), pairs_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    double left_sum = 0.0;
    for (std::size_t i = 0; i + 1 < count; ++i) {
      left_sum += pairs_[i].second;
      double lo = pairs_[i].first;
      double hi = pairs_[i + 1].first;
      if (!(lo < hi)) continue;
      double threshold = lo + (hi - lo) / 2.0;
      if (!(threshold < hi)) threshold = lo;
      consider(feature, threshold, i + 1, left_sum);
    }
  }
  return best;
}

}  // namespace detail

TreeModel fit_tree(const Matrix& x, std::span<const double> y, const TreeParams& params) {
  if (x.rows() == 0) throw ModelError("fit_tree: empty training set");
  if (y.size() != x.rows()) throw ModelError("fit_tree: target length does not match rows");
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return detail::TreeBuilder(x, y, params, x.cols(), nullptr).build(std::move(rows));
}

}  // namespace fuelcast
