#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fuelcast/features.hpp"
#include "fuelcast/matrix.hpp"

namespace fuelcast {

// ---------------------------------------------------------------------------
// Linear regression

struct LinearParams {
  double lambda = 1e-6;  // ridge penalty on weights; the intercept is never penalized
  bool fit_intercept = true;
};

struct LinearModel {
  std::vector<double> weights;
  double intercept = 0.0;
  double ridge_lambda = 0.0;
  bool fit_intercept = true;
};

// Minimizes ||y - Xw - b||^2 + lambda ||w||^2. With lambda = 0 and a rank-deficient X the
// minimum-norm least-squares solution is returned.
LinearModel fit_linear(const Matrix& x, std::span<const double> y, const LinearParams& params = {});

// ---------------------------------------------------------------------------
// Regression tree (CART)

inline constexpr std::size_t kUnlimitedDepth = std::numeric_limits<std::uint32_t>::max();

struct TreeParams {
  std::size_t max_depth = 12;
  std::size_t min_leaf = 5;
  std::size_t min_split = 10;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // rows with x[feature] <= threshold go left
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // mean training target of the node
  std::size_t count = 0;

  bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::size_t n_features = 0;
  TreeParams params;

  double predict_row(std::span<const double> row) const;
  std::size_t depth() const;
  std::size_t leaf_count() const;
};

// Greedy CART on squared error. Candidate thresholds are midpoints between consecutive
// distinct values; the best reduction wins, ties going to the lowest feature and then the
// lowest threshold.
TreeModel fit_tree(const Matrix& x, std::span<const double> y, const TreeParams& params = {});

// ---------------------------------------------------------------------------
// Random forest

struct ForestParams {
  std::size_t n_trees = 200;
  std::size_t m_features = 0;  // 0 selects ceil(p / 3)
  bool bootstrap = true;
  std::size_t min_leaf = 5;
  std::size_t max_depth = 12;
  std::size_t min_split = 10;
  std::size_t workers = 1;  // threads used for fitting; 0 uses the hardware concurrency

  std::size_t resolved_m(std::size_t p) const { return m_features == 0 ? (p + 2) / 3 : m_features; }
};

struct ForestModel {
  std::vector<TreeModel> trees;
  ForestParams params;
  std::uint64_t master_seed = 0;
  std::size_t n_features = 0;
  std::optional<double> oob_r2;  // informational

  double predict_row(std::span<const double> row) const;
};

// Tree i draws its bootstrap sample and split features from a generator seeded only by
// (master_seed, i), so the result does not depend on params.workers.
ForestModel fit_forest(const Matrix& x, std::span<const double> y, const ForestParams& params,
                       std::uint64_t master_seed);

// ---------------------------------------------------------------------------
// Multilayer perceptron: tanh hidden layers, identity output, standardized inputs and target.

struct MlpParams {
  std::vector<std::size_t> hidden = {64};
  std::size_t epochs = 200;
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
};

struct MlpLayer {
  Matrix weights;  // outputs x inputs
  std::vector<double> bias;
};

struct MlpModel {
  std::vector<std::size_t> layer_sizes;  // input, hidden..., 1
  std::vector<MlpLayer> layers;
  std::vector<double> input_mean;
  std::vector<double> input_scale;
  double target_mean = 0.0;
  double target_scale = 1.0;
  std::vector<double> loss_history;  // mean training loss per epoch (standardized units)

  double predict_row(std::span<const double> row) const;
};

// Glorot-uniform weights and zero biases for the given layer sizes.
std::vector<MlpLayer> init_mlp_layers(std::span<const std::size_t> layer_sizes, std::uint64_t seed);

struct MlpGradient {
  double loss = 0.0;  // mean squared error over the rows
  std::vector<MlpLayer> layers;
};

// Loss and backpropagated gradient of the network on already standardized data.
MlpGradient mlp_gradient(std::span<const MlpLayer> layers, const Matrix& x, std::span<const double> y);
double mlp_loss(std::span<const MlpLayer> layers, const Matrix& x, std::span<const double> y);

// Throws ModelError naming the epoch if the loss stops being finite.
MlpModel fit_mlp(const Matrix& x, std::span<const double> y, const MlpParams& params, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Uniform prediction and evaluation

using Model = std::variant<LinearModel, TreeModel, ForestModel, MlpModel>;

enum class LearnerKind { linear, tree, forest, mlp };

std::string_view to_string(LearnerKind kind);
LearnerKind parse_learner_kind(std::string_view text);
LearnerKind kind_of(const Model& model);
std::size_t input_width(const Model& model);

// Throws ModelError when x has the wrong number of columns.
std::vector<double> predict(const Model& model, const Matrix& x);

// Coefficient of determination 1 - SSE/SST. Throws ModelError for a constant y_true or
// mismatched lengths.
double r2(std::span<const double> y_true, std::span<const double> y_pred);

struct LearnConfig {
  LinearParams linear;
  TreeParams tree;
  ForestParams forest;
  MlpParams mlp;
  std::uint64_t seed = 42;
};

using Hyperparameters = std::vector<std::pair<std::string, std::string>>;

Hyperparameters hyperparameters(LearnerKind kind, const LearnConfig& config);

struct FitReport {
  LearnerKind kind;
  Hyperparameters hyperparameters;
  std::uint64_t seed;
  double r2_train;
  double r2_test;
  double wall_seconds;
};

Model fit_learner(LearnerKind kind, const Matrix& x, std::span<const double> y, const LearnConfig& config);

// Fits `kind` on the training rows and scores both sides of the split.
std::pair<Model, FitReport> fit_and_score(LearnerKind kind, const DesignMatrix& design, const SplitIndex& split,
                                          const LearnConfig& config);

// All four learners, sorted by r2_test descending.
std::vector<FitReport> fit_all(const DesignMatrix& design, const SplitIndex& split, const LearnConfig& config);

// kind,seed,r2_train,r2_test,hyperparameters (wall time is left out so files are reproducible).
std::string to_csv(std::span<const FitReport> reports);
std::vector<FitReport> parse_fit_csv(std::string_view text);

}  // namespace fuelcast
