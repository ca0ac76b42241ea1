#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "fuelcast/errors.hpp"
#include "tree_builder.hpp"

namespace fuelcast {

double ForestModel::predict_row(std::span<const double> row) const {
  double sum = 0.0;
  for (const auto& tree : trees) sum += tree.predict_row(row);
  return sum / static_cast<double>(trees.size());
}

namespace {

std::mt19937_64 tree_rng(std::uint64_t master_seed, std::size_t tree_index) {
  auto index = static_cast<std::uint64_t>(tree_index);
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

struct TreeFit {
  TreeModel tree;
  std::vector<bool> in_bag;
};

TreeFit fit_one(const Matrix& x, std::span<const double> y, const ForestParams& params, std::size_t m,
                std::uint64_t master_seed, std::size_t index) {
  auto rng = tree_rng(master_seed, index);
  const std::size_t n = x.rows();
  std::vector<std::size_t> rows(n);
  std::vector<bool> in_bag(n, !params.bootstrap);
  if (params.bootstrap) {
    std::uniform_int_distribution<std::size_t> draw(0, n - 1);
    for (auto& r : rows) {
      r = draw(rng);
      in_bag[r] = true;
    }
  } else {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  }
  TreeParams tree_params{params.max_depth, params.min_leaf, params.min_split};
  detail::TreeBuilder builder(x, y, tree_params, m, &rng);
  return {builder.build(std::move(rows)), std::move(in_bag)};
}

}  // namespace

ForestModel fit_forest(const Matrix& x, std::span<const double> y, const ForestParams& params,
                       std::uint64_t master_seed) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n == 0) throw ModelError("fit_forest: empty training set");
  if (y.size() != n) throw ModelError("fit_forest: target length does not match rows");
  if (params.n_trees == 0) throw ModelError("fit_forest: n_trees must be >= 1");
  const std::size_t m = params.resolved_m(p);
  if (m < 1 || m > p) {
    throw ModelError("fit_forest: m_features must lie in [1, " + std::to_string(p) + "]");
  }
  if (params.min_leaf == 0 || params.min_split == 0) throw ModelError("fit_forest: min_leaf and min_split must be >= 1");

  std::vector<TreeFit> fits(params.n_trees);
  std::size_t workers = params.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : params.workers;
  workers = std::min(workers, params.n_trees);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < params.n_trees; i = next++) fits[i] = fit_one(x, y, params, m, master_seed, i);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  ForestModel model;
  model.params = params;
  model.master_seed = master_seed;
  model.n_features = p;
  model.trees.reserve(fits.size());

  // out-of-bag estimate, only meaningful with bootstrap sampling
  std::vector<double> oob_sum(n, 0.0);
  std::vector<std::size_t> oob_count(n, 0);
  for (auto& fit : fits) {
    if (params.bootstrap) {
      for (std::size_t r = 0; r < n; ++r) {
        if (!fit.in_bag[r]) {
          oob_sum[r] += fit.tree.predict_row(x.row(r));
          ++oob_count[r];
        }
      }
    }
    model.trees.push_back(std::move(fit.tree));
  }
  if (params.bootstrap) {
    std::vector<double> truth;
    std::vector<double> pred;
    for (std::size_t r = 0; r < n; ++r) {
      if (oob_count[r] == 0) continue;
      truth.push_back(y[r]);
      pred.push_back(oob_sum[r] / static_cast<double>(oob_count[r]));
    }
    try {
      if (truth.size() >= 2) model.oob_r2 = r2(truth, pred);
    } catch (const ModelError&) {
      // constant out-of-bag targets leave the estimate undefined
    }
  }
  return model;
}

}  // namespace fuelcast
