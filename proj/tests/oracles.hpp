#pragma once

// Test-only reference implementations, deliberately written without sharing code with the
// library paths they check.

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

// Solves (X^T X + lambda I) w = X^T y by Gaussian elimination with partial pivoting in
// extended precision.
inline std::vector<double> ridge_normal_equations(const Rows& x, const std::vector<double>& y, double lambda) {
  const std::size_t p = x.front().size();
  std::vector<std::vector<long double>> a(p, std::vector<long double>(p + 1, 0.0L));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      long double s = 0;
      for (std::size_t r = 0; r < x.size(); ++r) s += static_cast<long double>(x[r][i]) * x[r][j];
      a[i][j] = s + (i == j ? lambda : 0.0L);
    }
    long double s = 0;
    for (std::size_t r = 0; r < x.size(); ++r) s += static_cast<long double>(x[r][i]) * y[r];
    a[i][p] = s;
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= p; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> w(p);
  for (std::size_t i = 0; i < p; ++i) w[i] = static_cast<double>(a[i][p] / a[i][i]);
  return w;
}

inline double sse_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double mean = 0;
  for (double e : v) mean += e;
  mean /= static_cast<double>(v.size());
  double s = 0;
  for (double e : v) s += (e - mean) * (e - mean);
  return s;
}

struct Candidate {
  std::size_t feature;
  double threshold;
  double reduction;
};

// Every (feature, midpoint) split of the rows with both sides >= min_leaf, in feature then
// threshold order, with its SSE reduction computed directly from the two partitions.
inline std::vector<Candidate> enumerate_splits(const Rows& x, const std::vector<double>& y,
                                               const std::vector<std::size_t>& rows, std::size_t min_leaf) {
  std::vector<Candidate> out;
  std::vector<double> all;
  for (auto r : rows) all.push_back(y[r]);
  const double parent = sse_of(all);
  const std::size_t p = x.front().size();
  for (std::size_t f = 0; f < p; ++f) {
    std::vector<double> values;
    for (auto r : rows) values.push_back(x[r][f]);
    std::vector<double> distinct;
    for (double v : values) {
      bool seen = false;
      for (double d : distinct) seen = seen || d == v;
      if (!seen) distinct.push_back(v);
    }
    // selection sort keeps this oracle free of library sorting
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      for (std::size_t j = i + 1; j < distinct.size(); ++j) {
        if (distinct[j] < distinct[i]) std::swap(distinct[i], distinct[j]);
      }
    }
    for (std::size_t k = 0; k + 1 < distinct.size(); ++k) {
      double t = (distinct[k] + distinct[k + 1]) / 2.0;
      std::vector<double> left, right;
      for (auto r : rows) (x[r][f] <= t ? left : right).push_back(y[r]);
      if (left.size() < min_leaf || right.size() < min_leaf) continue;
      out.push_back({f, t, parent - sse_of(left) - sse_of(right)});
    }
  }
  return out;
}

// Reductions closer than this fraction of the node SSE are ties, resolved toward the earlier
// candidate in enumeration order.
inline constexpr double kTieTolerance = 1e-12;

inline bool best_split(const Rows& x, const std::vector<double>& y, const std::vector<std::size_t>& rows,
                       std::size_t min_leaf, Candidate& best) {
  std::vector<double> all;
  for (auto r : rows) all.push_back(y[r]);
  const double tol = kTieTolerance * sse_of(all);
  bool found = false;
  for (const auto& c : enumerate_splits(x, y, rows, min_leaf)) {
    double bar = found ? best.reduction + tol : tol;
    if (c.reduction > bar) {
      best = c;
      found = true;
    }
  }
  return found;
}

struct Params {
  std::size_t max_depth;
  std::size_t min_leaf;
  std::size_t min_split;
};

// Grows a tree by exhaustive enumeration and writes each training row's leaf mean into `pred`.
inline void grow(const Rows& x, const std::vector<double>& y, const std::vector<std::size_t>& rows, std::size_t depth,
                 const Params& params, std::vector<double>& pred) {
  double mean = 0;
  for (auto r : rows) mean += y[r];
  mean /= static_cast<double>(rows.size());
  auto leaf = [&] {
    for (auto r : rows) pred[r] = mean;
  };
  std::vector<double> vals;
  for (auto r : rows) vals.push_back(y[r]);
  if (depth >= params.max_depth || rows.size() < params.min_split || sse_of(vals) <= 0.0) return leaf();
  Candidate c{};
  if (!best_split(x, y, rows, params.min_leaf, c)) return leaf();
  std::vector<std::size_t> left, right;
  for (auto r : rows) (x[r][c.feature] <= c.threshold ? left : right).push_back(r);
  grow(x, y, left, depth + 1, params, pred);
  grow(x, y, right, depth + 1, params, pred);
}

inline std::vector<double> exhaustive_tree_predictions(const Rows& x, const std::vector<double>& y, const Params& params) {
  std::vector<std::size_t> rows(x.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  std::vector<double> pred(x.size(), std::numeric_limits<double>::quiet_NaN());
  grow(x, y, rows, 0, params, pred);
  return pred;
}

}  // namespace oracle
