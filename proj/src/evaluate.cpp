#include <algorithm>
#include <chrono>
#include <cmath>

#include "fuelcast/csv.hpp"
#include "fuelcast/errors.hpp"
#include "fuelcast/learn.hpp"

namespace fuelcast {

std::string_view to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::linear: return "linear";
    case LearnerKind::tree: return "tree";
    case LearnerKind::forest: return "forest";
    case LearnerKind::mlp: return "mlp";
  }
  return "?";
}

LearnerKind parse_learner_kind(std::string_view text) {
  for (auto k : {LearnerKind::linear, LearnerKind::tree, LearnerKind::forest, LearnerKind::mlp}) {
    if (to_string(k) == text) return k;
  }
  throw ConfigError("unknown learner '" + std::string(text) + "' (expected linear, tree, forest or mlp)");
}

LearnerKind kind_of(const Model& model) { return static_cast<LearnerKind>(model.index()); }

std::size_t input_width(const Model& model) {
  struct Visitor {
    std::size_t operator()(const LinearModel& m) const { return m.weights.size(); }
    std::size_t operator()(const TreeModel& m) const { return m.n_features; }
    std::size_t operator()(const ForestModel& m) const { return m.n_features; }
    std::size_t operator()(const MlpModel& m) const { return m.layer_sizes.empty() ? 0 : m.layer_sizes.front(); }
  };
  return std::visit(Visitor{}, model);
}

std::vector<double> predict(const Model& model, const Matrix& x) {
  if (x.cols() != input_width(model)) {
    throw ModelError("predict: model expects " + std::to_string(input_width(model)) + " columns, got " +
                     std::to_string(x.cols()));
  }
  std::vector<double> out(x.rows());
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        for (std::size_t i = 0; i < x.rows(); ++i) {
          auto row = x.row(i);
          if constexpr (std::is_same_v<T, LinearModel>) {
            double v = m.intercept;
            for (std::size_t c = 0; c < row.size(); ++c) v += m.weights[c] * row[c];
            out[i] = v;
          } else {
            out[i] = m.predict_row(row);
          }
        }
      },
      model);
  for (double v : out) {
    if (!std::isfinite(v)) throw ModelError("predict: non-finite prediction");
  }
  return out;
}

double r2(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size()) throw ModelError("r2: length mismatch");
  if (y_true.size() < 2) throw ModelError("r2: need at least two values");
  double mean = 0.0;
  for (double v : y_true) mean += v;
  mean /= static_cast<double>(y_true.size());
  double sse = 0.0;
  double sst = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    sse += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
    sst += (y_true[i] - mean) * (y_true[i] - mean);
  }
  if (!(sst > 0.0)) throw ModelError("r2: undefined for a constant target");
  return 1.0 - sse / sst;
}

Hyperparameters hyperparameters(LearnerKind kind, const LearnConfig& c) {
  auto num = [](double v) { return csv::format_double(v); };
  auto whole = [](std::size_t v) { return v == kUnlimitedDepth ? std::string("unlimited") : std::to_string(v); };
  switch (kind) {
    case LearnerKind::linear:
      return {{"lambda", num(c.linear.lambda)}, {"fit_intercept", c.linear.fit_intercept ? "true" : "false"}};
    case LearnerKind::tree:
      return {{"max_depth", whole(c.tree.max_depth)},
              {"min_leaf", whole(c.tree.min_leaf)},
              {"min_split", whole(c.tree.min_split)}};
    case LearnerKind::forest:
      return {{"n_trees", whole(c.forest.n_trees)},
              {"m_features", c.forest.m_features == 0 ? "ceil(p/3)" : whole(c.forest.m_features)},
              {"bootstrap", c.forest.bootstrap ? "true" : "false"},
              {"max_depth", whole(c.forest.max_depth)},
              {"min_leaf", whole(c.forest.min_leaf)},
              {"min_split", whole(c.forest.min_split)}};
    case LearnerKind::mlp: {
      std::string hidden;
      for (auto h : c.mlp.hidden) hidden += (hidden.empty() ? "" : ":") + std::to_string(h);
      return {{"hidden", hidden.empty() ? "none" : hidden},
              {"epochs", whole(c.mlp.epochs)},
              {"learning_rate", num(c.mlp.learning_rate)},
              {"batch_size", whole(c.mlp.batch_size)}};
    }
  }
  return {};
}

Model fit_learner(LearnerKind kind, const Matrix& x, std::span<const double> y, const LearnConfig& config) {
  switch (kind) {
    case LearnerKind::linear: return fit_linear(x, y, config.linear);
    case LearnerKind::tree: return fit_tree(x, y, config.tree);
    case LearnerKind::forest: return fit_forest(x, y, config.forest, config.seed);
    case LearnerKind::mlp: return fit_mlp(x, y, config.mlp, config.seed);
  }
  throw ModelError("unknown learner");
}

std::pair<Model, FitReport> fit_and_score(LearnerKind kind, const DesignMatrix& design, const SplitIndex& split,
                                          const LearnConfig& config) {
  auto start = std::chrono::steady_clock::now();
  Matrix x_train = design.x.select_rows(split.train);
  Matrix x_test = design.x.select_rows(split.test);
  auto y_train = select<double>(design.y, split.train);
  auto y_test = select<double>(design.y, split.test);

  Model model = fit_learner(kind, x_train, y_train, config);
  FitReport report{kind,
                   hyperparameters(kind, config),
                   config.seed,
                   r2(y_train, predict(model, x_train)),
                   r2(y_test, predict(model, x_test)),
                   0.0};
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(model), std::move(report)};
}

std::vector<FitReport> fit_all(const DesignMatrix& design, const SplitIndex& split, const LearnConfig& config) {
  std::vector<FitReport> reports;
  for (auto kind : {LearnerKind::linear, LearnerKind::tree, LearnerKind::forest, LearnerKind::mlp}) {
    reports.push_back(fit_and_score(kind, design, split, config).second);
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const FitReport& a, const FitReport& b) { return a.r2_test > b.r2_test; });
  return reports;
}

std::string to_csv(std::span<const FitReport> reports) {
  std::string out = "kind,seed,r2_train,r2_test,hyperparameters\n";
  for (const auto& r : reports) {
    std::string hp;
    for (const auto& [k, v] : r.hyperparameters) hp += (hp.empty() ? "" : ";") + k + "=" + v;
    out += std::string(to_string(r.kind)) + ',' + std::to_string(r.seed) + ',' + csv::format_double(r.r2_train) +
           ',' + csv::format_double(r.r2_test) + ',' + hp + '\n';
  }
  return out;
}

std::vector<FitReport> parse_fit_csv(std::string_view text) {
  std::vector<FitReport> out;
  csv::read(text, {"kind", "seed", "r2_train", "r2_test", "hyperparameters"}, [&](const csv::Row& row) {
    FitReport r{parse_learner_kind(row.fields[0]),
                {},
                static_cast<std::uint64_t>(csv::parse_int(row, 1, "seed")),
                csv::parse_double(row, 2, "r2_train"),
                csv::parse_double(row, 3, "r2_test"),
                0.0};
    std::string_view hp = row.fields[4];
    while (!hp.empty()) {
      auto semi = hp.find(';');
      std::string_view item = hp.substr(0, semi);
      auto eq = item.find('=');
      if (eq == std::string_view::npos) throw DataError("line " + std::to_string(row.line) + ": bad hyperparameter");
      r.hyperparameters.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
      hp = semi == std::string_view::npos ? std::string_view{} : hp.substr(semi + 1);
    }
    out.push_back(std::move(r));
  });
  return out;
}

}  // namespace fuelcast
