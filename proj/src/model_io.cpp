#include "fuelcast/model_io.hpp"

#include <json.hpp>

#include "fuelcast/errors.hpp"

namespace fuelcast {

using nlohmann::json;

namespace {

json tree_to_json(const TreeModel& t) {
  json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
       value = json::array(), count = json::array();
  for (const auto& n : t.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
    count.push_back(n.count);
  }
  return {{"n_features", t.n_features},
          {"max_depth", t.params.max_depth},
          {"min_leaf", t.params.min_leaf},
          {"min_split", t.params.min_split},
          {"feature", feature},
          {"threshold", threshold},
          {"left", left},
          {"right", right},
          {"value", value},
          {"count", count}};
}

TreeModel tree_from_json(const json& j) {
  TreeModel t;
  t.n_features = j.at("n_features").get<std::size_t>();
  t.params = {j.at("max_depth").get<std::size_t>(), j.at("min_leaf").get<std::size_t>(),
              j.at("min_split").get<std::size_t>()};
  const auto& feature = j.at("feature");
  std::size_t size = feature.size();
  for (const char* key : {"threshold", "left", "right", "value", "count"}) {
    if (j.at(key).size() != size) throw ModelError(std::string("tree arrays disagree in length at '") + key + "'");
  }
  for (std::size_t i = 0; i < size; ++i) {
    TreeNode n{feature[i].get<std::int32_t>(), j["threshold"][i].get<double>(), j["left"][i].get<std::int32_t>(),
               j["right"][i].get<std::int32_t>(), j["value"][i].get<double>(), j["count"][i].get<std::size_t>()};
    if (!n.is_leaf()) {
      auto in_range = [&](std::int32_t c) { return c > static_cast<std::int32_t>(i) && static_cast<std::size_t>(c) < size; };
      if (static_cast<std::size_t>(n.feature) >= t.n_features || !in_range(n.left) || !in_range(n.right)) {
        throw ModelError("tree node " + std::to_string(i) + " is malformed");
      }
    }
    t.nodes.push_back(n);
  }
  if (t.nodes.empty()) throw ModelError("tree has no nodes");
  return t;
}

json params_to_json(const Model& model) {
  struct Visitor {
    json operator()(const LinearModel& m) const {
      return {{"weights", m.weights},
              {"intercept", m.intercept},
              {"ridge_lambda", m.ridge_lambda},
              {"fit_intercept", m.fit_intercept}};
    }
    json operator()(const TreeModel& m) const { return tree_to_json(m); }
    json operator()(const ForestModel& m) const {
      json trees = json::array();
      for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
      return {{"n_trees", m.params.n_trees},
              {"m_features", m.params.m_features},
              {"bootstrap", m.params.bootstrap},
              {"max_depth", m.params.max_depth},
              {"min_leaf", m.params.min_leaf},
              {"min_split", m.params.min_split},
              {"master_seed", m.master_seed},
              {"n_features", m.n_features},
              {"oob_r2", m.oob_r2 ? json(*m.oob_r2) : json(nullptr)},
              {"trees", trees}};
    }
    json operator()(const MlpModel& m) const {
      json layers = json::array();
      for (const auto& l : m.layers) {
        std::vector<double> w(l.weights.data().begin(), l.weights.data().end());
        layers.push_back({{"rows", l.weights.rows()}, {"cols", l.weights.cols()}, {"weights", w}, {"bias", l.bias}});
      }
      return {{"layer_sizes", m.layer_sizes},
              {"activation", "tanh"},
              {"layers", layers},
              {"input_mean", m.input_mean},
              {"input_scale", m.input_scale},
              {"target_mean", m.target_mean},
              {"target_scale", m.target_scale},
              {"loss_history", m.loss_history}};
    }
  };
  return std::visit(Visitor{}, model);
}

Model params_from_json(LearnerKind kind, const json& j) {
  switch (kind) {
    case LearnerKind::linear: {
      LinearModel m;
      m.weights = j.at("weights").get<std::vector<double>>();
      m.intercept = j.at("intercept").get<double>();
      m.ridge_lambda = j.at("ridge_lambda").get<double>();
      m.fit_intercept = j.at("fit_intercept").get<bool>();
      if (m.weights.empty()) throw ModelError("linear model has no weights");
      return m;
    }
    case LearnerKind::tree: return tree_from_json(j);
    case LearnerKind::forest: {
      ForestModel m;
      m.params.n_trees = j.at("n_trees").get<std::size_t>();
      m.params.m_features = j.at("m_features").get<std::size_t>();
      m.params.bootstrap = j.at("bootstrap").get<bool>();
      m.params.max_depth = j.at("max_depth").get<std::size_t>();
      m.params.min_leaf = j.at("min_leaf").get<std::size_t>();
      m.params.min_split = j.at("min_split").get<std::size_t>();
      m.master_seed = j.at("master_seed").get<std::uint64_t>();
      m.n_features = j.at("n_features").get<std::size_t>();
      if (!j.at("oob_r2").is_null()) m.oob_r2 = j["oob_r2"].get<double>();
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
      if (m.trees.empty()) throw ModelError("forest has no trees");
      return m;
    }
    case LearnerKind::mlp: {
      MlpModel m;
      m.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
      for (const auto& l : j.at("layers")) {
        auto rows = l.at("rows").get<std::size_t>();
        auto cols = l.at("cols").get<std::size_t>();
        auto w = l.at("weights").get<std::vector<double>>();
        if (w.size() != rows * cols) throw ModelError("mlp layer weight count mismatch");
        MlpLayer layer{Matrix(rows, cols), l.at("bias").get<std::vector<double>>()};
        for (std::size_t r = 0; r < rows; ++r) std::copy_n(w.begin() + static_cast<std::ptrdiff_t>(r * cols), cols, layer.weights.row(r).begin());
        m.layers.push_back(std::move(layer));
      }
      m.input_mean = j.at("input_mean").get<std::vector<double>>();
      m.input_scale = j.at("input_scale").get<std::vector<double>>();
      m.target_mean = j.at("target_mean").get<double>();
      m.target_scale = j.at("target_scale").get<double>();
      m.loss_history = j.at("loss_history").get<std::vector<double>>();
      if (m.layer_sizes.size() != m.layers.size() + 1 || m.layer_sizes.size() < 2 ||
          m.input_mean.size() != m.layer_sizes.front() || m.input_scale.size() != m.layer_sizes.front()) {
        throw ModelError("mlp shapes are inconsistent");
      }
      for (std::size_t l = 0; l < m.layers.size(); ++l) {
        if (m.layers[l].weights.cols() != m.layer_sizes[l] || m.layers[l].weights.rows() != m.layer_sizes[l + 1] ||
            m.layers[l].bias.size() != m.layer_sizes[l + 1]) {
          throw ModelError("mlp layer " + std::to_string(l) + " has the wrong shape");
        }
      }
      return m;
    }
  }
  throw ModelError("unknown model kind");
}

}  // namespace

FittedModel bind_model(Model model, const FeatureSpec& spec, Hyperparameters hyperparameters) {
  if (input_width(model) != spec.width()) throw ModelError("model width does not match the feature layout");
  return {std::move(model), spec.fingerprint(), spec.column_names(), std::move(hyperparameters)};
}

std::string to_json(const FittedModel& fitted) {
  json hp = json::object();
  for (const auto& [k, v] : fitted.hyperparameters) hp[k] = v;
  json doc = {{"format", "fuelcast-model"},
              {"version", kModelFormatVersion},
              {"kind", std::string(to_string(kind_of(fitted.model)))},
              {"feature_fingerprint", fitted.fingerprint},
              {"feature_names", fitted.feature_names},
              {"hyperparameters", hp},
              {"parameters", params_to_json(fitted.model)}};
  return doc.dump(1) + "\n";
}

FittedModel model_from_json(std::string_view text) {
  try {
    json doc = json::parse(text);
    if (doc.at("format") != "fuelcast-model") throw ModelError("not a fuelcast model document");
    int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) throw ModelError("unsupported model format version " + std::to_string(version));
    LearnerKind kind;
    try {
      kind = parse_learner_kind(doc.at("kind").get<std::string>());
    } catch (const ConfigError& e) {
      throw ModelError(e.what());
    }
    FittedModel out{params_from_json(kind, doc.at("parameters")), doc.at("feature_fingerprint").get<std::string>(),
                    doc.at("feature_names").get<std::vector<std::string>>(), {}};
    for (const auto& [k, v] : doc.at("hyperparameters").items()) out.hyperparameters.emplace_back(k, v.get<std::string>());
    if (out.feature_names.size() != input_width(out.model)) throw ModelError("feature names do not match model width");
    return out;
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  }
}

void require_layout(const FittedModel& fitted, const FeatureSpec& spec) {
  if (fitted.fingerprint != spec.fingerprint()) {
    throw ModelError("feature layout fingerprint mismatch: model " + fitted.fingerprint + ", current " +
                     spec.fingerprint());
  }
}

}  // namespace fuelcast
