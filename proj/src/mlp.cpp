#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fuelcast/errors.hpp"
#include "fuelcast/learn.hpp"

namespace fuelcast {

namespace {

// Per-sample activations for every layer, a[0] being the input.
struct Activations {
  std::vector<std::vector<double>> a;
};

void forward(std::span<const MlpLayer> layers, std::span<const double> input, Activations& acts) {
  acts.a.resize(layers.size() + 1);
  acts.a[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    const auto& in = acts.a[l];
    auto& out = acts.a[l + 1];
    out.assign(layer.bias.begin(), layer.bias.end());
    for (std::size_t j = 0; j < out.size(); ++j) {
      auto w = layer.weights.row(j);
      double z = out[j];
      for (std::size_t k = 0; k < in.size(); ++k) z += w[k] * in[k];
      out[j] = l + 1 < layers.size() ? std::tanh(z) : z;
    }
  }
}

std::vector<MlpLayer> zeros_like(std::span<const MlpLayer> layers) {
  std::vector<MlpLayer> out;
  out.reserve(layers.size());
  for (const auto& l : layers) out.push_back({Matrix(l.weights.rows(), l.weights.cols()), std::vector<double>(l.bias.size(), 0.0)});
  return out;
}

// Adds d(scale * (output - target)^2)/d(params) for one sample into `grad`.
void backward(std::span<const MlpLayer> layers, const Activations& acts, double target, double scale,
              std::vector<MlpLayer>& grad, std::vector<double>& delta, std::vector<double>& next_delta) {
  const std::size_t last = layers.size() - 1;
  delta.assign(1, 2.0 * scale * (acts.a.back()[0] - target));
  for (std::size_t l = last + 1; l-- > 0;) {
    const auto& in = acts.a[l];
    auto& g = grad[l];
    for (std::size_t j = 0; j < delta.size(); ++j) {
      g.bias[j] += delta[j];
      auto gw = g.weights.row(j);
      for (std::size_t k = 0; k < in.size(); ++k) gw[k] += delta[j] * in[k];
    }
    if (l == 0) break;
    next_delta.assign(in.size(), 0.0);
    for (std::size_t j = 0; j < delta.size(); ++j) {
      auto w = layers[l].weights.row(j);
      for (std::size_t k = 0; k < in.size(); ++k) next_delta[k] += w[k] * delta[j];
    }
    // in = tanh(z) for hidden layers
    for (std::size_t k = 0; k < in.size(); ++k) next_delta[k] *= 1.0 - in[k] * in[k];
    std::swap(delta, next_delta);
  }
}

void check_shapes(std::span<const MlpLayer> layers, const Matrix& x, std::span<const double> y) {
  if (layers.empty()) throw ModelError("mlp: no layers");
  if (layers.front().weights.cols() != x.cols()) throw ModelError("mlp: input width mismatch");
  if (layers.back().weights.rows() != 1) throw ModelError("mlp: output layer must have one unit");
  if (y.size() != x.rows()) throw ModelError("mlp: target length does not match rows");
}

}  // namespace

std::vector<MlpLayer> init_mlp_layers(std::span<const std::size_t> layer_sizes, std::uint64_t seed) {
  if (layer_sizes.size() < 2) throw ModelError("mlp: need input and output sizes");
  std::mt19937_64 rng(seed);
  std::vector<MlpLayer> layers;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    std::size_t fan_in = layer_sizes[l];
    std::size_t fan_out = layer_sizes[l + 1];
    if (fan_in == 0 || fan_out == 0) throw ModelError("mlp: layer sizes must be >= 1");
    double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    MlpLayer layer{Matrix(fan_out, fan_in), std::vector<double>(fan_out, 0.0)};
    for (std::size_t j = 0; j < fan_out; ++j) {
      for (auto& w : layer.weights.row(j)) w = dist(rng);
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

double mlp_loss(std::span<const MlpLayer> layers, const Matrix& x, std::span<const double> y) {
  check_shapes(layers, x, y);
  Activations acts;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    forward(layers, x.row(i), acts);
    double e = acts.a.back()[0] - y[i];
    sum += e * e;
  }
  return sum / static_cast<double>(x.rows());
}

MlpGradient mlp_gradient(std::span<const MlpLayer> layers, const Matrix& x, std::span<const double> y) {
  check_shapes(layers, x, y);
  MlpGradient out{0.0, zeros_like(layers)};
  Activations acts;
  std::vector<double> delta;
  std::vector<double> next_delta;
  const double scale = 1.0 / static_cast<double>(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    forward(layers, x.row(i), acts);
    double e = acts.a.back()[0] - y[i];
    out.loss += e * e * scale;
    backward(layers, acts, y[i], scale, out.layers, delta, next_delta);
  }
  return out;
}

double MlpModel::predict_row(std::span<const double> row) const {
  std::vector<double> z(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) z[k] = (row[k] - input_mean[k]) / input_scale[k];
  Activations acts;
  forward(layers, z, acts);
  return acts.a.back()[0] * target_scale + target_mean;
}

MlpModel fit_mlp(const Matrix& x, std::span<const double> y, const MlpParams& params, std::uint64_t seed) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n == 0) throw ModelError("fit_mlp: empty training set");
  if (y.size() != n) throw ModelError("fit_mlp: target length does not match rows");
  if (params.batch_size == 0) throw ModelError("fit_mlp: batch size must be >= 1");
  if (!(params.learning_rate > 0.0)) throw ModelError("fit_mlp: learning rate must be positive");
  for (auto h : params.hidden) {
    if (h == 0) throw ModelError("fit_mlp: hidden sizes must be >= 1");
  }

  MlpModel model;
  model.layer_sizes.push_back(p);
  model.layer_sizes.insert(model.layer_sizes.end(), params.hidden.begin(), params.hidden.end());
  model.layer_sizes.push_back(1);

  auto stats = [n](auto value_at, double& mean, double& scale) {
    mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += value_at(i);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (value_at(i) - mean) * (value_at(i) - mean);
    scale = std::sqrt(var / static_cast<double>(n));
    if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
  };
  model.input_mean.resize(p);
  model.input_scale.resize(p);
  for (std::size_t c = 0; c < p; ++c) stats([&](std::size_t i) { return x(i, c); }, model.input_mean[c], model.input_scale[c]);
  stats([&](std::size_t i) { return y[i]; }, model.target_mean, model.target_scale);

  Matrix xs(n, p);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < p; ++c) xs(i, c) = (x(i, c) - model.input_mean[c]) / model.input_scale[c];
    ys[i] = (y[i] - model.target_mean) / model.target_scale;
  }

  std::mt19937_64 rng(seed);
  model.layers = init_mlp_layers(model.layer_sizes, rng());

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto grad = zeros_like(model.layers);
  Activations acts;
  std::vector<double> delta;
  std::vector<double> next_delta;

  for (std::size_t epoch = 1; epoch <= params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += params.batch_size) {
      std::size_t stop = std::min(n, start + params.batch_size);
      double scale = 1.0 / static_cast<double>(stop - start);
      for (auto& g : grad) {
        std::fill(g.bias.begin(), g.bias.end(), 0.0);
        for (std::size_t j = 0; j < g.weights.rows(); ++j) std::ranges::fill(g.weights.row(j), 0.0);
      }
      for (std::size_t b = start; b < stop; ++b) {
        std::size_t i = order[b];
        forward(model.layers, xs.row(i), acts);
        double e = acts.a.back()[0] - ys[i];
        epoch_loss += e * e;
        backward(model.layers, acts, ys[i], scale, grad, delta, next_delta);
      }
      for (std::size_t l = 0; l < model.layers.size(); ++l) {
        auto& layer = model.layers[l];
        for (std::size_t j = 0; j < layer.bias.size(); ++j) {
          layer.bias[j] -= params.learning_rate * grad[l].bias[j];
          auto w = layer.weights.row(j);
          auto g = grad[l].weights.row(j);
          for (std::size_t k = 0; k < w.size(); ++k) w[k] -= params.learning_rate * g[k];
        }
      }
    }
    epoch_loss /= static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) {
      throw ModelError("fit_mlp: training diverged at epoch " + std::to_string(epoch));
    }
    model.loss_history.push_back(epoch_loss);
  }
  return model;
}

}  // namespace fuelcast
