#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

// A small scalar-output multilayer perceptron: tanh hidden layers, identity
// output, squared loss, plain gradient descent.

namespace tradelab::nn {

/// Layer widths [inputs, hidden..., 1].
struct LayerSpec {
  std::vector<std::size_t> sizes;

  /// Throws UsageError unless there are >= 2 entries, all >= 1, last == 1.
  void validate() const;
};

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;  // outputs x inputs, row-major
  std::vector<double> bias;     // outputs

  bool operator==(const DenseLayer&) const = default;
};

struct Mlp {
  std::vector<DenseLayer> layers;

  std::size_t input_size() const { return layers.front().inputs; }
  LayerSpec spec() const;
  std::size_t parameter_count() const;

  bool operator==(const Mlp&) const = default;
};

/// Same shape as the network it was computed for.
using Gradients = Mlp;

/// Activations a[0] = x ... a[L] = output and pre-activations z[1..L]
/// (z[0] is unused and left empty).
struct ForwardCache {
  std::vector<std::vector<double>> activations;
  std::vector<std::vector<double>> pre_activations;
};

/// Weights uniform in +-1/sqrt(fan_in), biases zero.
Mlp init(const LayerSpec& spec, std::uint64_t seed);

/// Zero-filled network with the given shape.
Mlp zeros(const LayerSpec& spec);

std::pair<double, ForwardCache> forward(const Mlp& net, std::span<const double> x);

/// Forward pass without keeping the cache.
double predict(const Mlp& net, std::span<const double> x);

/// (predict(net, x) - target)^2
double squared_loss(const Mlp& net, std::span<const double> x, double target);

/// Gradient of (output - target)^2 w.r.t. every weight and bias.
Gradients backward(const Mlp& net, const ForwardCache& cache, double target);

/// net -= lr * grads
void sgd_step(Mlp& net, const Gradients& grads, double lr);

/// Central-difference estimate of the same gradient. Test oracle; O(params)
/// forward passes.
Gradients finite_diff(const Mlp& net, std::span<const double> x, double target, double step);

/// Visits every parameter in a fixed order (layer, weights row-major, bias).
template <class Fn>
void for_each_parameter(Mlp& net, Fn&& fn) {
  for (auto& layer : net.layers) {
    for (double& w : layer.weights) fn(w);
    for (double& b : layer.bias) fn(b);
  }
}

template <class Fn>
void for_each_parameter(const Mlp& net, Fn&& fn) {
  for (const auto& layer : net.layers) {
    for (double w : layer.weights) fn(w);
    for (double b : layer.bias) fn(b);
  }
}

}  // namespace tradelab::nn
