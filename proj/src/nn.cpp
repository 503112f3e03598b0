#include "tradelab/nn.hpp"

#include <cmath>
#include <random>

#include "tradelab/errors.hpp"
#include "tradelab/simd/kernels.hpp"

namespace tradelab::nn {

void LayerSpec::validate() const {
  if (sizes.size() < 2) throw UsageError("layer spec needs an input and an output size");
  for (std::size_t s : sizes) {
    if (s == 0) throw UsageError("layer sizes must be positive");
  }
  if (sizes.back() != 1) throw UsageError("output layer must have exactly one unit");
}

LayerSpec Mlp::spec() const {
  LayerSpec s;
  if (layers.empty()) return s;
  s.sizes.push_back(layers.front().inputs);
  for (const auto& l : layers) s.sizes.push_back(l.outputs);
  return s;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

Mlp zeros(const LayerSpec& spec) {
  spec.validate();
  Mlp net;
  for (std::size_t i = 0; i + 1 < spec.sizes.size(); ++i) {
    DenseLayer layer;
    layer.inputs = spec.sizes[i];
    layer.outputs = spec.sizes[i + 1];
    layer.weights.assign(layer.inputs * layer.outputs, 0.0);
    layer.bias.assign(layer.outputs, 0.0);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

Mlp init(const LayerSpec& spec, std::uint64_t seed) {
  Mlp net = zeros(spec);
  std::mt19937_64 rng(seed);
  for (auto& layer : net.layers) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.inputs));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : layer.weights) w = dist(rng);
  }
  return net;
}

std::pair<double, ForwardCache> forward(const Mlp& net, std::span<const double> x) {
  if (net.layers.empty()) throw UsageError("forward on an empty network");
  if (x.size() != net.input_size()) {
    throw UsageError("input has " + std::to_string(x.size()) + " entries, network expects " +
                     std::to_string(net.input_size()));
  }
  ForwardCache cache;
  const std::size_t n_layers = net.layers.size();
  cache.activations.resize(n_layers + 1);
  cache.pre_activations.resize(n_layers + 1);
  cache.activations[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < n_layers; ++l) {
    const auto& layer = net.layers[l];
    auto& z = cache.pre_activations[l + 1];
    z.resize(layer.outputs);
    simd::gemv(layer.weights, layer.outputs, layer.inputs, cache.activations[l], layer.bias, z);
    auto& a = cache.activations[l + 1];
    a = z;
    if (l + 1 < n_layers) {
      for (double& v : a) v = std::tanh(v);
    }
  }
  const double out = cache.activations.back()[0];
  return {out, std::move(cache)};
}

double predict(const Mlp& net, std::span<const double> x) { return forward(net, x).first; }

double squared_loss(const Mlp& net, std::span<const double> x, double target) {
  const double diff = predict(net, x) - target;
  return diff * diff;
}

Gradients backward(const Mlp& net, const ForwardCache& cache, double target) {
  const std::size_t n_layers = net.layers.size();
  if (cache.activations.size() != n_layers + 1) {
    throw UsageError("forward cache does not match the network");
  }
  Gradients grads = zeros(net.spec());
  // dL/dz at the output; identity activation there.
  std::vector<double> delta{2.0 * (cache.activations.back()[0] - target)};
  for (std::size_t l = n_layers; l-- > 0;) {
    const auto& layer = net.layers[l];
    auto& g = grads.layers[l];
    simd::rank1_update(g.weights, layer.outputs, layer.inputs, 1.0, delta, cache.activations[l]);
    g.bias = delta;
    if (l == 0) break;
    std::vector<double> upstream(layer.inputs);
    simd::gemv_transposed(layer.weights, layer.outputs, layer.inputs, delta, upstream);
    // tanh'(z) = 1 - tanh(z)^2, and activations[l] already holds tanh(z).
    const auto& a = cache.activations[l];
    for (std::size_t i = 0; i < upstream.size(); ++i) upstream[i] *= 1.0 - a[i] * a[i];
    delta = std::move(upstream);
  }
  return grads;
}

void sgd_step(Mlp& net, const Gradients& grads, double lr) {
  if (!(lr > 0.0)) throw UsageError("learning rate must be positive");
  if (net.spec().sizes != grads.spec().sizes) throw UsageError("gradient shape mismatch");
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    simd::axpy(-lr, grads.layers[l].weights, net.layers[l].weights);
    simd::axpy(-lr, grads.layers[l].bias, net.layers[l].bias);
  }
}

Gradients finite_diff(const Mlp& net, std::span<const double> x, double target, double step) {
  if (!(step > 0.0)) throw UsageError("finite-difference step must be positive");
  Mlp probe = net;
  Gradients grads = zeros(net.spec());
  std::vector<double*> params;
  std::vector<double*> outs;
  for_each_parameter(probe, [&](double& p) { params.push_back(&p); });
  for_each_parameter(grads, [&](double& g) { outs.push_back(&g); });
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = *params[i];
    *params[i] = saved + step;
    const double up = squared_loss(probe, x, target);
    *params[i] = saved - step;
    const double down = squared_loss(probe, x, target);
    *params[i] = saved;
    *outs[i] = (up - down) / (2.0 * step);
  }
  return grads;
}

}  // namespace tradelab::nn
