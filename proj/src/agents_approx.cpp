#include "tradelab/agents_approx.hpp"

#include <algorithm>
#include <cmath>

#include "tradelab/errors.hpp"
#include "tradelab/simd/kernels.hpp"

namespace tradelab {

std::vector<double> featurize(const PriceState& state) {
  std::vector<double> phi;
  phi.reserve(feature_count(state.history_length()));
  for (const auto& row : state.history) {
    for (double price : row) phi.push_back(price / state.anchor - 1.0);
  }
  const double span = state.window_length > 1 ? static_cast<double>(state.window_length - 1) : 1.0;
  phi.push_back(static_cast<double>(state.day_in_window) / span);
  phi.push_back(1.0);
  return phi;
}

LinearWeights LinearWeights::zeros(std::size_t dimension) {
  LinearWeights w;
  for (auto& v : w.per_action) v.assign(dimension, 0.0);
  return w;
}

double linear_q(const LinearWeights& weights, std::span<const double> phi, Action a) {
  if (phi.size() != weights.dimension()) {
    throw UsageError("feature vector has " + std::to_string(phi.size()) +
                     " entries, weights expect " + std::to_string(weights.dimension()));
  }
  return simd::dot(weights.of(a), phi);
}

double linear_update(LinearWeights& weights, std::span<const double> phi, Action a, double reward,
                     std::span<const double> phi_next, double alpha, double gamma, bool terminal,
                     UpdateRule rule) {
  if (!(alpha >= 0.0)) throw UsageError("alpha must be non-negative");
  double target = reward;
  if (!terminal) {
    target += gamma * std::max(linear_q(weights, phi_next, Action::Buy),
                               linear_q(weights, phi_next, Action::Wait));
  }
  const double delta = rule == UpdateRule::TdError ? target - linear_q(weights, phi, a) : target;
  if (!std::isfinite(delta)) throw NumericalError("linear TD error is not finite");
  simd::axpy(alpha * delta, phi, weights.per_action[index_of(a)]);
  return delta;
}

void DeepHyperparams::validate() const {
  if (hidden_layers == 0) throw UsageError("deep agent needs at least one hidden layer");
  if (units == 0) throw UsageError("hidden layers need at least one unit");
  if (!(learning_rate > 0.0)) throw UsageError("learning rate must be positive");
  if (epochs < 0) throw UsageError("epochs must be non-negative");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw UsageError("epsilon must lie in [0, 1]");
  if (epsilon_floor && !(*epsilon_floor >= 0.0 && *epsilon_floor <= 1.0)) {
    throw UsageError("epsilon floor must lie in [0, 1]");
  }
}

nn::LayerSpec DeepHyperparams::layer_spec(std::size_t inputs) const {
  nn::LayerSpec spec;
  spec.sizes.push_back(inputs);
  for (std::size_t i = 0; i < hidden_layers; ++i) spec.sizes.push_back(units);
  spec.sizes.push_back(1);
  return spec;
}

double DeepHyperparams::epsilon_at(int epoch) const {
  TrainConfig schedule;
  schedule.epsilon = epsilon;
  schedule.epsilon_floor = epsilon_floor;
  schedule.epochs = epochs;
  return schedule.epsilon_at(epoch);
}

DeepQNetworks init_deep(std::size_t inputs, const DeepHyperparams& hp) {
  hp.validate();
  const auto spec = hp.layer_spec(inputs);
  std::seed_seq seq{hp.seed, std::uint64_t{0x6e6e}};
  std::array<std::uint64_t, 2> seeds{};
  seq.generate(seeds.begin(), seeds.end());
  return DeepQNetworks{{nn::init(spec, seeds[0]), nn::init(spec, seeds[1])}};
}

double deep_q(const DeepQNetworks& params, std::span<const double> phi, Action a) {
  return nn::predict(params.of(a), phi);
}

double deep_update(DeepQNetworks& params, std::span<const double> phi, Action a, double reward,
                   std::span<const double> phi_next, double gamma, double lr, bool terminal) {
  if (!(lr > 0.0)) throw UsageError("learning rate must be positive");
  double target = reward;
  if (!terminal) {
    target += gamma * std::max(deep_q(params, phi_next, Action::Buy),
                               deep_q(params, phi_next, Action::Wait));
  }
  auto& net = params.of(a);
  auto [out, cache] = nn::forward(net, phi);
  const double loss = (out - target) * (out - target);
  if (!std::isfinite(loss)) throw NumericalError("Bellman loss is not finite");
  nn::sgd_step(net, nn::backward(net, cache, target), lr);
  return loss;
}

namespace {

// Shared episode loop for the two approximate agents. `Learner` provides
// q(phi, a) and update(phi, a, reward, phi_next, terminal) -> squared error.
template <class Learner>
void run_window_epochs(std::span<const TimeWindow> windows, const PriceSeries& series,
                       std::size_t h, const RewardConfig& reward, int epochs, Rng& rng,
                       auto epsilon_at, Learner& learner, std::vector<EpochStats>* log) {
  reward.validate();
  std::vector<const TimeWindow*> usable;
  for (const auto& w : windows) {
    if (has_history(w, h)) usable.push_back(&w);
  }
  if (usable.empty()) throw DataError("no training window has enough history");

  for (int epoch = 0; epoch < epochs; ++epoch) {
    const double eps = epsilon_at(epoch);
    EpochStats stats;
    stats.epoch = epoch;
    stats.epsilon = eps;
    std::size_t episodes = 0;
    for (const TimeWindow* window : usable) {
      PriceState state = reset(*window, series, h);
      auto phi = featurize(state);
      while (true) {
        const Action a =
            epsilon_greedy(learner.q(phi, Action::Buy), learner.q(phi, Action::Wait), eps, rng);
        auto t = step(state, a, reward, series);
        auto phi_next = t.done ? phi : featurize(t.next_state);
        stats.mean_loss += learner.update(phi, a, t.reward, phi_next, t.done);
        stats.average_reward += t.reward;
        stats.steps += 1;
        if (t.done) break;
        state = std::move(t.next_state);
        phi = std::move(phi_next);
      }
      ++episodes;
    }
    // Reward per episode; loss per transition.
    stats.average_reward /= static_cast<double>(episodes);
    stats.mean_loss /= static_cast<double>(stats.steps);
    if (log) log->push_back(stats);
  }
}

struct LinearLearner {
  LinearWeights& weights;
  double alpha;
  double gamma;
  UpdateRule rule;

  double q(std::span<const double> phi, Action a) const { return linear_q(weights, phi, a); }
  double update(std::span<const double> phi, Action a, double r, std::span<const double> next,
                bool terminal) {
    const double delta = linear_update(weights, phi, a, r, next, alpha, gamma, terminal, rule);
    return delta * delta;
  }
};

struct DeepLearner {
  DeepQNetworks& params;
  double lr;
  double gamma;

  double q(std::span<const double> phi, Action a) const { return deep_q(params, phi, a); }
  double update(std::span<const double> phi, Action a, double r, std::span<const double> next,
                bool terminal) {
    return deep_update(params, phi, a, r, next, gamma, lr, terminal);
  }
};

}  // namespace

LinearWeights train_linear(std::span<const TimeWindow> windows, const PriceSeries& series,
                           std::size_t h, const RewardConfig& reward, const TrainConfig& train,
                           UpdateRule rule, std::vector<EpochStats>* log) {
  train.validate();
  if (windows.empty()) throw DataError("no training windows");
  auto weights = LinearWeights::zeros(feature_count(h));
  Rng rng(train.seed);
  LinearLearner learner{weights, train.alpha, reward.gamma, rule};
  run_window_epochs(windows, series, h, reward, train.epochs, rng,
                    [&](int e) { return train.epsilon_at(e); }, learner, log);
  return weights;
}

DeepQNetworks train_deep(std::span<const TimeWindow> windows, const PriceSeries& series,
                         std::size_t h, const RewardConfig& reward, const DeepHyperparams& hp,
                         std::vector<EpochStats>* log) {
  hp.validate();
  if (windows.empty()) throw DataError("no training windows");
  auto params = init_deep(feature_count(h), hp);
  // Exploration draws from a stream separate from the initialization seeds.
  std::seed_seq seq{hp.seed, std::uint64_t{0xe951}};
  std::array<std::uint64_t, 1> explore_seed{};
  seq.generate(explore_seed.begin(), explore_seed.end());
  Rng rng(explore_seed[0]);
  DeepLearner learner{params, hp.learning_rate, reward.gamma};
  run_window_epochs(windows, series, h, reward, hp.epochs, rng,
                    [&](int e) { return hp.epsilon_at(e); }, learner, log);
  return params;
}

}  // namespace tradelab
