#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tradelab/env.hpp"
#include "tradelab/market_data.hpp"
#include "tradelab/nn.hpp"
#include "tradelab/training.hpp"

namespace tradelab {

/// 4 relative returns per history day, the normalized day index and a bias.
inline constexpr std::size_t feature_count(std::size_t h) noexcept { return 4 * (h + 1) + 2; }

/// Scale-free encoding of a price state: every price as price/anchor - 1
/// (oldest day first, columns open/high/low/close), then
/// day_in_window / (w - 1), then 1.
std::vector<double> featurize(const PriceState& state);

// ---- Linear ----------------------------------------------------------------

/// Q(s, a) = w_a . phi(s), one weight vector per action.
struct LinearWeights {
  std::array<std::vector<double>, 2> per_action;

  static LinearWeights zeros(std::size_t dimension);
  std::size_t dimension() const noexcept { return per_action[0].size(); }
  std::span<const double> of(Action a) const { return per_action[index_of(a)]; }

  bool operator==(const LinearWeights&) const = default;
};

enum class UpdateRule {
  /// w_a += alpha * (target - Q(s, a)) * phi(s)
  TdError,
  /// w_a += alpha * target * phi(s); no current-estimate term, diverges on
  /// any stream with nonzero reward. Kept for comparison runs.
  TargetOnly,
};

/// Throws UsageError on a dimension mismatch.
double linear_q(const LinearWeights& weights, std::span<const double> phi, Action a);

/// One semi-gradient step on action a's vector. Returns the TD error delta
/// (for TargetOnly: the target itself). Throws NumericalError if it is not
/// finite.
double linear_update(LinearWeights& weights, std::span<const double> phi, Action a, double reward,
                     std::span<const double> phi_next, double alpha, double gamma, bool terminal,
                     UpdateRule rule = UpdateRule::TdError);

/// Epsilon-greedy episodes over every window with >= h bars of history in
/// `series`, zero-initialized weights.
LinearWeights train_linear(std::span<const TimeWindow> windows, const PriceSeries& series,
                           std::size_t h, const RewardConfig& reward, const TrainConfig& train,
                           UpdateRule rule = UpdateRule::TdError,
                           std::vector<EpochStats>* log = nullptr);

// ---- Deep ------------------------------------------------------------------

struct DeepHyperparams {
  std::size_t hidden_layers = 2;
  std::size_t units = 16;
  double learning_rate = 1e-3;
  int epochs = 30;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  std::optional<double> epsilon_floor;

  void validate() const;
  nn::LayerSpec layer_spec(std::size_t inputs) const;
  double epsilon_at(int epoch) const;
};

/// One network per action: index 0 scores Buy, index 1 scores Wait.
struct DeepQNetworks {
  std::array<nn::Mlp, 2> nets;

  const nn::Mlp& of(Action a) const { return nets[index_of(a)]; }
  nn::Mlp& of(Action a) { return nets[index_of(a)]; }

  bool operator==(const DeepQNetworks&) const = default;
};

DeepQNetworks init_deep(std::size_t inputs, const DeepHyperparams& hp);

double deep_q(const DeepQNetworks& params, std::span<const double> phi, Action a);

/// Freezes y = reward + gamma * max_a' Q(s', a') (no bootstrap when
/// terminal) and takes one gradient step on (Q(s, a) - y)^2 in action a's
/// network only. Returns the loss before the step. Throws NumericalError on
/// a non-finite loss.
double deep_update(DeepQNetworks& params, std::span<const double> phi, Action a, double reward,
                   std::span<const double> phi_next, double gamma, double lr, bool terminal);

DeepQNetworks train_deep(std::span<const TimeWindow> windows, const PriceSeries& series,
                         std::size_t h, const RewardConfig& reward, const DeepHyperparams& hp,
                         std::vector<EpochStats>* log = nullptr);

}  // namespace tradelab
