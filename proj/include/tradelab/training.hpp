#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "tradelab/env.hpp"

namespace tradelab {

using Rng = std::mt19937_64;

/// Learning schedule shared by the tabular and linear agents.
struct TrainConfig {
  double alpha = 0.1;
  double epsilon = 0.1;
  /// When set, epsilon decays linearly to this floor over the epochs.
  std::optional<double> epsilon_floor;
  int epochs = 50;
  std::uint64_t seed = 0;

  void validate() const;
  double epsilon_at(int epoch) const;
};

/// One line of a training log.
struct EpochStats {
  int epoch = 0;
  std::size_t steps = 0;
  double epsilon = 0.0;
  double average_reward = 0.0;
  /// Mean squared TD error over the epoch (for the deep agent: the Bellman loss).
  double mean_loss = 0.0;
};

/// With probability epsilon a uniform action, otherwise the greedy one; an
/// exact tie between the two values is broken uniformly at random.
Action epsilon_greedy(double q_buy, double q_wait, double epsilon, Rng& rng);

/// Greedy with ties resolved to Wait. Used when scoring frozen agents so an
/// unexplored state never triggers a purchase by chance.
inline Action greedy(double q_buy, double q_wait) noexcept {
  return q_buy > q_wait ? Action::Buy : Action::Wait;
}

}  // namespace tradelab
