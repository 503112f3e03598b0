#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tradelab/env.hpp"
#include "tradelab/training.hpp"

namespace tradelab {

/// Submit-and-leave threshold: buy once the close falls d below the anchor.
struct BaselineConfig {
  double d = 0.5;

  void validate() const;
};

/// Buy iff close <= anchor - d, and always on the window's last day.
Action baseline_act(const PriceState& state, const BaselineConfig& config);

/// Q-values over (movement state, action), dense over all 2^(h+1) states.
/// Unvisited entries read as zero.
class QTable {
 public:
  static constexpr std::size_t kMaxHistory = 16;

  explicit QTable(std::size_t history);

  std::size_t history() const noexcept { return history_; }
  std::size_t state_count() const noexcept { return values_.size() / 2; }

  double value(const MovementState& s, Action a) const;
  void set(const MovementState& s, Action a, double v);
  double max_value(const MovementState& s) const;

  /// Entry for state code `code` (see MovementState::code) and action `a`.
  double value_at(std::size_t code, Action a) const { return values_[code * 2 + index_of(a)]; }
  std::span<const double> values() const noexcept { return values_; }

  bool operator==(const QTable&) const = default;

 private:
  std::size_t slot(const MovementState& s, Action a) const;

  std::size_t history_;
  std::vector<double> values_;
};

Action select_action(const QTable& q, const MovementState& s, double epsilon, Rng& rng);

/// Q(s,a) += alpha * (reward + gamma * max_a' Q(s',a') - Q(s,a)). The
/// bootstrap term is dropped when `terminal`.
void q_update(QTable& q, const MovementState& s, Action a, double reward,
              const MovementState& s_next, double alpha, double gamma, bool terminal = false);

/// Epsilon-greedy Q-learning over the continuing day stream of `series`,
/// `train.epochs` passes. Throws DataError if the series is too short for h,
/// NumericalError if a value leaves the bound max(r, c) / (1 - gamma).
QTable train_tabular(const PriceSeries& series, std::size_t h, const RewardConfig& reward,
                     const TrainConfig& train, std::vector<EpochStats>* log = nullptr);

}  // namespace tradelab
