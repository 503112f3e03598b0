#include "tradelab/agents_tabular.hpp"

#include <algorithm>
#include <cmath>

#include "tradelab/errors.hpp"

namespace tradelab {

void TrainConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw UsageError("alpha must lie in [0, 1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw UsageError("epsilon must lie in [0, 1]");
  if (epsilon_floor && !(*epsilon_floor >= 0.0 && *epsilon_floor <= 1.0)) {
    throw UsageError("epsilon floor must lie in [0, 1]");
  }
  if (epochs < 0) throw UsageError("epochs must be non-negative");
}

double TrainConfig::epsilon_at(int epoch) const {
  if (!epsilon_floor || *epsilon_floor >= epsilon || epochs <= 1) return epsilon;
  const double frac = static_cast<double>(epoch) / static_cast<double>(epochs - 1);
  return epsilon - (epsilon - *epsilon_floor) * std::clamp(frac, 0.0, 1.0);
}

Action epsilon_greedy(double q_buy, double q_wait, double epsilon, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  if (epsilon > 0.0 && unit(rng) < epsilon) return coin(rng) == 0 ? Action::Buy : Action::Wait;
  if (q_buy == q_wait) return coin(rng) == 0 ? Action::Buy : Action::Wait;
  return q_buy > q_wait ? Action::Buy : Action::Wait;
}

void BaselineConfig::validate() const {
  if (!(d >= 0.0)) throw UsageError("baseline threshold d must be non-negative");
}

Action baseline_act(const PriceState& state, const BaselineConfig& config) {
  if (state.day_in_window + 1 >= state.window_length) return Action::Buy;
  return state.close() <= state.anchor - config.d ? Action::Buy : Action::Wait;
}

QTable::QTable(std::size_t history) : history_(history) {
  if (history > kMaxHistory) {
    throw UsageError("history length above " + std::to_string(kMaxHistory) +
                     " makes the tabular state space unmanageable");
  }
  values_.assign((std::size_t{1} << (history + 1)) * 2, 0.0);
}

std::size_t QTable::slot(const MovementState& s, Action a) const {
  if (s.trends.size() != history_ + 1) throw UsageError("movement state has the wrong history length");
  return static_cast<std::size_t>(s.code()) * 2 + index_of(a);
}

double QTable::value(const MovementState& s, Action a) const { return values_[slot(s, a)]; }

void QTable::set(const MovementState& s, Action a, double v) { values_[slot(s, a)] = v; }

double QTable::max_value(const MovementState& s) const {
  return std::max(value(s, Action::Buy), value(s, Action::Wait));
}

Action select_action(const QTable& q, const MovementState& s, double epsilon, Rng& rng) {
  return epsilon_greedy(q.value(s, Action::Buy), q.value(s, Action::Wait), epsilon, rng);
}

void q_update(QTable& q, const MovementState& s, Action a, double reward,
              const MovementState& s_next, double alpha, double gamma, bool terminal) {
  const double current = q.value(s, a);
  const double target = reward + (terminal ? 0.0 : gamma * q.max_value(s_next));
  q.set(s, a, current + alpha * (target - current));
}

QTable train_tabular(const PriceSeries& series, std::size_t h, const RewardConfig& reward,
                     const TrainConfig& train, std::vector<EpochStats>* log) {
  reward.validate();
  train.validate();
  if (series.size() <= h + 1) {
    throw DataError("tabular training needs more than " + std::to_string(h + 1) + " bars");
  }
  QTable q(h);
  Rng rng(train.seed);
  const double bound = reward.gamma < 1.0
                           ? std::max(reward.r, reward.c) / (1.0 - reward.gamma) * (1.0 + 1e-12)
                           : std::numeric_limits<double>::infinity();

  for (int epoch = 0; epoch < train.epochs; ++epoch) {
    const double eps = train.epsilon_at(epoch);
    EpochStats stats;
    stats.epoch = epoch;
    stats.epsilon = eps;
    DayState state = reset_stream(series, h);
    while (true) {
      const Action a = select_action(q, state.movements, eps, rng);
      auto t = step_stream(state, a, reward, series);
      const double before = q.value(state.movements, a);
      q_update(q, state.movements, a, t.reward, t.next_state.movements, train.alpha, reward.gamma,
               t.done);
      const double after = q.value(state.movements, a);
      if (!std::isfinite(after) || std::abs(after) > bound) {
        throw NumericalError("tabular Q-value left its reward bound");
      }
      const double td = train.alpha > 0.0 ? (after - before) / train.alpha : 0.0;
      stats.steps += 1;
      stats.average_reward += t.reward;
      stats.mean_loss += td * td;
      if (t.done) break;
      state = std::move(t.next_state);
    }
    stats.average_reward /= static_cast<double>(stats.steps);
    stats.mean_loss /= static_cast<double>(stats.steps);
    if (log) log->push_back(stats);
  }
  return q;
}

}  // namespace tradelab
