#include "tradelab/env.hpp"

#include "tradelab/errors.hpp"

namespace tradelab {

namespace {

std::array<double, 4> prices_of(const OhlcBar& b) { return {b.open, b.high, b.low, b.close}; }

std::vector<std::array<double, 4>> history_rows(const PriceSeries& parent, std::size_t index,
                                                std::size_t h) {
  std::vector<std::array<double, 4>> rows;
  rows.reserve(h + 1);
  for (std::size_t i = index - h; i <= index; ++i) rows.push_back(prices_of(parent[i]));
  return rows;
}

}  // namespace

const char* to_string(Action a) noexcept { return a == Action::Buy ? "buy" : "wait"; }

void RewardConfig::validate() const {
  if (!(r > 0.0)) throw UsageError("reward r must be positive");
  if (!(c >= 0.0)) throw UsageError("wait penalty c must be non-negative");
  if (!(forced_penalty >= 0.0)) throw UsageError("forced penalty must be non-negative");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw UsageError("gamma must lie in [0, 1]");
}

std::uint32_t MovementState::code() const noexcept {
  std::uint32_t code = 0;
  for (Movement m : trends) code = (code << 1) | static_cast<std::uint32_t>(m);
  return code;
}

std::string MovementState::bitstring() const {
  std::string s;
  s.reserve(trends.size());
  for (Movement m : trends) s.push_back(m == Movement::Up ? '1' : '0');
  return s;
}

MovementState MovementState::from_bitstring(const std::string& bits) {
  MovementState state;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw UsageError("movement bitstring must contain only 0/1");
    state.trends.push_back(ch == '1' ? Movement::Up : Movement::Down);
  }
  if (state.trends.empty()) throw UsageError("empty movement bitstring");
  return state;
}

MovementState movement_state(const PriceState& state) {
  MovementState out;
  out.trends.reserve(state.history.size());
  for (const auto& row : state.history) {
    out.trends.push_back(row[3] >= row[0] ? Movement::Up : Movement::Down);
  }
  return out;
}

MovementState movement_state_at(const PriceSeries& series, std::size_t index, std::size_t h) {
  if (index < h || index >= series.size()) throw UsageError("movement state index out of range");
  MovementState out;
  out.trends.reserve(h + 1);
  for (std::size_t i = index - h; i <= index; ++i) out.trends.push_back(movement(series[i]));
  return out;
}

PriceState reset(const TimeWindow& window, const PriceSeries& parent, std::size_t h) {
  if (window.length() < 2) throw UsageError("window must hold at least 2 bars");
  if (!has_history(window, h)) {
    throw DataError("window at index " + std::to_string(window.start_index) + " lacks " +
                    std::to_string(h) + " bars of history");
  }
  if (window.start_index + window.length() > parent.size()) {
    throw UsageError("window extends past its parent series");
  }
  PriceState s;
  s.history = history_rows(parent, window.start_index, h);
  s.day_in_window = 0;
  s.window_length = window.length();
  s.anchor = parent[window.start_index].close;
  s.series_index = window.start_index;
  return s;
}

Transition<PriceState> step(const PriceState& state, Action action, const RewardConfig& config,
                            const PriceSeries& parent) {
  if (state.terminal) throw UsageError("step called on a terminal state");
  Transition<PriceState> t;
  const bool last_day = state.day_in_window + 1 == state.window_length;
  if (action == Action::Buy || last_day) {
    t.reward = -(state.close() - state.anchor);
    t.forced = action == Action::Wait;
    if (t.forced) t.reward -= config.forced_penalty;
    t.done = true;
    t.next_state = state;
    t.next_state.terminal = true;
    return t;
  }
  t.next_state = state;
  t.next_state.day_in_window += 1;
  t.next_state.series_index += 1;
  t.next_state.history =
      history_rows(parent, t.next_state.series_index, state.history_length());
  t.reward = 0.0;
  return t;
}

DayState reset_stream(const PriceSeries& series, std::size_t h) {
  if (series.size() <= h + 1) {
    throw DataError("series of " + std::to_string(series.size()) +
                    " bars is too short for history " + std::to_string(h));
  }
  return DayState{movement_state_at(series, h, h), h, false};
}

Transition<DayState> step_stream(const DayState& state, Action action, const RewardConfig& config,
                                 const PriceSeries& series) {
  if (state.terminal) throw UsageError("step called on a terminal state");
  const std::size_t today = state.series_index;
  const std::size_t h = state.movements.history();
  Transition<DayState> t;
  if (action == Action::Buy) {
    t.reward = series[today + 1].close > series[today].close ? config.r : -config.r;
  } else {
    t.reward = -config.c;
  }
  t.next_state.series_index = today + 1;
  t.next_state.movements = movement_state_at(series, today + 1, h);
  // The next day can only be a decision day if a close follows it.
  t.done = today + 2 >= series.size();
  t.next_state.terminal = t.done;
  return t;
}

}  // namespace tradelab
