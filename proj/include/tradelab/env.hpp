#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tradelab/market_data.hpp"

namespace tradelab {

enum class Action : std::uint8_t { Buy = 0, Wait = 1 };
inline constexpr std::array<Action, 2> kActions{Action::Buy, Action::Wait};
inline constexpr std::size_t index_of(Action a) noexcept { return static_cast<std::size_t>(a); }
const char* to_string(Action a) noexcept;

enum class RewardMode {
  /// Day-by-day stream: +r/-r for a buy before a rise/fall, -c for waiting.
  Movement,
  /// Window episode: -(p_buy - anchor) on purchase, forced buy on the last day.
  Window,
};

struct RewardConfig {
  double r = 1.0;
  double c = 0.1;
  /// Extra price-unit penalty on a forced last-day purchase (window mode).
  double forced_penalty = 0.0;
  double gamma = 0.95;
  RewardMode mode = RewardMode::Window;

  /// Throws UsageError unless r > 0, c >= 0, forced_penalty >= 0, gamma in [0, 1].
  void validate() const;
};

/// Trailing h+1 daily movements, oldest first; the last entry is today.
struct MovementState {
  std::vector<Movement> trends;

  std::size_t history() const noexcept { return trends.empty() ? 0 : trends.size() - 1; }
  /// Dense index in [0, 2^(h+1)): oldest day is the most significant bit, Up = 1.
  std::uint32_t code() const noexcept;
  /// "101" style string, oldest first, Up = 1.
  std::string bitstring() const;
  static MovementState from_bitstring(const std::string& bits);

  bool operator==(const MovementState&) const = default;
};

/// Price history for the approximate agents.
struct PriceState {
  /// h+1 rows of {open, high, low, close}, oldest first; back() is today.
  std::vector<std::array<double, 4>> history;
  std::size_t day_in_window = 0;
  std::size_t window_length = 0;
  /// Close of the window's first day.
  double anchor = 0.0;
  /// Position of today in the parent series.
  std::size_t series_index = 0;
  bool terminal = false;

  double close() const { return history.back()[3]; }
  std::size_t history_length() const noexcept { return history.size() - 1; }
};

/// Today's movement state as seen from a price state (close >= open per row).
MovementState movement_state(const PriceState& state);

/// A day in the continuing movement-mode stream.
struct DayState {
  MovementState movements;
  std::size_t series_index = 0;
  bool terminal = false;
};

template <class State>
struct Transition {
  State next_state;
  double reward = 0.0;
  bool done = false;
  /// The purchase was imposed by waiting through the window's last day.
  bool forced = false;
};

// ---- Window mode -----------------------------------------------------------

/// State on day 0 of `window`, with history drawn from the h bars preceding
/// it in `parent`. Throws DataError if fewer than h bars precede the window.
PriceState reset(const TimeWindow& window, const PriceSeries& parent, std::size_t h);

/// Advances one day. Buying ends the episode with reward anchor - close;
/// waiting on the last day forces that purchase and subtracts
/// config.forced_penalty. Throws UsageError on a terminal state.
Transition<PriceState> step(const PriceState& state, Action action,
                            const RewardConfig& config, const PriceSeries& parent);

/// True if `window` has at least h predecessors in its parent series.
inline bool has_history(const TimeWindow& window, std::size_t h) noexcept {
  return window.start_index >= h;
}

// ---- Movement mode ---------------------------------------------------------

/// First decision day of the stream: index h. Throws DataError unless the
/// series has more than h+1 bars (a buy needs a following close).
DayState reset_stream(const PriceSeries& series, std::size_t h);

/// Buy pays +r when tomorrow's close is above today's, -r otherwise; Wait
/// costs c. The stream continues after a purchase and ends on the last day
/// that still has a following close.
Transition<DayState> step_stream(const DayState& state, Action action,
                                 const RewardConfig& config, const PriceSeries& series);

/// Movement state for day `index` (needs index >= h).
MovementState movement_state_at(const PriceSeries& series, std::size_t index, std::size_t h);

}  // namespace tradelab
