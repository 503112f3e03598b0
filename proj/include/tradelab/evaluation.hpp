#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tradelab/agents_approx.hpp"
#include "tradelab/agents_tabular.hpp"
#include "tradelab/env.hpp"
#include "tradelab/market_data.hpp"
#include "tradelab/student_t.hpp"

namespace tradelab {

/// A frozen agent: maps a window-mode state to an action, no learning, no
/// exploration.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action act(const PriceState& state) const = 0;
};

/// Threshold rule only; on the last day the episode's forced purchase buys
/// at the same close baseline_act would, but the window counts as forced.
class BaselinePolicy final : public Policy {
 public:
  explicit BaselinePolicy(BaselineConfig config) : config_(config) {}
  Action act(const PriceState& state) const override;

 private:
  BaselineConfig config_;
};

/// Reads the movement state out of the price history and acts greedily.
class TabularPolicy final : public Policy {
 public:
  explicit TabularPolicy(QTable table) : table_(std::move(table)) {}
  Action act(const PriceState& state) const override;
  const QTable& table() const noexcept { return table_; }

 private:
  QTable table_;
};

class LinearPolicy final : public Policy {
 public:
  explicit LinearPolicy(LinearWeights weights) : weights_(std::move(weights)) {}
  Action act(const PriceState& state) const override;
  const LinearWeights& weights() const noexcept { return weights_; }

 private:
  LinearWeights weights_;
};

class DeepPolicy final : public Policy {
 public:
  explicit DeepPolicy(DeepQNetworks params) : params_(std::move(params)) {}
  Action act(const PriceState& state) const override;
  const DeepQNetworks& params() const noexcept { return params_; }

 private:
  DeepQNetworks params_;
};

/// Adapter for ad-hoc rules (oracles, test doubles).
class FunctionPolicy final : public Policy {
 public:
  explicit FunctionPolicy(std::function<Action(const PriceState&)> fn) : fn_(std::move(fn)) {}
  Action act(const PriceState& state) const override { return fn_(state); }

 private:
  std::function<Action(const PriceState&)> fn_;
};

struct WindowScore {
  /// anchor - purchase close
  double profit = 0.0;
  /// purchase close - lowest close in the window
  double regret = 0.0;
  std::size_t buy_day = 0;
  bool forced = false;
};

/// Walks the window greedily until the policy buys or the last day forces
/// a purchase. Throws DataError if the window lacks h bars of history.
WindowScore score_window(const Policy& policy, const TimeWindow& window,
                         const PriceSeries& series, std::size_t h);

struct RunResult {
  double average_profit = 0.0;
  double average_regret = 0.0;
  /// Fraction of windows with a voluntary purchase.
  double buy_fraction = 0.0;
  std::size_t windows = 0;
};

/// Averages over every window with enough history. Throws DataError if
/// there is none.
RunResult evaluate(const Policy& policy, std::span<const TimeWindow> windows,
                   const PriceSeries& series, std::size_t h);

struct HistogramBin {
  double lower = 0.0;
  std::size_t count = 0;
};

/// Equal-width bins over [min, max], left-closed, the last bin also closed
/// on the right. Identical values all land in the first bin. Throws
/// UsageError for empty input or zero bins.
std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t n_bins);

/// Trains one agent for the given seed on the splits.
using AgentFactory =
    std::function<std::unique_ptr<Policy>(const SplitSeries& splits, std::uint64_t seed)>;

struct EvalSetup {
  std::size_t w = 5;
  std::size_t h = 2;
  std::size_t n_runs = 51;
  std::uint64_t base_seed = 0;
  /// Worker threads for the independent runs. Results do not depend on it.
  std::size_t jobs = 1;
  std::size_t histogram_bins = 10;
  double level = 0.95;
};

struct EvalReport {
  std::string agent;
  std::vector<RunResult> runs;
  double mean_profit = 0.0;
  /// Sample standard deviation (n - 1) of the per-run average profits.
  double profit_stdev = 0.0;
  double mean_regret = 0.0;
  double mean_buy_fraction = 0.0;
  /// Absent for a single run.
  std::optional<ConfidenceInterval> ci;
  std::vector<HistogramBin> histogram;
};

/// Trains a fresh agent per run (seed base_seed + i), scores it on the test
/// split and aggregates. A failing run aborts the whole report.
EvalReport repeated_eval(const std::string& agent, const AgentFactory& factory,
                         const SplitSeries& splits, const EvalSetup& setup);

/// Display order of the result tables.
inline const std::vector<std::string>& agent_order() {
  static const std::vector<std::string> kOrder{"Baseline", "Q-Learning", "Approximate Linear",
                                               "Deep Q-Learning"};
  return kOrder;
}

/// agent,average_profit,ci_lower,ci_upper,profit_stdev (4 decimals; empty CI
/// fields for single-run reports). Known agents first in agent_order().
void write_results_csv(std::ostream& out, const std::vector<EvalReport>& reports);
/// agent,bin_lower,count
void write_histogram_csv(std::ostream& out, const std::vector<EvalReport>& reports);

/// Writes results_<company>.csv and histogram_<company>.csv into out_dir,
/// creating it if needed. Throws IoError if a file cannot be written.
void write_report(const std::vector<EvalReport>& reports, const std::string& company,
                  const std::filesystem::path& out_dir);

}  // namespace tradelab
