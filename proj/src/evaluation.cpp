#include "tradelab/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include "detail/number_format.hpp"
#include "tradelab/errors.hpp"

namespace tradelab {

Action BaselinePolicy::act(const PriceState& state) const {
  return state.close() <= state.anchor - config_.d ? Action::Buy : Action::Wait;
}

Action TabularPolicy::act(const PriceState& state) const {
  const auto s = movement_state(state);
  return greedy(table_.value(s, Action::Buy), table_.value(s, Action::Wait));
}

Action LinearPolicy::act(const PriceState& state) const {
  const auto phi = featurize(state);
  return greedy(linear_q(weights_, phi, Action::Buy), linear_q(weights_, phi, Action::Wait));
}

Action DeepPolicy::act(const PriceState& state) const {
  const auto phi = featurize(state);
  return greedy(deep_q(params_, phi, Action::Buy), deep_q(params_, phi, Action::Wait));
}

WindowScore score_window(const Policy& policy, const TimeWindow& window,
                         const PriceSeries& series, std::size_t h) {
  // Scoring is the pure price difference, so no penalty and no discounting.
  const RewardConfig scoring{};
  PriceState state = reset(window, series, h);
  while (true) {
    const Action a = policy.act(state);
    auto t = step(state, a, scoring, series);
    if (t.done) {
      WindowScore score;
      score.buy_day = state.day_in_window;
      score.forced = t.forced;
      score.profit = state.anchor - state.close();
      score.regret = state.close() - window.min_close();
      return score;
    }
    state = std::move(t.next_state);
  }
}

RunResult evaluate(const Policy& policy, std::span<const TimeWindow> windows,
                   const PriceSeries& series, std::size_t h) {
  RunResult result;
  std::size_t voluntary = 0;
  for (const auto& window : windows) {
    if (!has_history(window, h)) continue;
    const auto score = score_window(policy, window, series, h);
    result.average_profit += score.profit;
    result.average_regret += score.regret;
    if (!score.forced) ++voluntary;
    ++result.windows;
  }
  if (result.windows == 0) throw DataError("no window has enough history to be scored");
  const double n = static_cast<double>(result.windows);
  result.average_profit /= n;
  result.average_regret /= n;
  result.buy_fraction = static_cast<double>(voluntary) / n;
  return result;
}

std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t n_bins) {
  if (values.empty()) throw UsageError("histogram of an empty sample");
  if (n_bins == 0) throw UsageError("histogram needs at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double width = (*hi_it - lo) / static_cast<double>(n_bins);
  std::vector<HistogramBin> bins(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) bins[i].lower = lo + width * static_cast<double>(i);
  for (double v : values) {
    std::size_t idx = 0;
    if (width > 0.0) {
      idx = static_cast<std::size_t>(std::floor((v - lo) / width));
      idx = std::min(idx, n_bins - 1);
    }
    bins[idx].count += 1;
  }
  return bins;
}

EvalReport repeated_eval(const std::string& agent, const AgentFactory& factory,
                         const SplitSeries& splits, const EvalSetup& setup) {
  if (setup.n_runs == 0) throw UsageError("at least one evaluation run is required");
  const auto windows = make_windows(splits.test, setup.w);

  std::vector<RunResult> runs(setup.n_runs);
  std::vector<std::exception_ptr> errors(setup.n_runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < setup.n_runs; i = next++) {
      try {
        const auto policy = factory(splits, setup.base_seed + i);
        runs[i] = evaluate(*policy, windows, splits.test, setup.h);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(setup.jobs, 1, setup.n_runs);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EvalReport report;
  report.agent = agent;
  report.runs = std::move(runs);
  const double n = static_cast<double>(report.runs.size());
  std::vector<double> profits;
  for (const auto& r : report.runs) profits.push_back(r.average_profit);

  // Means are accumulated as offsets from the first run, so identical runs
  // give exactly that run's value and an exactly zero deviation.
  const auto shifted_mean = [&](auto field) {
    const double origin = field(report.runs.front());
    double offset = 0.0;
    for (const auto& r : report.runs) offset += field(r) - origin;
    return origin + offset / n;
  };
  report.mean_profit = shifted_mean([](const RunResult& r) { return r.average_profit; });
  report.mean_regret = shifted_mean([](const RunResult& r) { return r.average_regret; });
  report.mean_buy_fraction = shifted_mean([](const RunResult& r) { return r.buy_fraction; });
  if (report.runs.size() > 1) {
    double ss = 0.0;
    for (double p : profits) ss += (p - report.mean_profit) * (p - report.mean_profit);
    report.profit_stdev = std::sqrt(ss / (n - 1.0));
    report.ci = student_ci(report.mean_profit, report.profit_stdev, report.runs.size(), setup.level);
  }
  report.histogram = histogram(profits, setup.histogram_bins);
  return report;
}

namespace {

std::vector<const EvalReport*> ordered(const std::vector<EvalReport>& reports) {
  std::vector<const EvalReport*> out;
  for (const auto& r : reports) out.push_back(&r);
  const auto& order = agent_order();
  auto rank = [&](const EvalReport* r) {
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), r->agent) - order.begin());
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const EvalReport* a, const EvalReport* b) { return rank(a) < rank(b); });
  return out;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
  out << "agent,average_profit,ci_lower,ci_upper,profit_stdev\n";
  for (const EvalReport* r : ordered(reports)) {
    out << r->agent << ',' << detail::fixed(r->mean_profit, 4) << ',';
    if (r->ci) out << detail::fixed(r->ci->lower, 4) << ',' << detail::fixed(r->ci->upper, 4);
    else out << ',';
    out << ',' << detail::fixed(r->profit_stdev, 4) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
  out << "agent,bin_lower,count\n";
  for (const EvalReport* r : ordered(reports)) {
    for (const auto& bin : r->histogram) {
      out << r->agent << ',' << detail::fixed(bin.lower, 4) << ',' << bin.count << '\n';
    }
  }
}

void write_report(const std::vector<EvalReport>& reports, const std::string& company,
                  const std::filesystem::path& out_dir) {
  if (reports.empty()) throw UsageError("nothing to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  auto write = [&](const std::string& name, auto&& fn) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    fn(out);
    if (!out) throw IoError("error while writing " + path.string());
  };
  write("results_" + company + ".csv", [&](std::ostream& o) { write_results_csv(o, reports); });
  write("histogram_" + company + ".csv", [&](std::ostream& o) { write_histogram_csv(o, reports); });
}

}  // namespace tradelab
