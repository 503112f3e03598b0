// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Usage: acceptance_tests [work_dir]

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/synthetic.hpp"
#include "tradelab/agents_approx.hpp"
#include "tradelab/agents_tabular.hpp"
#include "tradelab/cli.hpp"
#include "tradelab/evaluation.hpp"
#include "tradelab/nn.hpp"
#include "tradelab/prediction.hpp"
#include "tradelab/student_t.hpp"

using namespace tradelab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

// ---- 1 ---------------------------------------------------------------------

struct TableRow {
  const char* label;
  double mean, stdev, lower, upper;
};

Outcome ci_reproduction() {
  const std::vector<TableRow> rows{
      {"Apple Baseline", -0.2704, 0.0, -0.2704, -0.2704},
      {"Apple Q-Learning", -0.2482, 0.3819, -0.3556, -0.1407},
      {"Apple Linear", -0.1529, 0.2432, -0.2213, -0.0845},
      {"Apple Deep", -0.1143, 0.2516, -0.1851, -0.0435},
      {"Amazon Baseline", -1.3497, 0.0, -1.3497, -1.3497},
      {"Amazon Q-Learning", -1.9154, 2.7501, -2.6890, -1.1417},
      {"Amazon Linear", -0.9481, 2.2292, -1.5752, -0.3210},
      {"Amazon Deep", -1.2765, 2.6282, -2.0159, -0.5371},
      {"Microsoft Baseline", -0.0890, 0.0, -0.0890, -0.0890},
      {"Microsoft Q-Learning", -0.1602, 0.1275, -0.1960, -0.1243},
      {"Microsoft Linear", -0.1260, 0.1868, -0.1785, -0.0734},
      {"Microsoft Deep", -0.1593, 0.1537, -0.2025, -0.1161},
      {"Google Baseline", -1.2574, 0.0, -1.2574, -1.2574},
      {"Google Q-Learning", 0.6620, 1.5793, 0.2177, 1.1063},
      {"Google Linear", -0.2434, 1.3662, -0.6277, 0.1409},
      {"Google Deep", 0.2075, 1.0717, -0.0939, 0.5090},
  };
  double worst = 0.0;
  std::string worst_label;
  for (const auto& row : rows) {
    const auto ci = student_ci(row.mean, row.stdev, 51);
    const double err = std::max(std::abs(ci.lower - row.lower), std::abs(ci.upper - row.upper));
    if (err > worst) {
      worst = err;
      worst_label = row.label;
    }
  }
  return {worst <= 1e-3, std::to_string(rows.size()) + " rows, max |error| " + fmt(worst, 6) +
                             (worst_label.empty() ? "" : " (" + worst_label + ")") +
                             ", tolerance 1e-3"};
}

// ---- 2 ---------------------------------------------------------------------

Outcome baseline_determinism() {
  std::string detail;
  bool pass = true;
  for (const char* company : {"Apple", "Microsoft"}) {
    cli::RunConfig config;
    config.data_dir = TRADELAB_FIXTURE_DIR;
    config.company = company;
    const auto splits = cli::load_splits(config);
    EvalSetup setup;
    setup.n_runs = 51;
    const auto report =
        repeated_eval("Baseline", cli::make_agent_factory("baseline", config), splits, setup);
    pass = pass && report.profit_stdev == 0.0 && report.ci &&
           report.ci->lower == report.mean_profit && report.ci->upper == report.mean_profit;
    detail += std::string(detail.empty() ? "" : "; ") + company + " stdev " +
              fmt(report.profit_stdev, 6) + " over 51 runs";
  }
  return {pass, detail};
}

// ---- 4 ---------------------------------------------------------------------

constexpr std::size_t kW = 5;
constexpr std::size_t kDipDay = 2;
constexpr std::size_t kH = 2;

// Greedy buy day of `act` on every window with history.
std::vector<std::pair<const TimeWindow*, std::size_t>> buy_days(
    const Policy& policy, const std::vector<TimeWindow>& windows, const PriceSeries& series) {
  std::vector<std::pair<const TimeWindow*, std::size_t>> out;
  for (const auto& window : windows) {
    if (!has_history(window, kH)) continue;
    out.emplace_back(&window, score_window(policy, window, series, kH).buy_day);
  }
  return out;
}

struct Corpus {
  const char* name;
  PriceSeries train;
  PriceSeries test;
};

// A strictly periodic series (every window [10, 9, 8, 9.5, 11]) and windows
// sharing that shape with a random depth; both have their minimum on day 2.
std::vector<Corpus> corpora() {
  return {
      {"periodic", testing::periodic({10, 9, 8, 9.5, 11}, 400),
       testing::periodic({10, 9, 8, 9.5, 11}, 200)},
      {"varied depth", testing::dip_windows(400, kW, kDipDay, 101),
       testing::dip_windows(200, kW, kDipDay, 202)},
  };
}

Outcome tabular_convergence() {
  bool pass = true;
  std::string detail;
  for (const auto& corpus : corpora()) {
    const auto start = Clock::now();
    RewardConfig reward;
    reward.mode = RewardMode::Movement;
    TrainConfig train;
    train.epochs = 50;
    train.seed = 1;
    TabularPolicy policy(train_tabular(corpus.train, kH, reward, train));

    const auto windows = make_windows(corpus.test, kW);
    std::size_t rising = 0, total = 0;
    for (const auto& [window, day] : buy_days(policy, windows, corpus.test)) {
      const std::size_t index = window->start_index + day;
      if (index + 1 < corpus.test.size() && corpus.test[index + 1].close > corpus.test[index].close) {
        ++rising;
      }
      ++total;
    }
    const double rate = static_cast<double>(rising) / static_cast<double>(total);
    const double elapsed = seconds_since(start);
    pass = pass && rate >= 0.95 && elapsed < 60.0;
    detail += std::string(detail.empty() ? "" : "; ") + corpus.name + " " + fmt(100 * rate, 1) +
              "% of " + std::to_string(total) + " held-out windows bought before a rise (" +
              fmt(elapsed, 2) + " s)";
  }
  return {pass, detail + "; required >= 95%, < 60 s"};
}

double optimal_rate(const Policy& policy, const PriceSeries& test_series) {
  const auto windows = make_windows(test_series, kW);
  std::size_t hits = 0, total = 0;
  for (const auto& [window, day] : buy_days(policy, windows, test_series)) {
    hits += day == testing::best_buy_day(*window);
    ++total;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

Outcome approx_convergence() {
  bool pass = true;
  std::string detail;
  for (const auto& corpus : corpora()) {
    const auto train_windows = make_windows(corpus.train, kW);
    RewardConfig reward;

    auto start = Clock::now();
    TrainConfig train;
    train.epochs = 50;
    train.seed = 1;
    LinearPolicy linear(train_linear(train_windows, corpus.train, kH, reward, train));
    const double linear_rate = optimal_rate(linear, corpus.test);
    const double linear_time = seconds_since(start);

    start = Clock::now();
    DeepHyperparams hp;
    hp.epochs = 50;
    hp.seed = 1;
    DeepPolicy deep(train_deep(train_windows, corpus.train, kH, reward, hp));
    const double deep_rate = optimal_rate(deep, corpus.test);
    const double deep_time = seconds_since(start);

    pass = pass && linear_rate >= 0.95 && deep_rate >= 0.90 && linear_time < 60.0 &&
           deep_time < 60.0;
    detail += std::string(detail.empty() ? "" : "; ") + corpus.name + ": linear " +
              fmt(100 * linear_rate, 1) + "% (" + fmt(linear_time, 2) + " s), deep " +
              fmt(100 * deep_rate, 1) + "% (" + fmt(deep_time, 2) + " s)";
  }
  return {pass, detail + " on the minimum day; required >= 95% / >= 90%, < 60 s each"};
}

// ---- 5 ---------------------------------------------------------------------

Outcome gradient_correctness() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> width(1, 8), depth(0, 2);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0.0;
  int nets = 0;
  for (; nets < 200; ++nets) {
    nn::LayerSpec spec;
    spec.sizes.push_back(width(rng));
    const auto hidden = depth(rng);
    for (std::size_t i = 0; i < hidden; ++i) spec.sizes.push_back(width(rng));
    spec.sizes.push_back(1);
    auto net = nn::init(spec, rng());
    for (auto& layer : net.layers)
      for (auto& b : layer.bias) b = 0.5 * u(rng);
    std::vector<double> x(spec.sizes.front());
    for (auto& v : x) v = 2 * u(rng);
    const double target = 2 * u(rng);

    const auto [out, cache] = nn::forward(net, x);
    std::vector<double> analytic;
    nn::for_each_parameter(nn::backward(net, cache, target),
                           [&](double g) { analytic.push_back(g); });
    std::size_t i = 0;
    nn::for_each_parameter(net, [&](double& p) {
      const double saved = p, h = 1e-5;
      p = saved + h;
      const double up = std::pow(nn::predict(net, x) - target, 2);
      p = saved - h;
      const double down = std::pow(nn::predict(net, x) - target, 2);
      p = saved;
      const double fd = (up - down) / (2 * h);
      const double scale = std::max({std::abs(fd), std::abs(analytic[i]), 1e-4});
      worst = std::max(worst, std::abs(fd - analytic[i]) / scale);
      ++i;
    });
  }

  double worst_logistic = 0.0;
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix features;
    std::vector<int> labels;
    for (int r = 0; r < 40; ++r) {
      std::vector<double> row(12);
      for (auto& v : row) v = 0.05 * u(rng);
      features.append_row(row);
      labels.push_back(coin(rng));
    }
    ClassifierModel model;
    for (int j = 0; j < 13; ++j) model.weights.push_back(2 * u(rng));
    const auto lg = logistic_loss(model, features, labels);
    for (std::size_t j = 0; j < model.weights.size(); ++j) {
      auto up = model, down = model;
      up.weights[j] += 1e-5;
      down.weights[j] -= 1e-5;
      const double fd =
          (logistic_loss(up, features, labels).loss - logistic_loss(down, features, labels).loss) /
          2e-5;
      const double scale = std::max({std::abs(fd), std::abs(lg.gradient[j]), 1e-4});
      worst_logistic = std::max(worst_logistic, std::abs(fd - lg.gradient[j]) / scale);
    }
  }
  return {worst < 1e-4 && worst_logistic < 1e-4,
          std::to_string(nets) + " networks max rel. error " + fmt(worst, 8) +
              "; logistic (100 problems) " + fmt(worst_logistic, 8) + "; tolerance 1e-4"};
}

// ---- 6 ---------------------------------------------------------------------

Outcome conservation() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> width(2, 12);
  double worst = 0.0;
  bool beaten = false;
  int windows = 0;
  for (; windows < 1000; ++windows) {
    const std::size_t w = width(rng);
    const auto series = testing::random_walk(w + 3, rng(), 100.0, 0.03);
    TimeWindow window{3, {series.bars.begin() + 3, series.bars.end()}};
    double min_close = window.bars[0].close, best_profit = -1e300;
    for (const auto& bar : window.bars) {
      min_close = std::min(min_close, bar.close);
      best_profit = std::max(best_profit, window.anchor() - bar.close);
    }
    // Random policy: independent per-day buy probability, fixed per window.
    const double p = std::uniform_real_distribution<double>(0, 1)(rng);
    auto day_rng = std::make_shared<std::mt19937_64>(rng());
    FunctionPolicy policy([p, day_rng](const PriceState&) {
      return std::bernoulli_distribution(p)(*day_rng) ? Action::Buy : Action::Wait;
    });
    const auto score = score_window(policy, window, series, 3);
    worst = std::max(worst, std::abs(score.profit + score.regret - (window.anchor() - min_close)));
    beaten = beaten || score.profit > best_profit + 1e-9;
  }
  return {worst <= 1e-9 && !beaten,
          std::to_string(windows) + " windows, max |profit + regret - (anchor - min)| " +
              fmt(worst, 12) + ", optimal beaten: " + (beaten ? "yes" : "no")};
}

// ---- 7 ---------------------------------------------------------------------

Outcome persistence_equivalence() {
  int mismatches = 0;
  int series_count = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed, ++series_count) {
    const auto series = testing::random_walk(1000, seed, 100.0, 0.012);
    std::vector<double> preds, actuals;
    std::size_t hits = 0;
    for (std::size_t t = 0; t + 1 < series.size(); ++t) {
      preds.push_back(persistence_predict(series[t].close));
      actuals.push_back(series[t + 1].close);
      hits += std::abs(series[t + 1].close - series[t].close) / series[t + 1].close <= 0.02;
    }
    const double oracle = static_cast<double>(hits) / static_cast<double>(preds.size());
    mismatches += accuracy_within(preds, actuals, 0.02) != oracle;

    // Same figure through the full prediction pipeline (train + test rows).
    const auto report = run_prediction(series, PredictionOptions{});
    const auto& row = report.rows[1];
    const std::size_t n = preds.size(), cut = chronological_cut(n);
    std::size_t train_hits = 0, test_hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool ok = std::abs(actuals[i] - preds[i]) / actuals[i] <= 0.02;
      (i < cut ? train_hits : test_hits) += ok;
    }
    mismatches += row.accuracy.train != static_cast<double>(train_hits) / static_cast<double>(cut);
    mismatches +=
        row.accuracy.test != static_cast<double>(test_hits) / static_cast<double>(n - cut);
  }
  return {mismatches == 0, std::to_string(series_count) +
                               " random walks, exact mismatches: " + std::to_string(mismatches)};
}

// ---- 8 ---------------------------------------------------------------------

Outcome near_chance() {
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto series = testing::random_walk(10000, 1000 + seed);
    PredictionOptions options;
    options.seed = static_cast<std::uint64_t>(seed);
    const double acc = run_prediction(series, options).rows[2].accuracy.test;
    lo = std::min(lo, acc);
    hi = std::max(hi, acc);
    sum += acc;
  }
  return {lo >= 0.45 && hi <= 0.55, "test accuracy over " + std::to_string(seeds) +
                                        " seeds: mean " + fmt(sum / seeds) + ", range [" +
                                        fmt(lo) + ", " + fmt(hi) + "] (required 0.5 +- 0.05)"};
}

// ---- 9 ---------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome end_to_end_determinism(const fs::path& work) {
  const auto run_into = [&](const std::string& name, const std::string& jobs) {
    const auto dir = work / name;
    fs::remove_all(dir);
    const std::string data_dir = TRADELAB_FIXTURE_DIR, out_dir = dir.string();
    const std::vector<std::string> args{"tradelab", "--data-dir", data_dir, "--out-dir", out_dir,
                                        "--seed",   "7",          "--jobs", jobs,      "evaluate"};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::make_pair(code, slurp(dir / "results_Apple.csv") + "\n--\n" +
                                    slurp(dir / "histogram_Apple.csv"));
  };
  const auto first = run_into("run_a", "1");
  const auto second = run_into("run_b", "1");
  const auto threaded = run_into("run_c", "4");
  const bool ok = first.first == 0 && second.first == 0 && threaded.first == 0 &&
                  first.second.size() > 60 && first.second == second.second &&
                  first.second == threaded.second;
  return {ok, std::string("evaluate (51 runs x 4 agents) repeated: ") +
                  (first.second == second.second ? "identical" : "DIFFERENT") +
                  "; --jobs 1 vs 4: " + (first.second == threaded.second ? "identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "tradelab_acceptance";
  fs::create_directories(work);

  struct Criterion {
    const char* id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"1", "confidence interval reproduction", ci_reproduction},
      {"2", "baseline determinism", baseline_determinism},
      {"4a", "tabular convergence on dip windows", tabular_convergence},
      {"4b", "linear and deep convergence on dip windows", approx_convergence},
      {"5", "gradient correctness", gradient_correctness},
      {"6", "conservation oracle", conservation},
      {"7", "persistence equivalence", persistence_equivalence},
      {"8", "near-chance classification", near_chance},
      {"9", "end-to-end determinism", [&] { return end_to_end_determinism(work); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": "
              << outcome.detail << std::endl;
    if (std::string(c.id) == "2") {
      std::cout << "N/A   [3] agent profits of the published tables: not reproducible without the "
                   "original data vintage and hyperparameters; covered by 4-9"
                << std::endl;
    }
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
