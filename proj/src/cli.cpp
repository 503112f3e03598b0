#include "tradelab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>
#include <ostream>

#include "detail/number_format.hpp"
#include "tradelab/agents_approx.hpp"
#include "tradelab/agents_tabular.hpp"
#include "tradelab/errors.hpp"
#include "tradelab/prediction.hpp"
#include "tradelab/serialization.hpp"

namespace tradelab::cli {

namespace {

const std::vector<std::string>& agent_names() {
  static const std::vector<std::string> kNames{"baseline", "q", "linear", "deep"};
  return kNames;
}

RewardConfig movement_reward(const RunConfig& c) {
  RewardConfig reward;
  reward.mode = RewardMode::Movement;
  reward.r = c.r;
  reward.c = c.c;
  reward.gamma = c.gamma;
  return reward;
}

RewardConfig window_reward(const RunConfig& c) {
  RewardConfig reward;
  reward.mode = RewardMode::Window;
  reward.r = c.r;
  reward.c = c.c;
  reward.forced_penalty = c.lambda;
  reward.gamma = c.gamma;
  return reward;
}

TrainConfig train_config(const RunConfig& c, std::uint64_t seed) {
  TrainConfig t;
  t.alpha = c.alpha;
  t.epsilon = c.epsilon;
  t.epsilon_floor = c.epsilon_floor;
  t.epochs = c.epochs;
  t.seed = seed;
  return t;
}

DeepHyperparams deep_hyperparams(const RunConfig& c, std::uint64_t seed) {
  DeepHyperparams hp;
  hp.hidden_layers = c.hidden_layers;
  hp.units = c.units;
  hp.learning_rate = c.lr;
  hp.epochs = c.deep_epochs;
  hp.seed = seed;
  hp.epsilon = c.epsilon;
  hp.epsilon_floor = c.epsilon_floor;
  return hp;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_log(const std::filesystem::path& path, const std::vector<EpochStats>& log) {
  auto out = open_output(path);
  out << "epoch,steps,epsilon,average_reward,mean_loss\n";
  for (const auto& e : log) {
    out << e.epoch << ',' << e.steps << ',' << detail::fixed(e.epsilon, 6) << ','
        << detail::fixed(e.average_reward, 6) << ',' << detail::fixed(e.mean_loss, 6) << '\n';
  }
}

void print_run(std::ostream& out, const std::string& label, const RunResult& r) {
  out << label << ": average profit " << detail::fixed(r.average_profit, 4) << ", average regret "
      << detail::fixed(r.average_regret, 4) << ", buy fraction " << detail::fixed(r.buy_fraction, 4)
      << " over " << r.windows << " windows\n";
}

}  // namespace

std::filesystem::path RunConfig::data_path() const {
  if (!data.empty()) return data;
  return std::filesystem::path(data_dir) / (company + ".csv");
}

Date RunConfig::cutoff_date() const {
  auto d = Date::parse(cutoff);
  if (!d) throw UsageError("cutoff must be an ISO date (YYYY-MM-DD), got '" + cutoff + "'");
  return *d;
}

SplitSeries load_splits(const RunConfig& config) {
  const auto cutoff = config.cutoff_date();
  const auto raw = load_csv(config.data_path().string(), config.company);
  return split_80_10_10(filter_from(raw, cutoff));
}

std::string display_name(const std::string& agent) {
  if (agent == "baseline") return "Baseline";
  if (agent == "q") return "Q-Learning";
  if (agent == "linear") return "Approximate Linear";
  if (agent == "deep") return "Deep Q-Learning";
  throw UsageError("unknown agent '" + agent + "'");
}

AgentFactory make_agent_factory(const std::string& agent, const RunConfig& config) {
  const RunConfig c = config;
  if (agent == "baseline") {
    BaselineConfig bc{c.d};
    bc.validate();
    return [bc](const SplitSeries&, std::uint64_t) { return std::make_unique<BaselinePolicy>(bc); };
  }
  if (agent == "q") {
    return [c](const SplitSeries& s, std::uint64_t seed) {
      return std::make_unique<TabularPolicy>(
          train_tabular(s.train, c.h, movement_reward(c), train_config(c, seed)));
    };
  }
  if (agent == "linear") {
    const auto rule = c.paper_literal_update ? UpdateRule::TargetOnly : UpdateRule::TdError;
    return [c, rule](const SplitSeries& s, std::uint64_t seed) {
      const auto windows = make_windows(s.train, c.w);
      return std::make_unique<LinearPolicy>(
          train_linear(windows, s.train, c.h, window_reward(c), train_config(c, seed), rule));
    };
  }
  if (agent == "deep") {
    return [c](const SplitSeries& s, std::uint64_t seed) {
      const auto windows = make_windows(s.train, c.w);
      return std::make_unique<DeepPolicy>(
          train_deep(windows, s.train, c.h, window_reward(c), deep_hyperparams(c, seed)));
    };
  }
  throw UsageError("unknown agent '" + agent + "' (expected baseline, q, linear or deep)");
}

void cmd_train(const std::string& agent, const RunConfig& config, std::ostream& out) {
  display_name(agent);  // rejects unknown names before any I/O
  const auto splits = load_splits(config);
  const std::filesystem::path dir(config.out_dir);
  const std::string stem = agent + "_" + config.company;
  std::vector<EpochStats> log;
  std::unique_ptr<Policy> policy;

  if (agent == "baseline") {
    BaselineConfig bc{config.d};
    bc.validate();
    auto file = open_output(dir / ("agent_" + stem + ".csv"));
    file << "parameter,value\nd," << detail::shortest(bc.d) << '\n';
    policy = std::make_unique<BaselinePolicy>(bc);
  } else if (agent == "q") {
    auto table = train_tabular(splits.train, config.h, movement_reward(config),
                               train_config(config, config.seed), &log);
    auto file = open_output(dir / ("agent_" + stem + ".csv"));
    write_qtable(file, table);
    policy = std::make_unique<TabularPolicy>(std::move(table));
  } else if (agent == "linear") {
    const auto windows = make_windows(splits.train, config.w);
    auto weights = train_linear(windows, splits.train, config.h, window_reward(config),
                                train_config(config, config.seed),
                                config.paper_literal_update ? UpdateRule::TargetOnly
                                                            : UpdateRule::TdError,
                                &log);
    auto file = open_output(dir / ("agent_" + stem + ".csv"));
    write_linear(file, weights);
    policy = std::make_unique<LinearPolicy>(std::move(weights));
  } else {
    const auto windows = make_windows(splits.train, config.w);
    auto params = train_deep(windows, splits.train, config.h, window_reward(config),
                             deep_hyperparams(config, config.seed), &log);
    auto file = open_output(dir / ("agent_" + stem + ".txt"));
    write_deep(file, params);
    policy = std::make_unique<DeepPolicy>(std::move(params));
  }
  write_log(dir / ("train_log_" + stem + ".csv"), log);

  out << display_name(agent) << " on " << config.company << '\n';
  print_run(out, "  train",
            evaluate(*policy, make_windows(splits.train, config.w), splits.train, config.h));
  print_run(out, "  validation",
            evaluate(*policy, make_windows(splits.validation, config.w), splits.validation,
                     config.h));
}

void cmd_evaluate(const RunConfig& config, std::ostream& out) {
  const auto splits = load_splits(config);
  EvalSetup setup;
  setup.w = config.w;
  setup.h = config.h;
  setup.n_runs = config.n_runs;
  setup.base_seed = config.seed;
  setup.jobs = config.jobs;

  std::vector<EvalReport> reports;
  for (const auto& agent : agent_names()) {
    reports.push_back(
        repeated_eval(display_name(agent), make_agent_factory(agent, config), splits, setup));
  }
  write_report(reports, config.company, config.out_dir);

  out << "agent,average_profit,average_regret,buy_fraction\n";
  for (const auto& r : reports) {
    out << r.agent << ',' << detail::fixed(r.mean_profit, 4) << ','
        << detail::fixed(r.mean_regret, 4) << ',' << detail::fixed(r.mean_buy_fraction, 4) << '\n';
  }
}

void cmd_predict(const RunConfig& config, std::ostream& out) {
  const auto cutoff = config.cutoff_date();
  const auto series = filter_from(load_csv(config.data_path().string(), config.company), cutoff);
  PredictionOptions options;
  options.tolerance = config.tol;
  options.learning_rate = config.logistic_lr;
  options.epochs = config.logistic_epochs;
  options.seed = config.seed;
  const auto report = run_prediction(series, options);

  const std::filesystem::path dir(config.out_dir);
  {
    auto file = open_output(dir / ("prediction_" + config.company + ".csv"));
    write_prediction_table(file, report);
  }
  {
    auto file = open_output(dir / ("predictions_daily_" + config.company + ".csv"));
    write_daily_predictions(file, report);
  }
  write_prediction_table(out, report);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Buy-timing reinforcement-learning agents on daily OHLC data", "tradelab"};
  // "--h" is the history length, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");

  double epsilon_floor = 0.01;
  auto* floor_opt = app.add_option("--epsilon-floor", epsilon_floor,
                                   "Decay epsilon linearly to this floor over the epochs [0, 1]; "
                                   "constant epsilon when absent")
                        ->check(CLI::Range(0.0, 1.0));
  app.add_option("--company", config.company, "Company label; selects <data-dir>/<company>.csv")
      ->capture_default_str();
  app.add_option("--data", config.data, "Explicit input CSV (overrides --data-dir/--company)");
  app.add_option("--data-dir", config.data_dir, "Directory holding <company>.csv files")
      ->capture_default_str();
  app.add_option("--cutoff", config.cutoff, "Drop bars dated before this day (YYYY-MM-DD)")
      ->capture_default_str();
  app.add_option("--w", config.w, "Time-window length in days, >= 2")
      ->capture_default_str()->check(CLI::Range(std::size_t{2}, std::size_t{10000}));
  app.add_option("--h", config.h, "History length in days, 0..16")
      ->capture_default_str()->check(CLI::Range(std::size_t{0}, std::size_t{16}));
  app.add_option("--alpha", config.alpha, "Learning rate of tabular/linear Q-learning, [0, 1]")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  app.add_option("--gamma", config.gamma, "Discount factor, [0, 1]")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  app.add_option("--epsilon", config.epsilon, "Exploration probability, [0, 1]")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  app.add_option("--r", config.r, "Movement-mode buy reward magnitude, > 0")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--c", config.c, "Movement-mode wait penalty, >= 0")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--lambda", config.lambda, "Forced-purchase penalty while training, >= 0")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--d", config.d, "Baseline price-drop threshold, >= 0")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--epochs", config.epochs, "Training passes for tabular and linear agents, >= 0")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--deep-epochs", config.deep_epochs, "Training passes for the deep agent, >= 0")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--hidden-layers", config.hidden_layers, "Deep agent hidden layers, >= 1")
      ->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  app.add_option("--units", config.units, "Units per hidden layer, >= 1")
      ->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  app.add_option("--lr", config.lr, "Deep agent learning rate, > 0")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--n-runs", config.n_runs, "Independent train+score runs per agent, >= 1")
      ->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  app.add_option("--seed", config.seed, "Base random seed")->capture_default_str();
  app.add_option("--out-dir", config.out_dir, "Output directory")->capture_default_str();
  app.add_option("--jobs", config.jobs, "Worker threads for evaluation runs, >= 1")
      ->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  app.add_option("--tol", config.tol, "Relative error counted as a correct price prediction, >= 0")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--logistic-lr", config.logistic_lr, "Logistic regression step size, > 0")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--logistic-epochs", config.logistic_epochs, "Logistic regression epochs, >= 0")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_flag("--paper-literal-update", config.paper_literal_update,
               "Linear agent: drop the -Q(s,a) term from the weight update (diverges)");

  std::string agent;
  auto* train = app.add_subcommand("train", "Train one agent and save its parameters");
  train->set_help_flag("--help", "Print this help message and exit");
  train->add_option("agent", agent, "baseline | q | linear | deep")
      ->required()
      ->check(CLI::IsMember(agent_names()));
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Compare all four agents over repeated runs");
  auto* predict = app.add_subcommand("predict", "Price-prediction baselines");
  evaluate_cmd->set_help_flag("--help", "Print this help message and exit");
  predict->set_help_flag("--help", "Print this help message and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream sink_out;
    std::ostringstream sink_err;
    const int code = app.exit(e, sink_out, sink_err);
    out << sink_out.str();
    err << sink_err.str();
    return code == 0 ? kSuccess : kUsage;
  }
  if (floor_opt->count() > 0) config.epsilon_floor = epsilon_floor;

  try {
    if (train->parsed()) cmd_train(agent, config, out);
    else if (evaluate_cmd->parsed()) cmd_evaluate(config, out);
    else if (predict->parsed()) cmd_predict(config, out);
    return kSuccess;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
}

}  // namespace tradelab::cli
