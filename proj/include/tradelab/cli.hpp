#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "tradelab/evaluation.hpp"
#include "tradelab/market_data.hpp"

namespace tradelab::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kData = 2,
  kNumerical = 3,
};

/// Every tunable of a run. Flags use the kebab-case field names; a
/// `--config` file of key=value lines supplies values the command line
/// does not.
struct RunConfig {
  std::string company = "Apple";
  /// Explicit input file; when empty, <data_dir>/<company>.csv.
  std::string data;
  std::string data_dir = "data";
  std::string cutoff = "2005-01-01";
  std::size_t w = 5;
  std::size_t h = 2;
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon = 0.1;
  std::optional<double> epsilon_floor;
  double r = 1.0;
  double c = 0.1;
  /// Forced-purchase penalty used while training the window-mode agents.
  double lambda = 1.0;
  double d = 0.5;
  int epochs = 50;
  int deep_epochs = 30;
  std::size_t hidden_layers = 2;
  std::size_t units = 16;
  double lr = 1e-3;
  std::size_t n_runs = 51;
  std::uint64_t seed = 0;
  std::string out_dir = "results";
  std::size_t jobs = 1;
  double tol = 0.02;
  double logistic_lr = 0.5;
  int logistic_epochs = 1000;
  bool paper_literal_update = false;

  std::filesystem::path data_path() const;
  Date cutoff_date() const;
};

/// Loads, filters and splits the configured company's data.
SplitSeries load_splits(const RunConfig& config);

/// Factory for one of "baseline", "q", "linear", "deep". Throws UsageError
/// for anything else.
AgentFactory make_agent_factory(const std::string& agent, const RunConfig& config);

/// Display name used in result tables ("Q-Learning" for "q", ...).
std::string display_name(const std::string& agent);

/// Trains `agent` on the train split, writes its parameters and an epoch log
/// to out_dir, prints train/validation scores to `out`.
void cmd_train(const std::string& agent, const RunConfig& config, std::ostream& out);

/// All four agents, repeated runs, results/histogram CSVs.
void cmd_evaluate(const RunConfig& config, std::ostream& out);

/// Regression, persistence and logistic pipelines.
void cmd_predict(const RunConfig& config, std::ostream& out);

/// Full command-line entry point. Never throws; returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tradelab::cli
