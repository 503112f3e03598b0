#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tradelab/linalg.hpp"
#include "tradelab/market_data.hpp"

namespace tradelab {

/// Linear model with an intercept.
struct RegressionModel {
  std::vector<double> coefficients;
  double intercept = 0.0;

  double predict(std::span<const double> x) const;
};

/// Least squares on [features | 1] via the normal equations with 1e-8 added
/// to the diagonal. Throws UsageError if rows < columns (intercept included)
/// or the shapes disagree, NumericalError if the system is still singular.
RegressionModel fit_ols(const Matrix& features, std::span<const double> targets);

/// Tomorrow's close predicted as today's.
inline double persistence_predict(double today_close) noexcept { return today_close; }

/// Fraction of i with |pred - actual| / actual <= tol. Throws UsageError on a
/// length mismatch; an empty input scores 0.
double accuracy_within(std::span<const double> preds, std::span<const double> actuals,
                       double tol = 0.02);

/// Logistic model; the last weight is the bias.
struct ClassifierModel {
  std::vector<double> weights;
  double threshold = 0.5;

  double probability(std::span<const double> x) const;
  int predict(std::span<const double> x) const { return probability(x) >= threshold ? 1 : 0; }
};

/// Mean binary cross-entropy and its gradient w.r.t. every weight.
struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;
};
LossAndGradient logistic_loss(const ClassifierModel& model, const Matrix& features,
                              std::span<const int> labels);

/// Full-batch gradient descent on cross-entropy from small seeded weights.
/// `loss_history`, when given, receives the loss before each epoch and after
/// the last. Throws NumericalError on a non-finite loss.
ClassifierModel fit_logistic(const Matrix& features, std::span<const int> labels, double lr,
                             int epochs, std::uint64_t seed,
                             std::vector<double>* loss_history = nullptr);

double classification_accuracy(const ClassifierModel& model, const Matrix& features,
                               std::span<const int> labels);

struct AccuracyPair {
  double train = 0.0;
  double test = 0.0;
};

AccuracyPair classification_report(const ClassifierModel& model, const Matrix& train_x,
                                   std::span<const int> train_y, const Matrix& test_x,
                                   std::span<const int> test_y);

// ---- Datasets built from a price series ------------------------------------

/// Row t: day t's open/high/low/close; target: close of day t+1.
struct RegressionData {
  Matrix features;
  std::vector<double> targets;
  std::vector<double> today_close;
  std::vector<Date> target_dates;
};
RegressionData regression_dataset(const PriceSeries& series);

/// Row t (t >= 2): open/high/low/close of days t-2, t-1, t as price/close_t - 1.
/// Label: 1 when day t+1 moves Up.
struct ClassificationData {
  Matrix features;
  std::vector<int> labels;
};
ClassificationData classification_dataset(const PriceSeries& series);

/// Rows before this index train, the rest test (80/20, no shuffling).
inline std::size_t chronological_cut(std::size_t n) noexcept { return n * 8 / 10; }

struct PredictionOptions {
  double tolerance = 0.02;
  double learning_rate = 0.5;
  int epochs = 1000;
  std::uint64_t seed = 0;
};

struct PredictionRow {
  std::string algorithm;
  AccuracyPair accuracy;
};

struct DailyPrediction {
  Date date;
  double actual = 0.0;
  double predicted = 0.0;
  bool correct = false;
};

struct PredictionReport {
  std::vector<PredictionRow> rows;  // ols, persistence, logistic
  std::vector<DailyPrediction> test_predictions;  // OLS on the test part
};

/// Runs the regression, persistence and logistic pipelines on one series.
/// Throws DataError if the series is too short to fit either model.
PredictionReport run_prediction(const PriceSeries& series, const PredictionOptions& options);

/// algorithm,train_accuracy,test_accuracy
void write_prediction_table(std::ostream& out, const PredictionReport& report);
/// date,actual,predicted,correct
void write_daily_predictions(std::ostream& out, const PredictionReport& report);

}  // namespace tradelab
