#include "tradelab/prediction.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "detail/number_format.hpp"
#include "tradelab/errors.hpp"
#include "tradelab/simd/kernels.hpp"

namespace tradelab {

namespace {

constexpr double kJitter = 1e-8;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

Matrix with_intercept(const Matrix& x) {
  Matrix out(x.rows, x.cols + 1);
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t c = 0; c < x.cols; ++c) out(r, c) = x(r, c);
    out(r, x.cols) = 1.0;
  }
  return out;
}

Matrix slice_rows(const Matrix& x, std::size_t from, std::size_t to) {
  Matrix out(to - from, x.cols);
  std::copy(x.data.begin() + static_cast<std::ptrdiff_t>(from * x.cols),
            x.data.begin() + static_cast<std::ptrdiff_t>(to * x.cols), out.data.begin());
  return out;
}

template <class T>
std::span<const T> slice(const std::vector<T>& v, std::size_t from, std::size_t to) {
  return std::span<const T>(v).subspan(from, to - from);
}

}  // namespace

double RegressionModel::predict(std::span<const double> x) const {
  if (x.size() != coefficients.size()) throw UsageError("regression input has the wrong width");
  return intercept + simd::dot(coefficients, x);
}

RegressionModel fit_ols(const Matrix& features, std::span<const double> targets) {
  if (features.rows != targets.size()) throw UsageError("features and targets differ in length");
  if (features.rows < features.cols + 1) {
    throw UsageError("least squares needs at least as many rows as columns");
  }
  const Matrix design = with_intercept(features);
  Matrix normal = gram(design);
  for (std::size_t i = 0; i < normal.rows; ++i) normal(i, i) += kJitter;
  auto solution = solve_spd(normal, transpose_times(design, targets));
  for (double v : solution) {
    if (!std::isfinite(v)) throw NumericalError("least-squares coefficients are not finite");
  }
  RegressionModel model;
  model.intercept = solution.back();
  solution.pop_back();
  model.coefficients = std::move(solution);
  return model;
}

double accuracy_within(std::span<const double> preds, std::span<const double> actuals, double tol) {
  if (preds.size() != actuals.size()) throw UsageError("predictions and actuals differ in length");
  if (preds.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (std::abs(preds[i] - actuals[i]) / actuals[i] <= tol) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double ClassifierModel::probability(std::span<const double> x) const {
  if (x.size() + 1 != weights.size()) throw UsageError("classifier input has the wrong width");
  return sigmoid(simd::dot(std::span<const double>(weights).first(x.size()), x) + weights.back());
}

LossAndGradient logistic_loss(const ClassifierModel& model, const Matrix& features,
                              std::span<const int> labels) {
  if (features.rows != labels.size()) throw UsageError("features and labels differ in length");
  if (model.weights.size() != features.cols + 1) throw UsageError("weights have the wrong width");
  LossAndGradient out;
  out.gradient.assign(model.weights.size(), 0.0);
  const auto w = std::span<const double>(model.weights).first(features.cols);
  const double n = static_cast<double>(features.rows);
  std::vector<double> residual(features.rows);
  for (std::size_t r = 0; r < features.rows; ++r) {
    const double z = simd::dot(w, features.row(r)) + model.weights.back();
    const double y = labels[r] ? 1.0 : 0.0;
    // -[y log s(z) + (1-y) log(1 - s(z))] = softplus(z) - y z
    out.loss += softplus(z) - y * z;
    residual[r] = (sigmoid(z) - y) / n;
  }
  out.loss /= n;
  simd::gemv_transposed(features.data, features.rows, features.cols, residual,
                        std::span<double>(out.gradient).first(features.cols));
  double bias_grad = 0.0;
  for (double v : residual) bias_grad += v;
  out.gradient.back() = bias_grad;
  return out;
}

ClassifierModel fit_logistic(const Matrix& features, std::span<const int> labels, double lr,
                             int epochs, std::uint64_t seed, std::vector<double>* loss_history) {
  if (!(lr > 0.0)) throw UsageError("learning rate must be positive");
  if (epochs < 0) throw UsageError("epochs must be non-negative");
  for (int y : labels) {
    if (y != 0 && y != 1) throw UsageError("labels must be 0 or 1");
  }
  ClassifierModel model;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.01, 0.01);
  model.weights.resize(features.cols + 1);
  for (double& w : model.weights) w = dist(rng);

  for (int epoch = 0; epoch <= epochs; ++epoch) {
    auto lg = logistic_loss(model, features, labels);
    if (!std::isfinite(lg.loss)) throw NumericalError("logistic loss is not finite");
    if (loss_history) loss_history->push_back(lg.loss);
    if (epoch == epochs) break;
    simd::axpy(-lr, lg.gradient, model.weights);
  }
  return model;
}

double classification_accuracy(const ClassifierModel& model, const Matrix& features,
                               std::span<const int> labels) {
  if (features.rows != labels.size()) throw UsageError("features and labels differ in length");
  if (features.rows == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < features.rows; ++r) {
    if (model.predict(features.row(r)) == labels[r]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(features.rows);
}

AccuracyPair classification_report(const ClassifierModel& model, const Matrix& train_x,
                                   std::span<const int> train_y, const Matrix& test_x,
                                   std::span<const int> test_y) {
  return {classification_accuracy(model, train_x, train_y),
          classification_accuracy(model, test_x, test_y)};
}

RegressionData regression_dataset(const PriceSeries& series) {
  RegressionData data;
  data.features = Matrix(0, 4);
  for (std::size_t t = 0; t + 1 < series.size(); ++t) {
    const auto& b = series[t];
    const double row[4] = {b.open, b.high, b.low, b.close};
    data.features.append_row(row);
    data.targets.push_back(series[t + 1].close);
    data.today_close.push_back(b.close);
    data.target_dates.push_back(series[t + 1].date);
  }
  return data;
}

ClassificationData classification_dataset(const PriceSeries& series) {
  ClassificationData data;
  data.features = Matrix(0, 12);
  for (std::size_t t = 2; t + 1 < series.size(); ++t) {
    const double anchor = series[t].close;
    double row[12];
    std::size_t k = 0;
    for (std::size_t d = t - 2; d <= t; ++d) {
      const auto& b = series[d];
      for (double p : {b.open, b.high, b.low, b.close}) row[k++] = p / anchor - 1.0;
    }
    data.features.append_row(row);
    data.labels.push_back(movement(series[t + 1]) == Movement::Up ? 1 : 0);
  }
  return data;
}

PredictionReport run_prediction(const PriceSeries& series, const PredictionOptions& options) {
  PredictionReport report;

  const auto reg = regression_dataset(series);
  const std::size_t n_reg = reg.targets.size();
  const std::size_t cut_reg = chronological_cut(n_reg);
  if (cut_reg < reg.features.cols + 1 || cut_reg == n_reg) {
    throw DataError("series too short for the regression pipeline");
  }
  const auto model = fit_ols(slice_rows(reg.features, 0, cut_reg), slice(reg.targets, 0, cut_reg));
  std::vector<double> ols_pred(n_reg);
  for (std::size_t i = 0; i < n_reg; ++i) ols_pred[i] = model.predict(reg.features.row(i));

  auto accuracy_pair = [&](const std::vector<double>& preds) {
    return AccuracyPair{
        accuracy_within(slice(preds, 0, cut_reg), slice(reg.targets, 0, cut_reg), options.tolerance),
        accuracy_within(slice(preds, cut_reg, n_reg), slice(reg.targets, cut_reg, n_reg),
                        options.tolerance)};
  };
  std::vector<double> persistence(n_reg);
  for (std::size_t i = 0; i < n_reg; ++i) persistence[i] = persistence_predict(reg.today_close[i]);

  report.rows.push_back({"ols", accuracy_pair(ols_pred)});
  report.rows.push_back({"persistence", accuracy_pair(persistence)});

  for (std::size_t i = cut_reg; i < n_reg; ++i) {
    const double err = std::abs(ols_pred[i] - reg.targets[i]) / reg.targets[i];
    report.test_predictions.push_back(
        {reg.target_dates[i], reg.targets[i], ols_pred[i], err <= options.tolerance});
  }

  const auto cls = classification_dataset(series);
  const std::size_t n_cls = cls.labels.size();
  const std::size_t cut_cls = chronological_cut(n_cls);
  if (cut_cls == 0 || cut_cls == n_cls) {
    throw DataError("series too short for the classification pipeline");
  }
  const Matrix train_x = slice_rows(cls.features, 0, cut_cls);
  const Matrix test_x = slice_rows(cls.features, cut_cls, n_cls);
  const auto train_y = slice(cls.labels, 0, cut_cls);
  const auto test_y = slice(cls.labels, cut_cls, n_cls);
  const auto clf =
      fit_logistic(train_x, train_y, options.learning_rate, options.epochs, options.seed);
  report.rows.push_back({"logistic", classification_report(clf, train_x, train_y, test_x, test_y)});
  return report;
}

void write_prediction_table(std::ostream& out, const PredictionReport& report) {
  out << "algorithm,train_accuracy,test_accuracy\n";
  for (const auto& row : report.rows) {
    out << row.algorithm << ',' << detail::fixed(row.accuracy.train, 4) << ','
        << detail::fixed(row.accuracy.test, 4) << '\n';
  }
}

void write_daily_predictions(std::ostream& out, const PredictionReport& report) {
  out << "date,actual,predicted,correct\n";
  for (const auto& p : report.test_predictions) {
    out << p.date.to_string() << ',' << detail::fixed(p.actual, 4) << ','
        << detail::fixed(p.predicted, 4) << ',' << (p.correct ? 1 : 0) << '\n';
  }
}

}  // namespace tradelab
