#pragma once

#include <cstddef>

namespace tradelab {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

/// Inverse of student_t_cdf, p in (0, 1), solved to ~1e-12.
double student_t_quantile(double p, double df);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// mean +- t_{(1+level)/2, n-1} * stdev / sqrt(n). Throws UsageError for
/// n < 2, negative stdev or level outside (0, 1).
ConfidenceInterval student_ci(double mean, double stdev, std::size_t n, double level = 0.95);

}  // namespace tradelab
