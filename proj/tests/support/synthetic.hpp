#pragma once

// Synthetic price series and brute-force oracles shared by the unit and
// acceptance tests. Nothing here calls into the agents or the evaluator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tradelab/market_data.hpp"

namespace tradelab::testing {

/// Consecutive calendar days starting 2006-01-01 (civil-from-days).
inline Date nth_day(std::int64_t index) {
  std::int64_t z = 13149 + index + 719468;  // 13149 = days from 1970-01-01 to 2006-01-01
  const std::int64_t era = z / 146097;
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const int d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  const int m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  const int y = static_cast<int>(yoe + era * 400 + (m <= 2 ? 1 : 0));
  return Date{y, m, d};
}

inline OhlcBar make_bar(std::int64_t index, double open, double close, double wick = 0.0) {
  OhlcBar b;
  b.date = nth_day(index);
  b.open = open;
  b.close = close;
  b.high = std::max(open, close) * (1.0 + wick);
  b.low = std::min(open, close) * (1.0 - wick);
  return b;
}

/// Series whose bars open at the previous close and close at `closes[i]`.
inline PriceSeries from_closes(const std::vector<double>& closes, double first_open,
                               double wick = 0.001) {
  PriceSeries s;
  s.company = "Synthetic";
  double open = first_open;
  for (std::size_t i = 0; i < closes.size(); ++i) {
    s.bars.push_back(make_bar(static_cast<std::int64_t>(i), open, closes[i], wick));
    open = closes[i];
  }
  return s;
}

/// `periods` repetitions of `pattern`; bar i opens at bar i-1's close.
inline PriceSeries periodic(const std::vector<double>& pattern, std::size_t periods) {
  std::vector<double> closes;
  for (std::size_t p = 0; p < periods; ++p) closes.insert(closes.end(), pattern.begin(), pattern.end());
  return from_closes(closes, pattern.back());
}

/// Geometric random walk with independent open and close shocks, so daily
/// movements are i.i.d. fair coin flips.
inline PriceSeries random_walk(std::size_t n, std::uint64_t seed, double start = 100.0,
                               double vol = 0.01) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> shock(0.0, vol);
  std::uniform_real_distribution<double> wick(0.0, vol);
  PriceSeries s;
  s.company = "Walk";
  double close = start;
  for (std::size_t i = 0; i < n; ++i) {
    const double open = close * std::exp(shock(rng) / 3.0);
    close = open * std::exp(shock(rng));
    OhlcBar b;
    b.date = nth_day(static_cast<std::int64_t>(i));
    b.open = open;
    b.close = close;
    b.high = std::max(open, close) * (1.0 + wick(rng));
    b.low = std::min(open, close) * (1.0 - wick(rng));
    s.bars.push_back(b);
  }
  return s;
}

/// Windows of length w that fall by a random depth a per day down to day k,
/// then rise; each window's anchor is drawn from [scale_lo, scale_hi].
/// Window i covers bars [i*w, (i+1)*w).
inline PriceSeries dip_windows(std::size_t count, std::size_t w, std::size_t k,
                               std::uint64_t seed, double scale_lo = 100.0,
                               double scale_hi = 100.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> depth(0.04, 0.12);
  std::uniform_real_distribution<double> scale(scale_lo, std::max(scale_lo, scale_hi));
  std::vector<double> closes;
  for (std::size_t i = 0; i < count; ++i) {
    const double anchor = scale(rng);
    const double a = depth(rng);
    for (std::size_t day = 0; day < w; ++day) {
      const double steps = day <= k ? -static_cast<double>(day)
                                    : -static_cast<double>(k) + 1.5 * static_cast<double>(day - k);
      closes.push_back(anchor * (1.0 + a * steps));
    }
  }
  return from_closes(closes, closes.front());
}

/// Day index of the lowest close (first one on ties): the best purchase.
inline std::size_t best_buy_day(const TimeWindow& window) {
  std::size_t best = 0;
  for (std::size_t d = 1; d < window.bars.size(); ++d) {
    if (window.bars[d].close < window.bars[best].close) best = d;
  }
  return best;
}

}  // namespace tradelab::testing
