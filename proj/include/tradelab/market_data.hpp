#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tradelab {

/// Calendar date, ISO ordering.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  /// Parses YYYY-MM-DD. Returns nullopt for anything else, including
  /// impossible days like 2005-02-30.
  static std::optional<Date> parse(std::string_view text);
  std::string to_string() const;
};

/// One trading day.
struct OhlcBar {
  Date date;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  std::optional<double> adj_close;
  std::optional<double> volume;

  bool operator==(const OhlcBar&) const = default;
};

/// Empty string when the bar is valid, otherwise the violated rule.
std::string validate_bar(const OhlcBar& bar);

/// Ordered daily history of one company. Dates strictly increase.
struct PriceSeries {
  std::string company;
  std::vector<OhlcBar> bars;

  std::size_t size() const noexcept { return bars.size(); }
  bool empty() const noexcept { return bars.empty(); }
  const OhlcBar& operator[](std::size_t i) const { return bars[i]; }

  bool operator==(const PriceSeries&) const = default;
};

struct SplitSeries {
  PriceSeries train;
  PriceSeries validation;
  PriceSeries test;
};

/// w consecutive bars of a parent series. One episode of the buy problem.
struct TimeWindow {
  std::size_t start_index = 0;
  std::vector<OhlcBar> bars;

  std::size_t length() const noexcept { return bars.size(); }
  /// Close of the first day: the price every purchase in the window is scored against.
  double anchor() const { return bars.front().close; }
  double min_close() const;
};

enum class Movement { Down = 0, Up = 1 };

/// Parses a Yahoo!-style daily export. Columns are located by header name;
/// Date, Open, High, Low and Close are required, Adj Close and Volume are
/// optional. A header-only input yields an empty series.
/// Throws ParseError, ValidationError or OrderingError.
PriceSeries parse_csv(std::istream& in, std::string company = {});

/// Loads a file via parse_csv. Throws IoError if it cannot be opened.
PriceSeries load_csv(const std::string& path, std::string company = {});

/// Writes the series in the same layout parse_csv reads. Prices use the
/// shortest representation that round-trips exactly.
void write_csv(std::ostream& out, const PriceSeries& series);

inline constexpr Date kDefaultCutoff{2005, 1, 1};

/// Keeps bars dated on or after `cutoff`.
PriceSeries filter_from(const PriceSeries& series, Date cutoff = kDefaultCutoff);

/// Chronological 80/10/10 split: floor(0.8n), floor(0.1n), remainder.
/// Throws DataError for fewer than 10 bars.
SplitSeries split_80_10_10(const PriceSeries& series);

/// Non-overlapping windows of `w` bars tiling the series from index 0. A
/// trailing remainder shorter than w is dropped. Throws UsageError if w < 2.
std::vector<TimeWindow> make_windows(const PriceSeries& series, std::size_t w);

/// Up when close >= open (flat days count as Up).
Movement movement(const OhlcBar& bar) noexcept;

}  // namespace tradelab
