#include "tradelab/market_data.hpp"

#include <algorithm>
#include <cctype>
#include <array>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "detail/number_format.hpp"
#include "tradelab/errors.hpp"

namespace tradelab {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static constexpr std::array<int, 12> kDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return (m == 2 && is_leap(y)) ? 29 : kDays[static_cast<std::size_t>(m - 1)];
}

std::optional<int> parse_digits(std::string_view s) {
  int v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return std::nullopt;
    v = v * 10 + (ch - '0');
  }
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(detail::trim(line.substr(pos, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct Columns {
  std::optional<std::size_t> date, open, high, low, close, adj_close, volume;
  std::size_t count = 0;
};

Columns locate_columns(std::string_view header) {
  Columns cols;
  auto fields = split_fields(header);
  cols.count = fields.size();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    std::string name(fields[i]);
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (name == "date") cols.date = i;
    else if (name == "open") cols.open = i;
    else if (name == "high") cols.high = i;
    else if (name == "low") cols.low = i;
    else if (name == "close") cols.close = i;
    else if (name == "adj close" || name == "adj_close" || name == "adjclose") cols.adj_close = i;
    else if (name == "volume") cols.volume = i;
  }
  if (!cols.date || !cols.open || !cols.high || !cols.low || !cols.close) {
    throw ParseError(1, "header must name Date, Open, High, Low and Close");
  }
  return cols;
}

}  // namespace

std::optional<Date> Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto y = parse_digits(text.substr(0, 4));
  auto m = parse_digits(text.substr(5, 2));
  auto d = parse_digits(text.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  if (*m < 1 || *m > 12 || *d < 1 || *d > days_in_month(*y, *m)) return std::nullopt;
  return Date{*y, *m, *d};
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::string validate_bar(const OhlcBar& bar) {
  if (!(bar.open > 0.0 && bar.high > 0.0 && bar.low > 0.0 && bar.close > 0.0)) {
    return "prices must be positive";
  }
  if (bar.low > std::min(bar.open, bar.close)) return "low above open/close";
  if (bar.high < std::max(bar.open, bar.close)) return "high below open/close";
  if (bar.volume && *bar.volume < 0.0) return "negative volume";
  return {};
}

double TimeWindow::min_close() const {
  return std::min_element(bars.begin(), bars.end(),
                          [](const OhlcBar& a, const OhlcBar& b) { return a.close < b.close; })
      ->close;
}

PriceSeries parse_csv(std::istream& in, std::string company) {
  PriceSeries series;
  series.company = std::move(company);

  std::string line;
  std::size_t line_no = 0;
  std::optional<Columns> cols;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    if (!cols) {
      cols = locate_columns(text);
      continue;
    }
    const auto fields = split_fields(text);
    if (fields.size() != cols->count) {
      throw ParseError(line_no, "expected " + std::to_string(cols->count) + " columns, got " +
                                    std::to_string(fields.size()));
    }
    OhlcBar bar;
    auto date = Date::parse(fields[*cols->date]);
    if (!date) throw ParseError(line_no, "bad date '" + std::string(fields[*cols->date]) + "'");
    bar.date = *date;

    auto price = [&](std::size_t idx, const char* name) {
      auto v = detail::parse_double(fields[idx]);
      if (!v) {
        throw ParseError(line_no, std::string("unparseable ") + name + " '" +
                                      std::string(fields[idx]) + "'");
      }
      return *v;
    };
    auto optional_value = [&](std::optional<std::size_t> idx, const char* name) -> std::optional<double> {
      if (!idx) return std::nullopt;
      const auto field = fields[*idx];
      if (field.empty() || field == "null") return std::nullopt;
      return price(*idx, name);
    };
    bar.open = price(*cols->open, "open");
    bar.high = price(*cols->high, "high");
    bar.low = price(*cols->low, "low");
    bar.close = price(*cols->close, "close");
    bar.adj_close = optional_value(cols->adj_close, "adj close");
    bar.volume = optional_value(cols->volume, "volume");

    if (auto problem = validate_bar(bar); !problem.empty()) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + problem);
    }
    if (!series.bars.empty() && !(series.bars.back().date < bar.date)) {
      throw OrderingError("line " + std::to_string(line_no) + ": date " + bar.date.to_string() +
                          " does not follow " + series.bars.back().date.to_string());
    }
    series.bars.push_back(bar);
  }
  if (!cols) throw ParseError(line_no + 1, "missing header row");
  return series;
}

PriceSeries load_csv(const std::string& path, std::string company) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_csv(in, std::move(company));
}

void write_csv(std::ostream& out, const PriceSeries& series) {
  const bool any_adj = std::any_of(series.bars.begin(), series.bars.end(),
                                   [](const OhlcBar& b) { return b.adj_close.has_value(); });
  const bool any_vol = std::any_of(series.bars.begin(), series.bars.end(),
                                   [](const OhlcBar& b) { return b.volume.has_value(); });
  out << "Date,Open,High,Low,Close";
  if (any_adj) out << ",Adj Close";
  if (any_vol) out << ",Volume";
  out << '\n';
  for (const auto& b : series.bars) {
    out << b.date.to_string() << ',' << detail::shortest(b.open) << ','
        << detail::shortest(b.high) << ',' << detail::shortest(b.low) << ','
        << detail::shortest(b.close);
    if (any_adj) out << ',' << (b.adj_close ? detail::shortest(*b.adj_close) : "null");
    if (any_vol) out << ',' << (b.volume ? detail::shortest(*b.volume) : "null");
    out << '\n';
  }
}

PriceSeries filter_from(const PriceSeries& series, Date cutoff) {
  PriceSeries out;
  out.company = series.company;
  std::copy_if(series.bars.begin(), series.bars.end(), std::back_inserter(out.bars),
               [&](const OhlcBar& b) { return b.date >= cutoff; });
  return out;
}

SplitSeries split_80_10_10(const PriceSeries& series) {
  const std::size_t n = series.size();
  if (n < 10) {
    throw DataError("80/10/10 split needs at least 10 bars, got " + std::to_string(n));
  }
  const std::size_t n_train = n * 8 / 10;
  const std::size_t n_val = n / 10;
  auto slice = [&](std::size_t from, std::size_t to) {
    PriceSeries part;
    part.company = series.company;
    part.bars.assign(series.bars.begin() + static_cast<std::ptrdiff_t>(from),
                     series.bars.begin() + static_cast<std::ptrdiff_t>(to));
    return part;
  };
  return SplitSeries{slice(0, n_train), slice(n_train, n_train + n_val),
                     slice(n_train + n_val, n)};
}

std::vector<TimeWindow> make_windows(const PriceSeries& series, std::size_t w) {
  if (w < 2) throw UsageError("window length must be at least 2");
  std::vector<TimeWindow> windows;
  windows.reserve(series.size() / w);
  for (std::size_t start = 0; start + w <= series.size(); start += w) {
    TimeWindow win;
    win.start_index = start;
    win.bars.assign(series.bars.begin() + static_cast<std::ptrdiff_t>(start),
                    series.bars.begin() + static_cast<std::ptrdiff_t>(start + w));
    windows.push_back(std::move(win));
  }
  return windows;
}

Movement movement(const OhlcBar& bar) noexcept {
  return bar.close >= bar.open ? Movement::Up : Movement::Down;
}

}  // namespace tradelab
