#include "levlab/market_data.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include "levlab/errors.hpp"

namespace levlab {

namespace {

// Splits text into lines, tolerating trailing \r and a missing final newline.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return lines;
}

double parse_number(std::string_view s, std::size_t line_no) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("non-numeric value '" + std::string(s) + "'", line_no);
    return v;
}

double per_day_accrual(double rate, const DatasetOptions& opt) {
    const double r = rate / opt.day_count_divisor;
    return opt.continuous_accrual ? std::expm1(r) : r;
}

}  // namespace

std::size_t RawSeries::present_count(Date lo, Date hi) const {
    std::size_t n = 0;
    for (const auto& o : observations)
        if (o.value && o.date >= lo && o.date <= hi) ++n;
    return n;
}

RawSeries parse_fred_csv(std::string_view text, std::string_view series_id) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty input, expected a header row", 1);

    const std::string_view header = lines[0];
    const std::size_t comma = header.find(',');
    if (comma == std::string_view::npos)
        throw ParseError("header must have two comma-separated columns", 1);
    const std::string_view date_col = header.substr(0, comma);
    if (date_col != "DATE" && date_col != "observation_date")
        throw ParseError("unrecognized header column '" + std::string(date_col) + "'", 1);

    RawSeries series;
    series.series_id = std::string(series_id);
    series.observations.reserve(lines.size() - 1);

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string_view line = lines[i];
        const std::size_t line_no = i + 1;
        if (line.empty()) continue;  // blank trailing lines
        const std::size_t c = line.find(',');
        if (c == std::string_view::npos)
            throw ParseError("expected 'date,value'", line_no);
        Date d;
        try {
            d = Date::parse(line.substr(0, c));
        } catch (const DataError& e) {
            throw ParseError(e.what(), line_no);
        }
        if (!series.observations.empty() && d <= series.observations.back().date)
            throw ParseError("dates must be strictly increasing", line_no);
        const std::string_view raw = line.substr(c + 1);
        std::optional<double> value;
        if (raw != "." && !raw.empty()) value = parse_number(raw, line_no);
        series.observations.push_back({d, value});
    }
    return series;
}

RawSeries load_fred_csv(const std::string& path, std::string_view series_id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_fred_csv(buf.str(), series_id);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.line);
    }
}

MarketDataset::MarketDataset(Date start, std::vector<double> market_return,
                             std::vector<double> deposit_rate, std::vector<double> borrow_rate,
                             std::vector<std::uint8_t> is_trading_day, DatasetOptions options)
    : start_(start),
      market_return_(std::move(market_return)),
      deposit_rate_(std::move(deposit_rate)),
      borrow_rate_(std::move(borrow_rate)),
      is_trading_day_(std::move(is_trading_day)),
      options_(options) {
    const std::size_t n = market_return_.size();
    if (n == 0) throw DataError("dataset must cover at least one day");
    if (deposit_rate_.size() != n || borrow_rate_.size() != n || is_trading_day_.size() != n)
        throw DataError("dataset arrays must all have the calendar's length");
    if (options_.day_count_divisor <= 0) throw DataError("day-count divisor must be positive");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(market_return_[i] > -1.0) || !std::isfinite(market_return_[i]))
            throw DataError("market return must be finite and > -1 on " + date(i).to_string());
        if (!is_trading_day_[i] && market_return_[i] != 0.0)
            throw DataError("non-trading day with nonzero return on " + date(i).to_string());
    }
    deposit_accrual_.resize(n);
    borrow_accrual_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        deposit_accrual_[i] = per_day_accrual(deposit_rate_[i], options_);
        borrow_accrual_[i] = per_day_accrual(borrow_rate_[i], options_);
    }
}

std::size_t MarketDataset::index_of(Date d) const {
    if (d < start_ || d > end_date())
        throw DataError("date " + d.to_string() + " outside dataset calendar " +
                        start_.to_string() + ".." + end_date().to_string());
    return static_cast<std::size_t>(d - start_);
}

std::size_t MarketDataset::trading_day_count() const {
    std::size_t n = 0;
    for (auto f : is_trading_day_) n += f != 0;
    return n;
}

MarketDataset build_dataset(const RawSeries& price, const RawSeries& deposit,
                            const RawSeries& borrow, Date start, Date end,
                            DatasetOptions options) {
    if (end < start) throw DataError("dataset range end precedes start");
    if (price.present_count(start, end) < 2)
        throw DataError("price series '" + price.series_id +
                        "' needs at least 2 present observations in range");

    const std::size_t n = static_cast<std::size_t>(end - start) + 1;
    std::vector<double> ret(n, 0.0);
    std::vector<std::uint8_t> trading(n, 0);

    // Most recent present price strictly before `start`, if any: lets a
    // mid-series window start on a trading day.
    std::optional<double> prev_price;
    for (const auto& o : price.observations) {
        if (o.date >= start) break;
        if (o.value) prev_price = *o.value;
    }
    if (prev_price && !(*prev_price > 0.0)) throw DataError("non-positive price before range");

    for (const auto& o : price.observations) {
        if (o.date < start || o.date > end || !o.value) continue;
        const double p = *o.value;
        if (!(p > 0.0))
            throw DataError("non-positive price on " + o.date.to_string());
        const std::size_t i = static_cast<std::size_t>(o.date - start);
        if (prev_price) {
            trading[i] = 1;
            ret[i] = p / *prev_price - 1.0;
        }
        prev_price = p;
    }

    auto fill_rates = [&](const RawSeries& s) {
        std::vector<double> rates(n);
        std::optional<double> current;
        std::size_t next = 0;
        // seed with the last present value before `start`
        while (next < s.observations.size() && s.observations[next].date < start) {
            if (s.observations[next].value) current = *s.observations[next].value;
            ++next;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const Date d = start + static_cast<int>(i);
            while (next < s.observations.size() && s.observations[next].date == d) {
                if (s.observations[next].value) current = *s.observations[next].value;
                ++next;
            }
            if (!current)
                throw DataError("rate series '" + s.series_id + "' has no value on or before " +
                                d.to_string());
            rates[i] = *current / 100.0;  // FRED rates are percent per year
        }
        return rates;
    };

    return MarketDataset(start, std::move(ret), fill_rates(deposit), fill_rates(borrow),
                         std::move(trading), options);
}

ExcessRunReport longest_excess_run(const MarketDataset& ds, RunSign sign) {
    ExcessRunReport report;
    int run = 0;
    Date run_start;
    auto close_run = [&](Date last) {
        if (run == 0) return;
        if (run > report.length) {
            report.length = run;
            report.occurrences.clear();
        }
        if (run == report.length) report.occurrences.push_back({run_start, last});
        run = 0;
    };

    Date last_trading;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (!ds.is_trading_day(i)) continue;
        const double excess = ds.market_return(i) - ds.deposit_accrual(i);
        const bool hit = sign == RunSign::up ? excess > 0.0 : excess < 0.0;
        if (hit) {
            if (run == 0) run_start = ds.date(i);
            ++run;
        } else {
            close_run(last_trading);
        }
        last_trading = ds.date(i);
    }
    close_run(last_trading);
    return report;
}

void write_dataset_csv(const MarketDataset& ds, std::ostream& out) {
    out << "date,is_trading_day,market_return,deposit_rate,borrow_rate\n";
    char buf[96];
    for (std::size_t i = 0; i < ds.size(); ++i) {
        // %.17g round-trips doubles exactly
        std::snprintf(buf, sizeof buf, ",%d,%.17g,%.17g,%.17g\n", ds.is_trading_day(i) ? 1 : 0,
                      ds.market_return(i), ds.deposit_rate(i), ds.borrow_rate(i));
        out << ds.date(i).to_string() << buf;
    }
}

MarketDataset parse_dataset_csv(std::string_view text, DatasetOptions options) {
    const auto lines = split_lines(text);
    std::vector<double> ret, dep, bor;
    std::vector<std::uint8_t> trading;
    std::optional<Date> start, prev;
    bool saw_header = false;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string_view line = lines[i];
        const std::size_t line_no = i + 1;
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != "date,is_trading_day,market_return,deposit_rate,borrow_rate")
                throw ParseError("unrecognized dataset header", line_no);
            saw_header = true;
            continue;
        }
        std::vector<std::string_view> cols;
        std::size_t pos = 0;
        while (true) {
            std::size_t c = line.find(',', pos);
            cols.push_back(line.substr(pos, c == std::string_view::npos ? std::string_view::npos
                                                                        : c - pos));
            if (c == std::string_view::npos) break;
            pos = c + 1;
        }
        if (cols.size() != 5) throw ParseError("expected 5 columns", line_no);
        Date d;
        try {
            d = Date::parse(cols[0]);
        } catch (const DataError& e) {
            throw ParseError(e.what(), line_no);
        }
        if (!start) start = d;
        if (prev && d - *prev != 1)
            throw ParseError("calendar days must be consecutive", line_no);
        prev = d;
        if (cols[1] != "0" && cols[1] != "1")
            throw ParseError("is_trading_day must be 0 or 1", line_no);
        trading.push_back(cols[1] == "1");
        ret.push_back(parse_number(cols[2], line_no));
        dep.push_back(parse_number(cols[3], line_no));
        bor.push_back(parse_number(cols[4], line_no));
    }
    if (!saw_header) throw ParseError("missing dataset header", 1);
    if (!start) throw DataError("dataset CSV has no rows");
    return MarketDataset(*start, std::move(ret), std::move(dep), std::move(bor),
                         std::move(trading), options);
}

}  // namespace levlab
