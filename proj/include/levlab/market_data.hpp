#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "levlab/date.hpp"

namespace levlab {

/// One observation of a FRED-style daily series. Missing values ('.' in the
/// file) are kept as empty optionals rather than dropped, so gap handling is
/// an explicit later step.
struct Observation {
    Date date;
    std::optional<double> value;
};

/// A raw daily series exactly as parsed: strictly increasing dates,
/// gaps preserved.
struct RawSeries {
    std::string series_id;
    std::vector<Observation> observations;

    /// Number of present (non-missing) values with date in [lo, hi].
    std::size_t present_count(Date lo, Date hi) const;
};

/// Parses a two-column FRED CSV ("DATE,VALUE" or "observation_date,<ID>"
/// header, ISO-8601 dates, '.' for missing). Throws ParseError with the
/// offending 1-based line number on malformed dates, non-numeric values, or
/// non-increasing dates.
RawSeries parse_fred_csv(std::string_view text, std::string_view series_id);

/// parse_fred_csv on a file's contents. Throws DataError if unreadable.
RawSeries load_fred_csv(const std::string& path, std::string_view series_id);

struct DatasetOptions {
    /// Annualized rates convert to per-day accrual as rate/divisor.
    double day_count_divisor = 365.0;
    /// If set, the per-day accrual is expm1(rate/divisor) instead of the
    /// simple rate/divisor.
    bool continuous_accrual = false;
};

/// Daily market data aligned onto one consecutive calendar.
///
/// Every per-day array covers every calendar day in [start, end], including
/// non-trading days (weekends, holidays, missing prices), where the market
/// return is 0 and interest still accrues. Rates are stored as fractions per
/// year; per-day accrual fractions are precomputed from DatasetOptions.
///
/// Immutable after construction; safe to share across concurrent readers.
class MarketDataset {
  public:
    /// Builds directly from aligned arrays (synthetic data, tests,
    /// deserialization). All arrays must have equal nonzero length; enforces
    /// return > -1, zero return on non-trading days.
    MarketDataset(Date start, std::vector<double> market_return, std::vector<double> deposit_rate,
                  std::vector<double> borrow_rate, std::vector<std::uint8_t> is_trading_day,
                  DatasetOptions options = {});

    std::size_t size() const { return market_return_.size(); }
    Date start_date() const { return start_; }
    Date end_date() const { return start_ + static_cast<int>(size()) - 1; }
    DateRange range() const { return {start_date(), end_date()}; }
    Date date(std::size_t i) const { return start_ + static_cast<int>(i); }

    /// Index of a calendar day; throws DataError if outside the calendar.
    std::size_t index_of(Date d) const;

    bool is_trading_day(std::size_t i) const { return is_trading_day_[i] != 0; }
    double market_return(std::size_t i) const { return market_return_[i]; }
    double deposit_rate(std::size_t i) const { return deposit_rate_[i]; }
    double borrow_rate(std::size_t i) const { return borrow_rate_[i]; }

    /// Per-day fractional accruals (rate already divided down per options).
    double deposit_accrual(std::size_t i) const { return deposit_accrual_[i]; }
    double borrow_accrual(std::size_t i) const { return borrow_accrual_[i]; }

    std::span<const double> market_returns() const { return market_return_; }
    std::span<const std::uint8_t> trading_flags() const { return is_trading_day_; }

    const DatasetOptions& options() const { return options_; }
    std::size_t trading_day_count() const;

  private:
    Date start_;
    std::vector<double> market_return_;
    std::vector<double> deposit_rate_;
    std::vector<double> borrow_rate_;
    std::vector<double> deposit_accrual_;
    std::vector<double> borrow_accrual_;
    std::vector<std::uint8_t> is_trading_day_;
    DatasetOptions options_;
};

/// Aligns raw FRED series onto the calendar [start, end].
///
/// A day is a trading day iff the price series has a present observation on
/// it and some earlier present observation exists; its return is
/// price/prev_price - 1 against the most recent earlier present price, so
/// returns compound across gaps. Non-trading days get return 0. Rate series
/// are percent per year in FRED files; they are divided by 100 here and gaps
/// are filled by carrying the last present value forward (looking before
/// `start` if needed).
///
/// Throws DataError if the price series has fewer than two present
/// observations in range, if any price is non-positive, or if a rate series
/// has no value on or before the first day.
MarketDataset build_dataset(const RawSeries& price, const RawSeries& deposit,
                            const RawSeries& borrow, Date start, Date end,
                            DatasetOptions options = {});

enum class RunSign { up, down };

struct RunRange {
    Date first;  // first trading day of the run
    Date last;   // last trading day of the run
};

struct ExcessRunReport {
    int length = 0;  // trading days
    std::vector<RunRange> occurrences;
};

/// Longest run of consecutive trading days whose market return is strictly
/// above (up) / below (down) that day's deposit accrual. Ties for the
/// maximum are all reported, in date order.
ExcessRunReport longest_excess_run(const MarketDataset& ds, RunSign sign);

/// Canonical aligned-dataset CSV: header
/// `date,is_trading_day,market_return,deposit_rate,borrow_rate`, one row per
/// calendar day, floats at full round-trip precision. Lines starting with
/// '#' are ignored by the parser.
void write_dataset_csv(const MarketDataset& ds, std::ostream& out);
MarketDataset parse_dataset_csv(std::string_view text, DatasetOptions options = {});

}  // namespace levlab
