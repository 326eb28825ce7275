#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levlab/date.hpp"
#include "levlab/market_data.hpp"

namespace levlab {

enum class ShortFeeSource { none, deposit_rate, borrow_rate };
enum class CashRates { single_rate, split_rate };

/// Cost/rate rules for a simulated investment. Four presets cover the
/// standard ladder of realism:
///   sim1: one rate on all cash, free shorting, no costs (smooth curve)
///   sim2: sim1 plus a stock-borrow fee on short positions (kink at l=0)
///   sim3: sim2 with the fee at the borrow rate and a deposit/borrow spread
///         on cash (kink at l=1)
///   sim4: sim3 plus 0.2% transaction costs on rebalancing trades
struct RegimeConfig {
    ShortFeeSource short_fee_source = ShortFeeSource::none;
    CashRates cash_rates = CashRates::single_rate;
    double transaction_cost_rate = 0.0;  // fraction of traded asset value
    std::string label = "custom";

    /// True when the growth-vs-leverage curve can have slope breaks at
    /// l = 0 or l = 1.
    bool has_kinks() const {
        return short_fee_source != ShortFeeSource::none ||
               cash_rates == CashRates::split_rate || transaction_cost_rate > 0.0;
    }

    static RegimeConfig sim1();
    static RegimeConfig sim2();
    static RegimeConfig sim3();
    static RegimeConfig sim4();
    static RegimeConfig preset(int number);  // 1..4
};

struct BacktestResult {
    double final_equity = 1.0;
    double growth_rate = 0.0;  // ln(final_equity)/T, T = window days/365
    bool bankrupt = false;
    std::optional<Date> bankruptcy_date;
    DateRange window{};
    double leverage = 0.0;
};

/// Daily-rebalanced constant-leverage investment of unit equity over
/// `window` (both ends inclusive, inside the dataset).
///
/// Each day: mark holdings by the market return, accrue cash interest,
/// charge any short fee on the marked short value, then rebalance back to
/// holdings = l * equity, charging transaction costs on the trade. Equity
/// <= 0 at any point stops the run as bankrupt (growth -inf); there is no
/// recovery from negative equity. Rebalancing happens on every calendar
/// day, non-trading days included.
///
/// Pure function of its inputs; concurrent calls over a shared dataset are
/// safe.
BacktestResult run_backtest(const MarketDataset& ds, DateRange window, double leverage,
                            const RegimeConfig& regime);

struct LeverageGrowth {
    double leverage;
    double growth_rate;
};

/// run_backtest at each leverage, in input order.
std::vector<LeverageGrowth> growth_curve(const MarketDataset& ds, DateRange window,
                                         std::span<const double> leverages,
                                         const RegimeConfig& regime);

}  // namespace levlab
