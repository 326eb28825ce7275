#include "levlab/backtest.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "levlab/errors.hpp"

namespace levlab {

RegimeConfig RegimeConfig::sim1() {
    return {ShortFeeSource::none, CashRates::single_rate, 0.0, "sim1"};
}
RegimeConfig RegimeConfig::sim2() {
    return {ShortFeeSource::deposit_rate, CashRates::single_rate, 0.0, "sim2"};
}
RegimeConfig RegimeConfig::sim3() {
    return {ShortFeeSource::borrow_rate, CashRates::split_rate, 0.0, "sim3"};
}
RegimeConfig RegimeConfig::sim4() {
    auto r = sim3();
    r.transaction_cost_rate = 0.002;
    r.label = "sim4";
    return r;
}

RegimeConfig RegimeConfig::preset(int number) {
    switch (number) {
        case 1: return sim1();
        case 2: return sim2();
        case 3: return sim3();
        case 4: return sim4();
    }
    throw std::invalid_argument("regime preset must be 1..4");
}

BacktestResult run_backtest(const MarketDataset& ds, DateRange window, double leverage,
                            const RegimeConfig& regime) {
    if (!std::isfinite(leverage)) throw std::invalid_argument("leverage must be finite");
    if (window.end < window.start) throw DataError("window end precedes start");
    if (regime.transaction_cost_rate < 0.0)
        throw std::invalid_argument("transaction cost rate must be >= 0");
    const std::size_t first = ds.index_of(window.start);
    const std::size_t last = ds.index_of(window.end);

    BacktestResult result;
    result.window = window;
    result.leverage = leverage;

    const double l = leverage;
    const bool split = regime.cash_rates == CashRates::split_rate;
    const bool fee_on_deposit = regime.short_fee_source == ShortFeeSource::deposit_rate;
    const bool any_fee = regime.short_fee_source != ShortFeeSource::none;
    const double tc = regime.transaction_cost_rate;

    double equity = 1.0;
    double holdings = l;
    double cash = 1.0 - l;
    bool bankrupt = false;
    Date bankrupt_on;

    for (std::size_t i = first; i <= last; ++i) {
        holdings *= 1.0 + ds.market_return(i);
        if (split)
            cash *= 1.0 + (cash >= 0.0 ? ds.deposit_accrual(i) : ds.borrow_accrual(i));
        else
            cash *= 1.0 + ds.deposit_accrual(i);
        double fee = 0.0;
        if (any_fee && holdings < 0.0)
            fee = -holdings * (fee_on_deposit ? ds.deposit_accrual(i) : ds.borrow_accrual(i));
        equity = holdings + cash - fee;
        if (equity <= 0.0) {
            bankrupt = true;
            bankrupt_on = ds.date(i);
            break;
        }
        const double trade = l * equity - holdings;
        equity -= tc * std::abs(trade);
        if (equity <= 0.0) {  // costs can wipe out equity too
            bankrupt = true;
            bankrupt_on = ds.date(i);
            break;
        }
        holdings = l * equity;
        cash = (1.0 - l) * equity;
    }

    const double t_years = static_cast<double>(window.days()) / 365.0;
    result.final_equity = equity;
    result.bankrupt = bankrupt;
    if (bankrupt) {
        result.bankruptcy_date = bankrupt_on;
        result.growth_rate = -std::numeric_limits<double>::infinity();
    } else {
        result.growth_rate = std::log(equity) / t_years;
    }
    return result;
}

std::vector<LeverageGrowth> growth_curve(const MarketDataset& ds, DateRange window,
                                         std::span<const double> leverages,
                                         const RegimeConfig& regime) {
    if (leverages.empty()) throw std::invalid_argument("need at least one leverage");
    std::vector<LeverageGrowth> curve;
    curve.reserve(leverages.size());
    for (double l : leverages)
        curve.push_back({l, run_backtest(ds, window, l, regime).growth_rate});
    return curve;
}

}  // namespace levlab
