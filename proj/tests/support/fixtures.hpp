#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levlab/date.hpp"
#include "levlab/market_data.hpp"

namespace levlab::testing {

inline Date day(int y, int m, int d) { return Date::from_ymd(y, m, d); }

/// All-trading-day dataset from explicit returns, flat annualized rates
/// given as fractions per year.
inline MarketDataset dataset_from_returns(Date start, std::vector<double> returns,
                                          double deposit_rate, double borrow_rate,
                                          DatasetOptions options = {}) {
    const std::size_t n = returns.size();
    return MarketDataset(start, std::move(returns), std::vector<double>(n, deposit_rate),
                         std::vector<double>(n, borrow_rate),
                         std::vector<std::uint8_t>(n, 1), options);
}

/// Returns alternating +step/-step around the deposit accrual, so no run of
/// excess returns is longer than one day and nothing diverges.
inline MarketDataset alternating_dataset(Date start, std::size_t n_days, double step,
                                         double rate = 0.05) {
    std::vector<double> returns(n_days);
    const double accrual = rate / 365.0;
    for (std::size_t i = 0; i < n_days; ++i)
        returns[i] = accrual + (i % 2 == 0 ? step : -step);
    return dataset_from_returns(start, std::move(returns), rate, rate);
}

}  // namespace levlab::testing
