#pragma once

#include <cstddef>
#include <string>

#include "levlab/backtest.hpp"
#include "levlab/date.hpp"
#include "levlab/market_data.hpp"

namespace levlab {

struct SearchOptions {
    double lo = -10.0;
    double hi = 10.0;
    double tol = 1e-4;          // absolute leverage tolerance
    double bracket_max = 100.0; // brackets expand by doubling up to +/- this
    double grid_step = 0.25;    // coarse pre-scan step for kinked regimes
};

enum class Divergence : int { negative = -1, none = 0, positive = 1 };

/// Where the growth-vs-leverage objective peaks on one window.
/// diverged != none means the window's daily returns all beat (or all
/// trail) the deposit accrual, so the empirical optimum is unbounded:
/// l_opt is then the +/-inf sentinel and growth_at_opt the value at the
/// search bound.
struct OptimalLeverageEstimate {
    double l_opt = 0.0;
    double growth_at_opt = 0.0;
    Divergence diverged = Divergence::none;
    DateRange window{};
    std::string regime;
    std::size_t evaluations = 0;  // backtests performed

    bool is_diverged() const { return diverged != Divergence::none; }
};

/// Classifies a window by the signs of its trading-day excess returns
/// (return minus that day's deposit accrual, strict comparisons).
Divergence divergence_precheck(const MarketDataset& ds, DateRange window);

/// Maximizes backtest growth over leverage.
///
/// Diverged windows are detected exactly up front. Otherwise: kinked
/// regimes get a coarse grid scan to pick the golden-section bracket, and
/// l = 0 and l = 1 are always evaluated as candidates (they are the kink
/// maxima, and they anchor the flat-objective tie-break). Golden-section
/// runs to `tol`; a maximizer within tol of a bracket end re-runs on a
/// doubled bracket up to +/-bracket_max, and is flagged diverged if it
/// still sits at the bound. The returned l_opt is the best *evaluated*
/// point; growths within 1e-12/yr count as tied and break toward smaller
/// |l|, then the positive sign, so flat objectives resolve to 0 and a
/// bankrupt leverage is never returned while a surviving one was seen.
OptimalLeverageEstimate find_optimal_leverage(const MarketDataset& ds, DateRange window,
                                              const RegimeConfig& regime,
                                              const SearchOptions& options = {});

struct GridBest {
    double leverage = 0.0;
    double growth = 0.0;
    std::size_t evaluations = 0;
};

/// Exhaustive scan of [lo, hi] at `step`; independent check for the search.
/// Same tie-break as find_optimal_leverage.
GridBest grid_oracle(const MarketDataset& ds, DateRange window, const RegimeConfig& regime,
                     double lo, double hi, double step);

}  // namespace levlab
