#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "levlab/backtest.hpp"
#include "levlab/date.hpp"
#include "levlab/market_data.hpp"
#include "levlab/search.hpp"

namespace levlab {

/// Model parameters recovered from a growth-vs-leverage curve. The fitted
/// parabola g(l) = mu_riskless + mu_excess*l - (sigma*l)^2/2 peaks at
/// mu_excess/sigma^2 by construction.
struct ParabolaFit {
    double mu_riskless = 0.0;
    double mu_excess = 0.0;
    double sigma = 0.0;
    double fit_lo = 0.0;
    double fit_hi = 0.0;
    double residual_rms = 0.0;
    std::size_t points_used = 0;
};

/// One-parameter least-squares fit of g(l) = g_opt - (sigma^2/2)(l - l_opt)^2
/// with the maximum pinned at (l_opt, g_opt), over curve points with
/// l in [fit_lo, fit_hi] and finite growth (bankrupt points are skipped).
/// Recovers sigma, then mu_excess = l_opt*sigma^2 and
/// mu_riskless = g_opt - mu_excess^2/(2 sigma^2).
/// Throws NumericError with fewer than 3 usable points or a non-positive
/// fitted curvature.
ParabolaFit fit_parabola(std::span<const LeverageGrowth> curve, double l_opt, double g_opt,
                         double fit_lo = -7.0, double fit_hi = 3.0);

struct WindowPoint {
    Date end;
    double t_years = 0.0;
    double l_opt = 0.0;  // +/-inf when diverged
    double growth = 0.0;
    Divergence diverged = Divergence::none;
};

struct WindowSeries {
    std::string window_label;  // "5y", "expanding", ...
    std::string regime;
    std::vector<WindowPoint> points;  // strictly increasing end dates
};

/// Optimal leverage over trailing windows of fixed length. End dates walk
/// the dataset's trading days with the given stride (in trading days);
/// window length in calendar days is round(365*years). Windows run
/// concurrently; output order is by end date.
WindowSeries rolling_lopt(const MarketDataset& ds, double window_years,
                          const RegimeConfig& regime, int stride_trading_days = 1,
                          const SearchOptions& options = {});

/// Optimal leverage over [start, end] for expanding end dates on the same
/// trading-day stride grid. The final point reproduces the full-window
/// search exactly.
WindowSeries expanding_lopt(const MarketDataset& ds, Date start, const RegimeConfig& regime,
                            int stride_trading_days = 1, const SearchOptions& options = {});

/// Fluctuation band center +/- k/(sigma*sqrt(T)) for k = 1, 2.
struct EnvelopeBand {
    double one_lo, one_hi, two_lo, two_hi;
};
EnvelopeBand envelope(double sigma, double t_years, double center = 1.0);

struct ScalingPoint {
    double window_years = 0.0;
    std::size_t samples = 0;         // finite l_opt values entering the stdev
    std::size_t diverged_count = 0;  // windows excluded by the sign pre-check
    std::size_t capped_count = 0;    // maximizer pinned at the bracket cap
    double stdev = 0.0;              // sample stdev of finite l_opt
    double prediction = 0.0;         // 1/(sigma*sqrt(T)) at the supplied sigma
};

/// Sample standard deviation of l_opt across all stride-offset windows of
/// each length, diverged windows excluded and counted. Overlapping windows
/// are used, so neighboring samples are correlated; the resulting bias is
/// accepted and shows up as a depressed stdev near the record length.
std::vector<ScalingPoint> stdev_scaling(const MarketDataset& ds,
                                        std::span<const double> window_years_list,
                                        const RegimeConfig& regime, int stride_trading_days,
                                        double sigma_for_prediction,
                                        const SearchOptions& options = {});

}  // namespace levlab
