#include "levlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levlab/errors.hpp"
#include "levlab/parallel.hpp"

namespace levlab {

namespace {

// Trading-day indices in [from, to], stepping `stride` trading days. The
// last trading day is always included so the series always reaches the
// dataset's end regardless of stride.
std::vector<std::size_t> trading_grid(const MarketDataset& ds, std::size_t from, std::size_t to,
                                      int stride) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1 trading day");
    std::vector<std::size_t> grid;
    std::size_t last_trading = 0;
    bool any = false;
    int countdown = 0;
    for (std::size_t i = from; i <= to; ++i) {
        if (!ds.is_trading_day(i)) continue;
        last_trading = i;
        any = true;
        if (countdown == 0) {
            grid.push_back(i);
            countdown = stride;
        }
        --countdown;
    }
    if (any && (grid.empty() || grid.back() != last_trading)) grid.push_back(last_trading);
    return grid;
}

WindowPoint to_point(const OptimalLeverageEstimate& est) {
    WindowPoint pt;
    pt.end = est.window.end;
    pt.t_years = static_cast<double>(est.window.days()) / 365.0;
    pt.l_opt = est.l_opt;
    pt.growth = est.growth_at_opt;
    pt.diverged = est.diverged;
    return pt;
}

}  // namespace

ParabolaFit fit_parabola(std::span<const LeverageGrowth> curve, double l_opt, double g_opt,
                         double fit_lo, double fit_hi) {
    if (!(fit_lo < fit_hi)) throw std::invalid_argument("fit range needs lo < hi");
    // least squares for a in g(l) = g_opt - a*(l - l_opt)^2:
    //   a = sum(u_i * (g_opt - g_i)) / sum(u_i^2),  u_i = (l_i - l_opt)^2
    double num = 0.0, den = 0.0;
    std::size_t used = 0;
    for (const auto& pt : curve) {
        if (pt.leverage < fit_lo || pt.leverage > fit_hi || !std::isfinite(pt.growth_rate))
            continue;
        const double u = (pt.leverage - l_opt) * (pt.leverage - l_opt);
        num += u * (g_opt - pt.growth_rate);
        den += u * u;
        ++used;
    }
    if (used < 3) throw NumericError("parabola fit needs at least 3 usable points in range");
    if (!(num > 0.0) || !(den > 0.0))
        throw NumericError("fitted curvature is not positive; data is not peak-shaped");
    const double a = num / den;

    ParabolaFit fit;
    fit.sigma = std::sqrt(2.0 * a);
    fit.mu_excess = l_opt * fit.sigma * fit.sigma;
    fit.mu_riskless = g_opt - fit.mu_excess * fit.mu_excess / (2.0 * fit.sigma * fit.sigma);
    fit.fit_lo = fit_lo;
    fit.fit_hi = fit_hi;
    fit.points_used = used;

    double ss = 0.0;
    for (const auto& pt : curve) {
        if (pt.leverage < fit_lo || pt.leverage > fit_hi || !std::isfinite(pt.growth_rate))
            continue;
        const double r = pt.growth_rate - (g_opt - a * (pt.leverage - l_opt) * (pt.leverage - l_opt));
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(used));
    return fit;
}

WindowSeries rolling_lopt(const MarketDataset& ds, double window_years,
                          const RegimeConfig& regime, int stride_trading_days,
                          const SearchOptions& options) {
    const int window_days = static_cast<int>(std::lround(window_years * 365.0));
    if (window_days < 1 || static_cast<std::size_t>(window_days) > ds.size())
        throw std::invalid_argument("window length must fit inside the dataset");

    WindowSeries series;
    series.window_label = std::to_string(window_years) + "y";
    series.regime = regime.label;

    const auto ends =
        trading_grid(ds, static_cast<std::size_t>(window_days) - 1, ds.size() - 1,
                     stride_trading_days);
    series.points.resize(ends.size());
    parallel_for(ends.size(), [&](std::size_t k) {
        const Date end = ds.date(ends[k]);
        const DateRange window{end - (window_days - 1), end};
        series.points[k] = to_point(find_optimal_leverage(ds, window, regime, options));
    });
    return series;
}

WindowSeries expanding_lopt(const MarketDataset& ds, Date start, const RegimeConfig& regime,
                            int stride_trading_days, const SearchOptions& options) {
    const std::size_t start_idx = ds.index_of(start);

    WindowSeries series;
    series.window_label = "expanding";
    series.regime = regime.label;

    // first end is the first trading day after the start day
    if (start_idx + 1 >= ds.size())
        throw std::invalid_argument("expanding series needs at least one day after start");
    const auto ends = trading_grid(ds, start_idx + 1, ds.size() - 1, stride_trading_days);
    series.points.resize(ends.size());
    parallel_for(ends.size(), [&](std::size_t k) {
        const DateRange window{start, ds.date(ends[k])};
        series.points[k] = to_point(find_optimal_leverage(ds, window, regime, options));
    });
    return series;
}

EnvelopeBand envelope(double sigma, double t_years, double center) {
    if (!(sigma > 0.0) || !(t_years > 0.0))
        throw std::invalid_argument("envelope needs sigma > 0 and T > 0");
    const double sd = 1.0 / (sigma * std::sqrt(t_years));
    return {center - sd, center + sd, center - 2.0 * sd, center + 2.0 * sd};
}

std::vector<ScalingPoint> stdev_scaling(const MarketDataset& ds,
                                        std::span<const double> window_years_list,
                                        const RegimeConfig& regime, int stride_trading_days,
                                        double sigma_for_prediction,
                                        const SearchOptions& options) {
    if (window_years_list.size() < 2)
        throw std::invalid_argument("need at least 2 window lengths");

    std::vector<ScalingPoint> table;
    table.reserve(window_years_list.size());
    for (double years : window_years_list) {
        const WindowSeries series = rolling_lopt(ds, years, regime, stride_trading_days, options);
        const int window_days = static_cast<int>(std::lround(years * 365.0));
        ScalingPoint pt;
        pt.window_years = years;
        double sum = 0.0, sum2 = 0.0;
        for (const auto& wp : series.points) {
            if (wp.diverged != Divergence::none) {
                // a monotone window (sign pre-check) vs. a maximizer pinned
                // at the expanded bracket cap; both lack a finite l_opt
                const DateRange w{wp.end - (window_days - 1), wp.end};
                if (divergence_precheck(ds, w) != Divergence::none)
                    ++pt.diverged_count;
                else
                    ++pt.capped_count;
                continue;
            }
            sum += wp.l_opt;
            sum2 += wp.l_opt * wp.l_opt;
            ++pt.samples;
        }
        if (pt.samples >= 2) {
            const double n = static_cast<double>(pt.samples);
            const double var = (sum2 - sum * sum / n) / (n - 1.0);
            pt.stdev = var > 0.0 ? std::sqrt(var) : 0.0;
        }
        if (sigma_for_prediction > 0.0 && years > 0.0)
            pt.prediction = 1.0 / (sigma_for_prediction * std::sqrt(years));
        table.push_back(pt);
    }
    return table;
}

}  // namespace levlab
