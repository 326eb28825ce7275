#include "levlab/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levlab/errors.hpp"

namespace levlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5)-1)/2

// Growth values this close (1/year) count as tied; covers the float noise
// of a genuinely flat objective without masking real curvature.
constexpr double kTieEps = 1e-12;

// growth-then-tie-break ordering: higher growth wins; on ties prefer the
// smaller |l|, then the positive l.
bool better(double growth_a, double l_a, double growth_b, double l_b) {
    const bool tie = growth_a == growth_b || std::abs(growth_a - growth_b) <= kTieEps;
    if (!tie) return growth_a > growth_b;
    if (std::abs(l_a) != std::abs(l_b)) return std::abs(l_a) < std::abs(l_b);
    return l_a > l_b;
}

struct BestTracker {
    double leverage = 0.0;
    double growth = -kInf;
    bool seen = false;

    void offer(double l, double g) {
        if (!seen || better(g, l, growth, leverage)) {
            leverage = l;
            growth = g;
            seen = true;
        }
    }
};

}  // namespace

Divergence divergence_precheck(const MarketDataset& ds, DateRange window) {
    const std::size_t first = ds.index_of(window.start);
    const std::size_t last = ds.index_of(window.end);
    std::size_t up = 0, down = 0, flat = 0;
    for (std::size_t i = first; i <= last; ++i) {
        if (!ds.is_trading_day(i)) continue;
        const double excess = ds.market_return(i) - ds.deposit_accrual(i);
        if (excess > 0.0)
            ++up;
        else if (excess < 0.0)
            ++down;
        else
            ++flat;
    }
    if (up > 0 && down == 0 && flat == 0) return Divergence::positive;
    if (down > 0 && up == 0 && flat == 0) return Divergence::negative;
    return Divergence::none;
}

OptimalLeverageEstimate find_optimal_leverage(const MarketDataset& ds, DateRange window,
                                              const RegimeConfig& regime,
                                              const SearchOptions& options) {
    if (!(options.lo < options.hi)) throw std::invalid_argument("search bracket needs lo < hi");
    if (!(options.tol > 0.0)) throw std::invalid_argument("search tolerance must be positive");
    if (!(options.grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (options.bracket_max < std::max(std::abs(options.lo), std::abs(options.hi)))
        throw std::invalid_argument("bracket_max must cover the initial bracket");

    OptimalLeverageEstimate estimate;
    estimate.window = window;
    estimate.regime = regime.label;

    auto evaluate = [&](double l) {
        ++estimate.evaluations;
        return run_backtest(ds, window, l, regime).growth_rate;
    };

    const Divergence pre = divergence_precheck(ds, window);
    if (pre != Divergence::none) {
        const double bound = pre == Divergence::positive ? options.hi : options.lo;
        estimate.diverged = pre;
        estimate.l_opt = pre == Divergence::positive ? kInf : -kInf;
        estimate.growth_at_opt = evaluate(bound);
        return estimate;
    }

    BestTracker best;

    // kink maxima and flat-objective tie-break anchors
    for (double anchor : {0.0, 1.0})
        if (anchor >= options.lo && anchor <= options.hi) best.offer(anchor, evaluate(anchor));

    double lo = options.lo;
    double hi = options.hi;
    while (true) {
        double a = lo;
        double b = hi;
        if (regime.has_kinks()) {
            // coarse scan picks the bracket; keeps golden section off kinks
            BestTracker grid;
            const auto points = static_cast<std::size_t>(
                std::floor((hi - lo) / options.grid_step + 1e-9)) + 1;
            for (std::size_t i = 0; i < points; ++i) {
                const double l = std::min(lo + static_cast<double>(i) * options.grid_step, hi);
                grid.offer(l, evaluate(l));
            }
            best.offer(grid.leverage, grid.growth);
            a = std::max(lo, grid.leverage - options.grid_step);
            b = std::min(hi, grid.leverage + options.grid_step);
        }

        // golden-section on [a, b]
        double c = b - kInvPhi * (b - a);
        double d = a + kInvPhi * (b - a);
        double fc = evaluate(c);
        double fd = evaluate(d);
        best.offer(c, fc);
        best.offer(d, fd);
        while (b - a > options.tol) {
            if (better(fc, c, fd, d)) {
                b = d;
                d = c;
                fd = fc;
                c = b - kInvPhi * (b - a);
                fc = evaluate(c);
                best.offer(c, fc);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + kInvPhi * (b - a);
                fd = evaluate(d);
                best.offer(d, fd);
            }
        }
        const double mid = 0.5 * (a + b);
        best.offer(mid, evaluate(mid));

        const bool at_lo = best.leverage - lo <= options.tol;
        const bool at_hi = hi - best.leverage <= options.tol;
        if (!at_lo && !at_hi) break;

        // maximizer pinned to a bracket end: widen in that direction
        const double width = hi - lo;
        double new_lo = lo;
        double new_hi = hi;
        if (at_hi) new_hi = std::min(options.bracket_max, hi + width);
        if (at_lo) new_lo = std::max(-options.bracket_max, lo - width);
        if (new_lo == lo && new_hi == hi) {
            estimate.diverged = at_hi ? Divergence::positive : Divergence::negative;
            estimate.l_opt = at_hi ? kInf : -kInf;
            estimate.growth_at_opt = best.growth;
            return estimate;
        }
        lo = new_lo;
        hi = new_hi;
    }

    estimate.l_opt = best.leverage;
    estimate.growth_at_opt = best.growth;
    return estimate;
}

GridBest grid_oracle(const MarketDataset& ds, DateRange window, const RegimeConfig& regime,
                     double lo, double hi, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (!(lo < hi)) throw std::invalid_argument("grid needs lo < hi");
    GridBest out;
    BestTracker best;
    const std::size_t count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        const double l = std::min(lo + static_cast<double>(i) * step, hi);
        best.offer(l, run_backtest(ds, window, l, regime).growth_rate);
        ++out.evaluations;
    }
    out.leverage = best.leverage;
    out.growth = best.growth;
    return out;
}

}  // namespace levlab
