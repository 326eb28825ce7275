#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levlab/date.hpp"
#include "levlab/market_data.hpp"

namespace levlab {

/// Parameters of the leveraged geometric-Brownian toy model. The expected
/// return splits into a riskless part and an excess part that scales with
/// leverage; sigma is the unleveraged volatility per sqrt(year).
struct GbmParams {
    double mu_riskless = 0.0;  // 1/year
    double mu_excess = 0.0;    // 1/year
    double sigma = 0.0;        // 1/sqrt(year), >= 0
    double mu() const { return mu_riskless + mu_excess; }
};

/// Ensemble-average growth rate of equity at leverage l:
/// mu_riskless + l*mu_excess. Affine in l.
double ensemble_growth(const GbmParams& p, double leverage);

/// Time-average growth rate of equity at leverage l:
/// mu_riskless + l*mu_excess - (l*sigma)^2/2. Concave in l for sigma > 0.
double time_growth(const GbmParams& p, double leverage);

/// Argmax of time_growth over l: mu_excess/sigma^2.
/// Throws NumericError when sigma == 0 (no finite optimum).
double optimal_leverage(const GbmParams& p);

/// Standard deviation of the optimal-leverage estimate from a single window
/// of length t_years: 1/(sigma*sqrt(T)).
double lopt_stdev(const GbmParams& p, double t_years);

struct GbmPath {
    double dt = 0.0;        // years per step
    double leverage = 0.0;
    std::vector<double> values;  // x at step multiples of dt, values[0] = 1
    bool bankrupt = false;  // truncated on equity <= 0
};

/// Simulates round(T/dt) daily-compounded steps
///   x <- x * (1 + (mu_riskless + l*mu_excess)*dt + l*sigma*sqrt(dt)*z)
/// per path, z standard normal. Path i draws from sub-stream i of `seed`
/// (see rng.hpp), so results are reproducible and order-independent; paths
/// run in parallel. A path whose value reaches <= 0 is cut short there and
/// flagged bankrupt.
std::vector<GbmPath> simulate_paths(const GbmParams& p, double leverage, double t_years,
                                    double dt, std::size_t n_paths, std::uint64_t seed);

enum class GrowthMode {
    ensemble_like,  // averages growth factors across paths first
    time_like,      // averages per-path log growth rates
};

// Two estimator variants, differing in what is averaged before the log:
//   growth_factor: g = ln(mean of x(T)/x(0)) / T. Its large-N limit at
//     finite T is exactly the ensemble growth rate.
//   net_change:    g = ln(mean of (x(T)-x(0))/x(0)) / T. Large-N limit is
//     ln(e^{mu T} - 1)/T, which approaches mu only as T grows; defined only
//     while the mean net change is positive. Kept for comparison.
enum class EstimatorForm { growth_factor, net_change };

/// Growth-rate estimate over simulated paths. All paths must share dt and
/// length. Bankrupt paths contribute factor 0 in ensemble_like mode (error
/// if every path is bankrupt) and -inf in time_like mode.
double estimate_growth(std::span<const GbmPath> paths, GrowthMode mode,
                       EstimatorForm form = EstimatorForm::growth_factor);

/// Same estimate as simulate_paths + estimate_growth with identical draws,
/// but streaming: nothing is materialized, so path count and length are
/// unbounded. Runs in parallel over paths.
double estimate_growth_mc(const GbmParams& p, double leverage, double t_years, double dt,
                          std::size_t n_paths, std::uint64_t seed, GrowthMode mode,
                          EstimatorForm form = EstimatorForm::growth_factor);

/// n independent draws of the finite-window optimal-leverage estimate:
/// Normal(optimal_leverage(p), lopt_stdev(p, T)).
std::vector<double> finite_window_lopt_samples(const GbmParams& p, double t_years,
                                               std::size_t n, std::uint64_t seed);

/// Synthetic daily market history driven by the model: every calendar day is
/// a trading day with return mu*dt + sigma*sqrt(dt)*z (dt = one calendar
/// day), and both rate series sit flat at mu_riskless. Useful as a
/// self-contained stand-in for historical data with known ground truth.
MarketDataset make_gbm_dataset(const GbmParams& p, Date start, std::size_t n_days,
                               std::uint64_t seed, DatasetOptions options = {});

}  // namespace levlab
