#include "levlab/gbm.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "levlab/errors.hpp"
#include "levlab/parallel.hpp"
#include "levlab/rng.hpp"

namespace levlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t step_count(double t_years, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(t_years >= dt)) throw std::invalid_argument("T must be at least dt");
    return static_cast<std::size_t>(std::llround(t_years / dt));
}

struct PathEnd {
    double final_value = 1.0;
    bool bankrupt = false;
};

// One path's terminal state; identical arithmetic to the materializing walk.
PathEnd walk_path(double drift_dt, double vol_sqdt, std::size_t steps, std::uint64_t seed,
                  std::uint64_t stream, std::vector<double>* record) {
    std::mt19937_64 rng = make_stream(seed, stream);
    std::normal_distribution<double> normal(0.0, 1.0);
    double x = 1.0;
    if (record) record->push_back(x);
    for (std::size_t s = 0; s < steps; ++s) {
        x *= 1.0 + drift_dt + vol_sqdt * normal(rng);
        if (record) record->push_back(x);
        if (x <= 0.0) return {x, true};
    }
    return {x, false};
}

}  // namespace

double ensemble_growth(const GbmParams& p, double leverage) {
    return p.mu_riskless + leverage * p.mu_excess;
}

double time_growth(const GbmParams& p, double leverage) {
    const double lv = leverage * p.sigma;
    return p.mu_riskless + leverage * p.mu_excess - 0.5 * lv * lv;
}

double optimal_leverage(const GbmParams& p) {
    if (!(p.sigma > 0.0))
        throw NumericError("optimal leverage undefined at zero volatility");
    return p.mu_excess / (p.sigma * p.sigma);
}

double lopt_stdev(const GbmParams& p, double t_years) {
    if (!(p.sigma > 0.0) || !(t_years > 0.0))
        throw std::invalid_argument("lopt_stdev needs sigma > 0 and T > 0");
    return 1.0 / (p.sigma * std::sqrt(t_years));
}

std::vector<GbmPath> simulate_paths(const GbmParams& p, double leverage, double t_years,
                                    double dt, std::size_t n_paths, std::uint64_t seed) {
    const std::size_t steps = step_count(t_years, dt);
    if (n_paths == 0) throw std::invalid_argument("need at least one path");
    const double drift_dt = ensemble_growth(p, leverage) * dt;
    const double vol_sqdt = leverage * p.sigma * std::sqrt(dt);

    std::vector<GbmPath> paths(n_paths);
    parallel_for(n_paths, [&](std::size_t i) {
        GbmPath& path = paths[i];
        path.dt = dt;
        path.leverage = leverage;
        path.values.reserve(steps + 1);
        const PathEnd end = walk_path(drift_dt, vol_sqdt, steps, seed, i, &path.values);
        path.bankrupt = end.bankrupt;
    });
    return paths;
}

double estimate_growth(std::span<const GbmPath> paths, GrowthMode mode, EstimatorForm form) {
    if (paths.empty()) throw std::invalid_argument("no paths to estimate from");
    const double dt = paths.front().dt;
    std::size_t len = 0;  // shared horizon; bankrupt paths are shorter
    for (const auto& path : paths) {
        if (path.dt != dt) throw std::invalid_argument("paths must share dt");
        if (path.values.empty() || !(path.values.front() > 0.0))
            throw std::invalid_argument("paths must start at a positive value");
        if (!path.bankrupt) {
            if (len != 0 && path.values.size() != len)
                throw std::invalid_argument("paths must share horizon");
            len = path.values.size();
        }
    }

    if (mode == GrowthMode::ensemble_like) {
        if (len == 0) throw NumericError("all paths bankrupt; ensemble average undefined");
        const double t_years = static_cast<double>(len - 1) * dt;
        if (!(t_years > 0.0)) throw std::invalid_argument("paths must cover at least one step");
        double sum = 0.0;
        for (const auto& path : paths) {
            if (path.bankrupt) continue;  // equity gone: factor 0
            const double factor = path.values.back() / path.values.front();
            sum += form == EstimatorForm::net_change ? factor - 1.0 : factor;
        }
        const double mean = sum / static_cast<double>(paths.size());
        return std::log(mean) / t_years;  // -inf/nan propagates if mean <= 0
    }

    if (len == 0) return kNegInf;
    const double t_years = static_cast<double>(len - 1) * dt;
    if (!(t_years > 0.0)) throw std::invalid_argument("paths must cover at least one step");
    double sum = 0.0;
    for (const auto& path : paths) {
        if (path.bankrupt) return kNegInf;
        sum += std::log(path.values.back() / path.values.front()) / t_years;
    }
    return sum / static_cast<double>(paths.size());
}

double estimate_growth_mc(const GbmParams& p, double leverage, double t_years, double dt,
                          std::size_t n_paths, std::uint64_t seed, GrowthMode mode,
                          EstimatorForm form) {
    const std::size_t steps = step_count(t_years, dt);
    if (n_paths == 0) throw std::invalid_argument("need at least one path");
    const double drift_dt = ensemble_growth(p, leverage) * dt;
    const double vol_sqdt = leverage * p.sigma * std::sqrt(dt);
    const double horizon = static_cast<double>(steps) * dt;

    std::vector<PathEnd> ends(n_paths);
    parallel_for(n_paths, [&](std::size_t i) {
        ends[i] = walk_path(drift_dt, vol_sqdt, steps, seed, i, nullptr);
    });

    if (mode == GrowthMode::ensemble_like) {
        double sum = 0.0;
        std::size_t alive = 0;
        for (const auto& e : ends) {
            if (e.bankrupt) continue;
            sum += form == EstimatorForm::net_change ? e.final_value - 1.0 : e.final_value;
            ++alive;
        }
        if (alive == 0) throw NumericError("all paths bankrupt; ensemble average undefined");
        return std::log(sum / static_cast<double>(n_paths)) / horizon;
    }

    double sum = 0.0;
    for (const auto& e : ends) {
        if (e.bankrupt) return kNegInf;
        sum += std::log(e.final_value) / horizon;
    }
    return sum / static_cast<double>(n_paths);
}

std::vector<double> finite_window_lopt_samples(const GbmParams& p, double t_years,
                                               std::size_t n, std::uint64_t seed) {
    const double mean = optimal_leverage(p);
    const double sd = lopt_stdev(p, t_years);
    std::vector<double> samples(n);
    parallel_for(n, [&](std::size_t i) {
        std::mt19937_64 rng = make_stream(seed, i);
        std::normal_distribution<double> normal(mean, sd);
        samples[i] = normal(rng);
    });
    return samples;
}

MarketDataset make_gbm_dataset(const GbmParams& p, Date start, std::size_t n_days,
                               std::uint64_t seed, DatasetOptions options) {
    if (n_days < 2) throw std::invalid_argument("synthetic dataset needs at least 2 days");
    const double dt = 1.0 / options.day_count_divisor;
    const double drift_dt = p.mu() * dt;
    const double vol_sqdt = p.sigma * std::sqrt(dt);

    std::mt19937_64 rng = make_stream(seed, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> ret(n_days);
    for (auto& r : ret) {
        r = drift_dt + vol_sqdt * normal(rng);
        if (r <= -1.0) throw NumericError("synthetic return wiped out the index");
    }
    std::vector<double> dep(n_days, p.mu_riskless);
    return MarketDataset(start, std::move(ret), dep, dep,
                         std::vector<std::uint8_t>(n_days, 1), options);
}

}  // namespace levlab
