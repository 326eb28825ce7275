// Command-line front end: ingest FRED-format daily series, run the
// constant-leverage analyses, and emit plot-ready CSV/JSON with a
// reproducibility manifest. All numeric output is fixed at 10 significant
// digits so identical inputs give byte-identical files.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "levlab/analysis.hpp"
#include "levlab/backtest.hpp"
#include "levlab/date.hpp"
#include "levlab/errors.hpp"
#include "levlab/gbm.hpp"
#include "levlab/market_data.hpp"
#include "levlab/parallel.hpp"
#include "levlab/search.hpp"
#include "levlab/table.hpp"

namespace {

using namespace levlab;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct CommonOpts {
    std::string price_path;
    std::string deposit_path;
    std::string borrow_path;  // empty: reuse the deposit series
    std::string start;
    std::string end;
    std::string regime = "sim1";
    std::string out = "-";
    std::string format = "csv";
    double divisor = 365.0;
    bool continuous_accrual = false;
    // explicit regime fields (override the preset)
    std::string short_fee;
    std::string cash_rates;
    double transaction_cost = -1.0;
};

struct SearchFlags {
    double bracket_lo = -10.0;
    double bracket_hi = 10.0;
    double tol = 1e-4;
    double bracket_max = 100.0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_data) {
    auto* price = cmd->add_option("--price", o.price_path, "price CSV (FRED format)");
    auto* dep = cmd->add_option("--deposit-rate", o.deposit_path,
                                "deposit-rate CSV, percent per year (FRED format)");
    if (needs_data) {
        price->required();
        dep->required();
    }
    cmd->add_option("--borrow-rate", o.borrow_path,
                    "borrow-rate CSV; defaults to the deposit series");
    cmd->add_option("--start", o.start, "range start YYYY-MM-DD (default: first price)");
    cmd->add_option("--end", o.end, "range end YYYY-MM-DD (default: last price)");
    cmd->add_option("--regime", o.regime, "sim1..sim4 or 1..4");
    cmd->add_option("--short-fee", o.short_fee, "none|deposit|borrow (overrides preset)");
    cmd->add_option("--cash-rates", o.cash_rates, "single|split (overrides preset)");
    cmd->add_option("--tc", o.transaction_cost, "transaction cost fraction (overrides preset)");
    cmd->add_option("--divisor", o.divisor, "day-count divisor (365 or 360)");
    cmd->add_flag("--continuous-accrual", o.continuous_accrual,
                  "use expm1(r/divisor) daily accrual");
    cmd->add_option("--out", o.out, "output path ('-' = stdout)");
    cmd->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
}

void add_search(CLI::App* cmd, SearchFlags& s) {
    cmd->add_option("--bracket-lo", s.bracket_lo, "search bracket lower end");
    cmd->add_option("--bracket-hi", s.bracket_hi, "search bracket upper end");
    cmd->add_option("--tol", s.tol, "leverage tolerance");
    cmd->add_option("--bracket-max", s.bracket_max, "expansion cap");
}

SearchOptions to_search_options(const SearchFlags& s) {
    SearchOptions o;
    o.lo = s.bracket_lo;
    o.hi = s.bracket_hi;
    o.tol = s.tol;
    o.bracket_max = s.bracket_max;
    return o;
}

RegimeConfig resolve_regime(const CommonOpts& o) {
    RegimeConfig regime;
    if (o.regime == "sim1" || o.regime == "1")
        regime = RegimeConfig::sim1();
    else if (o.regime == "sim2" || o.regime == "2")
        regime = RegimeConfig::sim2();
    else if (o.regime == "sim3" || o.regime == "3")
        regime = RegimeConfig::sim3();
    else if (o.regime == "sim4" || o.regime == "4")
        regime = RegimeConfig::sim4();
    else
        throw std::invalid_argument("unknown regime '" + o.regime + "' (want sim1..sim4)");

    bool custom = false;
    if (!o.short_fee.empty()) {
        custom = true;
        if (o.short_fee == "none")
            regime.short_fee_source = ShortFeeSource::none;
        else if (o.short_fee == "deposit")
            regime.short_fee_source = ShortFeeSource::deposit_rate;
        else if (o.short_fee == "borrow")
            regime.short_fee_source = ShortFeeSource::borrow_rate;
        else
            throw std::invalid_argument("--short-fee wants none|deposit|borrow");
    }
    if (!o.cash_rates.empty()) {
        custom = true;
        if (o.cash_rates == "single")
            regime.cash_rates = CashRates::single_rate;
        else if (o.cash_rates == "split")
            regime.cash_rates = CashRates::split_rate;
        else
            throw std::invalid_argument("--cash-rates wants single|split");
    }
    if (o.transaction_cost >= 0.0) {
        custom = true;
        regime.transaction_cost_rate = o.transaction_cost;
    }
    if (custom) regime.label = "custom";
    return regime;
}

struct LoadedData {
    MarketDataset dataset;
    DateRange window;
};

std::string checksum_of(const std::string& path) { return fnv1a_hex(read_file(path)); }

LoadedData load_data(const CommonOpts& o, Table& table) {
    const std::string borrow_path = o.borrow_path.empty() ? o.deposit_path : o.borrow_path;
    const RawSeries price = load_fred_csv(o.price_path, "price");
    const RawSeries deposit = load_fred_csv(o.deposit_path, "deposit");
    const RawSeries borrow = load_fred_csv(borrow_path, "borrow");

    std::optional<Date> first, last;
    for (const auto& obs : price.observations) {
        if (!obs.value) continue;
        if (!first) first = obs.date;
        last = obs.date;
    }
    if (!first) throw DataError("price series has no present observations");
    const Date start = o.start.empty() ? *first : Date::parse(o.start);
    const Date end = o.end.empty() ? *last : Date::parse(o.end);

    DatasetOptions opts;
    opts.day_count_divisor = o.divisor;
    opts.continuous_accrual = o.continuous_accrual;

    table.manifest("price", o.price_path);
    table.manifest("price_fnv1a", checksum_of(o.price_path));
    table.manifest("deposit_rate", o.deposit_path);
    table.manifest("deposit_rate_fnv1a", checksum_of(o.deposit_path));
    table.manifest("borrow_rate", borrow_path);
    table.manifest("borrow_rate_fnv1a", checksum_of(borrow_path));
    table.manifest("start", start.to_string());
    table.manifest("end", end.to_string());
    table.manifest("divisor", opts.day_count_divisor);
    table.manifest("accrual", o.continuous_accrual ? "continuous" : "simple");

    return {build_dataset(price, deposit, borrow, start, end, opts), {start, end}};
}

std::vector<double> parse_number_list(const std::string& spec) {
    std::vector<double> out;
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        double lo, hi, step;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0 ||
            hi < lo)
            throw std::invalid_argument("range spec wants lo:hi:step with step > 0");
        const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const auto comma = spec.find(',', pos);
        const std::string item =
            spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (...) {
            throw std::invalid_argument("bad numeric value '" + item + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty number list");
    return out;
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
    if (points < 2 || hi <= lo)
        throw std::invalid_argument("curve grid wants lo < hi and points >= 2");
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    return out;
}

std::vector<RegimeConfig> resolve_regime_list(const CommonOpts& o) {
    if (o.regime == "all")
        return {RegimeConfig::sim1(), RegimeConfig::sim2(), RegimeConfig::sim3(),
                RegimeConfig::sim4()};
    return {resolve_regime(o)};
}

void add_regimes_manifest(Table& table, const std::vector<RegimeConfig>& regimes) {
    std::string labels;
    for (const auto& r : regimes) labels += (labels.empty() ? "" : ",") + r.label;
    table.manifest("regime", labels);
}

TableFormat format_of(const CommonOpts& o) {
    return o.format == "json" ? TableFormat::json : TableFormat::csv;
}

// full-record fit used as the default envelope/prediction sigma
double fitted_sigma(const MarketDataset& ds, DateRange window, const RegimeConfig& regime,
                    const SearchOptions& search) {
    const auto opt = find_optimal_leverage(ds, window, regime, search);
    if (opt.is_diverged()) throw NumericError("cannot fit sigma: full window diverged");
    const auto grid = uniform_grid(-8.0, 3.0, 111);
    const auto curve = growth_curve(ds, window, grid, regime);
    return fit_parabola(curve, opt.l_opt, opt.growth_at_opt).sigma;
}

int cmd_sweep(const CommonOpts& common, const std::string& leverages_spec) {
    Table table({"window_start", "window_end", "regime", "leverage", "final_equity",
                 "growth_rate", "bankrupt", "bankruptcy_date"});
    table.manifest("command", "sweep");
    const auto data = load_data(common, table);
    const auto regimes = resolve_regime_list(common);
    add_regimes_manifest(table, regimes);
    const auto leverages = parse_number_list(leverages_spec);
    table.manifest("leverages", leverages_spec);

    for (const auto& regime : regimes) {
        std::vector<BacktestResult> results(leverages.size());
        parallel_for(leverages.size(), [&](std::size_t i) {
            results[i] = run_backtest(data.dataset, data.window, leverages[i], regime);
        });
        for (const auto& res : results) {
            table.begin_row()
                .text(res.window.start.to_string())
                .text(res.window.end.to_string())
                .text(regime.label)
                .num(res.leverage)
                .num(res.final_equity)
                .num(res.growth_rate)
                .integer(res.bankrupt ? 1 : 0)
                .text(res.bankruptcy_date ? res.bankruptcy_date->to_string() : "");
        }
    }
    table.write_file(common.out, format_of(common));
    return 0;
}

void append_opt_row(Table& table, const OptimalLeverageEstimate& est) {
    table.begin_row()
        .text(est.regime)
        .text(est.window.start.to_string())
        .text(est.window.end.to_string())
        .num(est.l_opt)
        .num(est.growth_at_opt)
        .integer(static_cast<int>(est.diverged))
        .integer(static_cast<long long>(est.evaluations));
}

int cmd_opt(const CommonOpts& common, const SearchFlags& search) {
    Table table({"regime", "window_start", "window_end", "l_opt", "growth_at_opt", "diverged",
                 "evaluations"});
    table.manifest("command", "opt");
    const auto data = load_data(common, table);
    const auto regimes = resolve_regime_list(common);
    add_regimes_manifest(table, regimes);
    for (const auto& regime : regimes)
        append_opt_row(table, find_optimal_leverage(data.dataset, data.window, regime,
                                                    to_search_options(search)));
    table.write_file(common.out, format_of(common));
    return 0;
}

int cmd_fit(const CommonOpts& common, const SearchFlags& search, double curve_lo, double curve_hi,
            int curve_points, double fit_lo, double fit_hi) {
    Table table({"regime", "window_start", "window_end", "l_opt", "growth_at_opt", "mu_riskless",
                 "mu_excess", "sigma", "residual_rms", "fit_lo", "fit_hi", "points_used"});
    table.manifest("command", "fit");
    const auto data = load_data(common, table);
    const auto regime = resolve_regime(common);
    table.manifest("regime", regime.label);
    table.manifest("curve", format_number(curve_lo) + ":" + format_number(curve_hi) + ":" +
                                std::to_string(curve_points));

    const auto opt =
        find_optimal_leverage(data.dataset, data.window, regime, to_search_options(search));
    if (opt.is_diverged()) throw NumericError("window diverged; no finite optimum to fit around");
    const auto grid = uniform_grid(curve_lo, curve_hi, curve_points);
    std::vector<LeverageGrowth> curve(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        curve[i] = {grid[i], run_backtest(data.dataset, data.window, grid[i], regime).growth_rate};
    });
    const auto fit = fit_parabola(curve, opt.l_opt, opt.growth_at_opt, fit_lo, fit_hi);

    table.begin_row()
        .text(regime.label)
        .text(data.window.start.to_string())
        .text(data.window.end.to_string())
        .num(opt.l_opt)
        .num(opt.growth_at_opt)
        .num(fit.mu_riskless)
        .num(fit.mu_excess)
        .num(fit.sigma)
        .num(fit.residual_rms)
        .num(fit.fit_lo)
        .num(fit.fit_hi)
        .integer(static_cast<long long>(fit.points_used));
    table.write_file(common.out, format_of(common));
    return 0;
}

int cmd_rolling(const CommonOpts& common, const SearchFlags& search,
                const std::string& window_years_spec, int stride) {
    Table table({"regime", "window_years", "end_date", "l_opt", "growth_at_opt", "diverged"});
    table.manifest("command", "rolling");
    const auto data = load_data(common, table);
    const auto regime = resolve_regime(common);
    table.manifest("regime", regime.label);
    table.manifest("window_years", window_years_spec);
    table.manifest("stride", static_cast<double>(stride));

    for (double years : parse_number_list(window_years_spec)) {
        const auto series =
            rolling_lopt(data.dataset, years, regime, stride, to_search_options(search));
        for (const auto& pt : series.points) {
            table.begin_row()
                .text(regime.label)
                .num(years)
                .text(pt.end.to_string())
                .num(pt.l_opt)
                .num(pt.growth)
                .integer(static_cast<int>(pt.diverged));
        }
    }
    table.write_file(common.out, format_of(common));
    return 0;
}

int cmd_expanding(const CommonOpts& common, const SearchFlags& search, int stride, double sigma) {
    Table table({"regime", "start_date", "end_date", "t_years", "l_opt", "growth_at_opt",
                 "diverged", "env1_lo", "env1_hi", "env2_lo", "env2_hi"});
    table.manifest("command", "expanding");
    const auto data = load_data(common, table);
    const auto regime = resolve_regime(common);
    table.manifest("regime", regime.label);
    table.manifest("stride", static_cast<double>(stride));

    const double env_sigma =
        sigma > 0.0 ? sigma
                    : fitted_sigma(data.dataset, data.window, regime, to_search_options(search));
    table.manifest("sigma", env_sigma);

    const auto series =
        expanding_lopt(data.dataset, data.window.start, regime, stride, to_search_options(search));
    for (const auto& pt : series.points) {
        const auto band = envelope(env_sigma, pt.t_years);
        table.begin_row()
            .text(regime.label)
            .text(data.window.start.to_string())
            .text(pt.end.to_string())
            .num(pt.t_years)
            .num(pt.l_opt)
            .num(pt.growth)
            .integer(static_cast<int>(pt.diverged))
            .num(band.one_lo)
            .num(band.one_hi)
            .num(band.two_lo)
            .num(band.two_hi);
    }
    table.write_file(common.out, format_of(common));
    return 0;
}

int cmd_scaling(const CommonOpts& common, const SearchFlags& search,
                const std::string& window_years_spec, int stride, double sigma) {
    Table table({"regime", "window_years", "samples", "diverged_count", "capped_count", "stdev",
                 "prediction"});
    table.manifest("command", "scaling");
    const auto data = load_data(common, table);
    const auto regime = resolve_regime(common);
    table.manifest("regime", regime.label);
    table.manifest("window_years", window_years_spec);
    table.manifest("stride", static_cast<double>(stride));

    const auto lengths = parse_number_list(window_years_spec);
    if (lengths.size() < 2) throw std::invalid_argument("scaling needs >= 2 window lengths");
    const double pred_sigma =
        sigma > 0.0 ? sigma
                    : fitted_sigma(data.dataset, data.window, regime, to_search_options(search));
    table.manifest("sigma", pred_sigma);

    const auto rows =
        stdev_scaling(data.dataset, lengths, regime, stride, pred_sigma, to_search_options(search));
    for (const auto& pt : rows) {
        table.begin_row()
            .text(regime.label)
            .num(pt.window_years)
            .integer(static_cast<long long>(pt.samples))
            .integer(static_cast<long long>(pt.diverged_count))
            .integer(static_cast<long long>(pt.capped_count))
            .num(pt.stdev)
            .num(pt.prediction);
    }
    table.write_file(common.out, format_of(common));
    return 0;
}

int cmd_runs(const CommonOpts& common) {
    Table table({"direction", "length_trading_days", "occurrence_start", "occurrence_end"});
    table.manifest("command", "runs");
    const auto data = load_data(common, table);
    for (auto sign : {RunSign::up, RunSign::down}) {
        const auto report = longest_excess_run(data.dataset, sign);
        for (const auto& occ : report.occurrences) {
            table.begin_row()
                .text(sign == RunSign::up ? "up" : "down")
                .integer(report.length)
                .text(occ.first.to_string())
                .text(occ.last.to_string());
        }
    }
    table.write_file(common.out, format_of(common));
    return 0;
}

struct GbmFlags {
    double mu_riskless = 0.05;
    double mu_excess = 0.02;
    double sigma = 0.16;
    double leverage = 1.0;
    double years = 10.0;
    double dt_days = 1.0;
    std::size_t paths = 1;
    std::uint64_t seed = 1;
    std::string emit = "paths";
    std::string start = "1955-08-04";
};

int cmd_gbm(const CommonOpts& common, const GbmFlags& g) {
    const GbmParams params{g.mu_riskless, g.mu_excess, g.sigma};
    const double dt = g.dt_days / 365.0;

    if (g.emit == "paths") {
        Table table({"path", "final_value", "log_growth", "bankrupt"});
        table.manifest("command", "gbm");
        table.manifest("emit", g.emit);
        table.manifest("mu_riskless", params.mu_riskless);
        table.manifest("mu_excess", params.mu_excess);
        table.manifest("sigma", params.sigma);
        table.manifest("leverage", g.leverage);
        table.manifest("years", g.years);
        table.manifest("dt_days", g.dt_days);
        table.manifest("paths", static_cast<double>(g.paths));
        table.manifest("seed", std::to_string(g.seed));
        const auto paths = simulate_paths(params, g.leverage, g.years, dt, g.paths, g.seed);
        for (std::size_t i = 0; i < paths.size(); ++i) {
            const double x = paths[i].values.back();
            const double t = static_cast<double>(paths[i].values.size() - 1) * dt;
            table.begin_row()
                .integer(static_cast<long long>(i))
                .num(x)
                .num(paths[i].bankrupt ? -std::numeric_limits<double>::infinity()
                                       : std::log(x) / t)
                .integer(paths[i].bankrupt ? 1 : 0);
        }
        table.write_file(common.out, format_of(common));
        return 0;
    }

    const auto n_days = static_cast<std::size_t>(std::llround(g.years * 365.0));
    DatasetOptions opts;
    opts.day_count_divisor = common.divisor;
    opts.continuous_accrual = common.continuous_accrual;
    const auto ds = make_gbm_dataset(params, Date::parse(g.start), n_days, g.seed, opts);

    if (g.emit == "dataset") {
        std::ostringstream body;
        body << "# command=gbm emit=dataset mu_riskless=" << format_number(params.mu_riskless)
             << " mu_excess=" << format_number(params.mu_excess)
             << " sigma=" << format_number(params.sigma) << " years=" << format_number(g.years)
             << " seed=" << g.seed << "\n";
        write_dataset_csv(ds, body);
        if (common.out == "-" || common.out.empty()) {
            std::cout << body.str();
        } else {
            std::ofstream f(common.out, std::ios::binary);
            if (!f) throw DataError("cannot write file: " + common.out);
            f << body.str();
        }
        return 0;
    }

    if (g.emit == "fred") {
        if (common.out == "-" || common.out.empty())
            throw std::invalid_argument("--emit fred needs --out as a file prefix");
        // the price walks the dataset returns from 100, seeded one day early
        // so every dataset day keeps its return on re-ingestion
        std::ofstream price(common.out + "_price.csv", std::ios::binary);
        std::ofstream dep(common.out + "_deposit.csv", std::ios::binary);
        std::ofstream bor(common.out + "_borrow.csv", std::ios::binary);
        if (!price || !dep || !bor)
            throw DataError("cannot write files with prefix: " + common.out);
        price << "DATE,VALUE\n";
        char buf[48];
        double level = 100.0;
        price << (ds.start_date() - 1).to_string() << ",100\n";
        for (std::size_t i = 0; i < ds.size(); ++i) {
            level *= 1.0 + ds.market_return(i);
            std::snprintf(buf, sizeof buf, ",%.17g\n", level);
            price << ds.date(i).to_string() << buf;
        }
        dep << "DATE,VALUE\n";
        bor << "DATE,VALUE\n";
        std::snprintf(buf, sizeof buf, ",%.17g\n", params.mu_riskless * 100.0);
        dep << (ds.start_date() - 1).to_string() << buf;
        bor << (ds.start_date() - 1).to_string() << buf;
        std::cout << "# wrote " << common.out << "_{price,deposit,borrow}.csv seed=" << g.seed
                  << "\n";
        return 0;
    }

    throw std::invalid_argument("--emit wants paths|dataset|fred");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constant-leverage backtests and optimal-leverage analyses on daily data"};
    app.require_subcommand(1);

    auto* sweep = app.add_subcommand("sweep", "growth and return vs leverage");
    CommonOpts sweep_common;
    sweep_common.regime = "all";
    std::string leverages = "-8:3:0.1";
    add_common(sweep, sweep_common, true);
    sweep->add_option("--leverages", leverages, "lo:hi:step or comma list");

    auto* opt = app.add_subcommand("opt", "optimal leverage for a window");
    CommonOpts opt_common;
    SearchFlags opt_search;
    add_common(opt, opt_common, true);
    add_search(opt, opt_search);

    auto* fit = app.add_subcommand("fit", "parabola fit of the growth curve");
    CommonOpts fit_common;
    SearchFlags fit_search;
    double curve_lo = -8.0, curve_hi = 3.0, fit_range_lo = -7.0, fit_range_hi = 3.0;
    int curve_points = 111;
    add_common(fit, fit_common, true);
    add_search(fit, fit_search);
    fit->add_option("--curve-lo", curve_lo, "curve grid lower end");
    fit->add_option("--curve-hi", curve_hi, "curve grid upper end");
    fit->add_option("--curve-points", curve_points, "curve grid size");
    fit->add_option("--fit-lo", fit_range_lo, "fit range lower end");
    fit->add_option("--fit-hi", fit_range_hi, "fit range upper end");

    auto* rolling = app.add_subcommand("rolling", "optimal leverage over trailing windows");
    CommonOpts rolling_common;
    SearchFlags rolling_search;
    std::string window_years = "5,10,20,40";
    int rolling_stride = 1;
    add_common(rolling, rolling_common, true);
    add_search(rolling, rolling_search);
    rolling->add_option("--window-years", window_years, "comma list of window lengths");
    rolling->add_option("--stride", rolling_stride, "stride in trading days");

    auto* expanding = app.add_subcommand("expanding", "optimal leverage over expanding windows");
    CommonOpts expanding_common;
    SearchFlags expanding_search;
    int expanding_stride = 1;
    double expanding_sigma = 0.0;
    add_common(expanding, expanding_common, true);
    add_search(expanding, expanding_search);
    expanding->add_option("--stride", expanding_stride, "stride in trading days");
    expanding->add_option("--sigma", expanding_sigma,
                          "envelope sigma (default: fitted from the full window)");

    auto* scaling = app.add_subcommand("scaling", "stdev of optimal leverage vs window length");
    CommonOpts scaling_common;
    SearchFlags scaling_search;
    std::string scaling_years = "0.25,0.5,1,2,5,10";
    int scaling_stride = 1;
    double scaling_sigma = 0.0;
    add_common(scaling, scaling_common, true);
    add_search(scaling, scaling_search);
    scaling->add_option("--window-years", scaling_years, "comma list (need >= 2)");
    scaling->add_option("--stride", scaling_stride, "stride in trading days");
    scaling->add_option("--sigma", scaling_sigma,
                        "prediction sigma (default: fitted from the full window)");

    auto* runs = app.add_subcommand("runs", "longest up/down runs vs the deposit rate");
    CommonOpts runs_common;
    add_common(runs, runs_common, true);

    auto* gbm = app.add_subcommand("gbm", "seeded synthetic model output");
    CommonOpts gbm_common;
    GbmFlags gbm_flags;
    add_common(gbm, gbm_common, false);
    gbm->add_option("--mu-riskless", gbm_flags.mu_riskless, "riskless return, 1/year");
    gbm->add_option("--mu-excess", gbm_flags.mu_excess, "excess return, 1/year");
    gbm->add_option("--sigma", gbm_flags.sigma, "volatility, 1/sqrt(year)");
    gbm->add_option("--leverage", gbm_flags.leverage, "path leverage (emit=paths)");
    gbm->add_option("--years", gbm_flags.years, "horizon in years");
    gbm->add_option("--dt-days", gbm_flags.dt_days, "step size in days");
    gbm->add_option("--paths", gbm_flags.paths, "number of paths (emit=paths)");
    gbm->add_option("--seed", gbm_flags.seed, "random seed");
    gbm->add_option("--emit", gbm_flags.emit, "paths|dataset|fred");
    gbm->add_option("--gbm-start", gbm_flags.start, "dataset start date (emit=dataset|fred)");

    try {
        app.parse(argc, argv);
        if (sweep->parsed()) return cmd_sweep(sweep_common, leverages);
        if (opt->parsed()) return cmd_opt(opt_common, opt_search);
        if (fit->parsed())
            return cmd_fit(fit_common, fit_search, curve_lo, curve_hi, curve_points, fit_range_lo,
                           fit_range_hi);
        if (rolling->parsed())
            return cmd_rolling(rolling_common, rolling_search, window_years, rolling_stride);
        if (expanding->parsed())
            return cmd_expanding(expanding_common, expanding_search, expanding_stride,
                                 expanding_sigma);
        if (scaling->parsed())
            return cmd_scaling(scaling_common, scaling_search, scaling_years, scaling_stride,
                               scaling_sigma);
        if (runs->parsed()) return cmd_runs(runs_common);
        if (gbm->parsed()) return cmd_gbm(gbm_common, gbm_flags);
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
