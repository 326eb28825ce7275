#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "levlab/backtest.hpp"
#include "levlab/errors.hpp"
#include "levlab/gbm.hpp"
#include "support/fixtures.hpp"

using namespace levlab;
using levlab::testing::dataset_from_returns;
using levlab::testing::day;

TEST_CASE("regime presets match their definitions") {
    const auto s1 = RegimeConfig::sim1();
    CHECK(s1.short_fee_source == ShortFeeSource::none);
    CHECK(s1.cash_rates == CashRates::single_rate);
    CHECK(s1.transaction_cost_rate == 0.0);
    CHECK_FALSE(s1.has_kinks());

    const auto s2 = RegimeConfig::sim2();
    CHECK(s2.short_fee_source == ShortFeeSource::deposit_rate);
    CHECK(s2.cash_rates == CashRates::single_rate);
    CHECK(s2.has_kinks());

    const auto s3 = RegimeConfig::sim3();
    CHECK(s3.short_fee_source == ShortFeeSource::borrow_rate);
    CHECK(s3.cash_rates == CashRates::split_rate);

    const auto s4 = RegimeConfig::sim4();
    CHECK(s4.transaction_cost_rate == 0.002);
    CHECK(s4.cash_rates == CashRates::split_rate);
    CHECK(RegimeConfig::preset(4).label == "sim4");
    CHECK_THROWS_AS(RegimeConfig::preset(5), std::invalid_argument);
}

TEST_CASE("one trading day at full investment returns exactly 1+r in every regime") {
    for (double r : {0.012, -0.034, 0.2}) {
        const auto ds = dataset_from_returns(day(2000, 1, 1), {0.0, r}, 0.05, 0.08);
        for (int preset = 1; preset <= 4; ++preset) {
            const auto res = run_backtest(ds, {day(2000, 1, 2), day(2000, 1, 2)}, 1.0,
                                          RegimeConfig::preset(preset));
            CHECK(res.final_equity == 1.0 + r);  // no cash, no trade, no cost
            CHECK_FALSE(res.bankrupt);
        }
    }
}

TEST_CASE("all-cash investment compounds the deposit rate daily") {
    const int n = 400;
    const double rate = 0.07;
    const auto ds = dataset_from_returns(day(2000, 1, 1), std::vector<double>(n, 0.0), rate, rate);
    const auto res = run_backtest(ds, ds.range(), 0.0, RegimeConfig::sim1());
    double expected = 1.0;
    for (int i = 0; i < n; ++i) expected *= 1.0 + rate / 365.0;
    CHECK(res.final_equity == expected);  // same arithmetic, bit for bit
    CHECK(res.growth_rate ==
          doctest::Approx(std::log(expected) / (n / 365.0)).epsilon(1e-12));
}

TEST_CASE("single-day bankruptcy boundary has the closed form 1 + l*r + (1-l)*rf/365") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double r = 0.4 * u(rng);
        const double rf = 0.1 * std::abs(u(rng));
        const double l = 12.0 * u(rng);
        const auto ds = dataset_from_returns(day(2000, 1, 1), {0.0, r}, rf, rf);
        const auto res =
            run_backtest(ds, {day(2000, 1, 2), day(2000, 1, 2)}, l, RegimeConfig::sim1());
        const double closed_form = 1.0 + l * r + (1.0 - l) * (rf / 365.0);
        CHECK(res.bankrupt == (closed_form <= 0.0));
        if (res.bankrupt) {
            CHECK(res.growth_rate == -std::numeric_limits<double>::infinity());
            CHECK(res.final_equity <= 0.0);
            CHECK(res.bankruptcy_date == day(2000, 1, 2));
        } else {
            CHECK(res.final_equity > 0.0);
        }
    }
}

TEST_CASE("crash-day thresholds: a 20.47% drop ruins l>=4.89, an 11.58% rally ruins l<=-8.64") {
    const auto crash = dataset_from_returns(day(1987, 10, 16), {0.0, -0.2047}, 0.0, 0.0);
    const DateRange crash_day{day(1987, 10, 17), day(1987, 10, 17)};
    CHECK(run_backtest(crash, crash_day, 4.89, RegimeConfig::sim1()).bankrupt);
    CHECK_FALSE(run_backtest(crash, crash_day, 4.80, RegimeConfig::sim1()).bankrupt);

    const auto rally = dataset_from_returns(day(2008, 10, 12), {0.0, 0.1158}, 0.0, 0.0);
    const DateRange rally_day{day(2008, 10, 13), day(2008, 10, 13)};
    CHECK(run_backtest(rally, rally_day, -8.64, RegimeConfig::sim1()).bankrupt);
    CHECK_FALSE(run_backtest(rally, rally_day, -8.5, RegimeConfig::sim1()).bankrupt);
}

TEST_CASE("sims 1-3 agree bit-for-bit on unleveraged long-only investments") {
    const auto ds = make_gbm_dataset({0.05, 0.02, 0.16}, day(2000, 1, 1), 2000, 17);
    for (double l : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto r1 = run_backtest(ds, ds.range(), l, RegimeConfig::sim1());
        const auto r2 = run_backtest(ds, ds.range(), l, RegimeConfig::sim2());
        const auto r3 = run_backtest(ds, ds.range(), l, RegimeConfig::sim3());
        CHECK(r1.final_equity == r2.final_equity);
        CHECK(r2.final_equity == r3.final_equity);
    }
}

TEST_CASE("sim4 equals sim3 exactly at l=0 and l=1, and never beats it elsewhere") {
    const auto ds = make_gbm_dataset({0.05, 0.02, 0.16}, day(2000, 1, 1), 2000, 18);
    for (double l : {0.0, 1.0}) {
        const auto r3 = run_backtest(ds, ds.range(), l, RegimeConfig::sim3());
        const auto r4 = run_backtest(ds, ds.range(), l, RegimeConfig::sim4());
        CHECK(r3.final_equity == r4.final_equity);  // zero trade volume, zero cost
    }
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double l = u(rng);
        const auto r3 = run_backtest(ds, ds.range(), l, RegimeConfig::sim3());
        const auto r4 = run_backtest(ds, ds.range(), l, RegimeConfig::sim4());
        if (!r3.bankrupt && !r4.bankrupt) CHECK(r4.final_equity <= r3.final_equity);
    }
}

TEST_CASE("short fees and rate spreads only hurt") {
    const auto ds = make_gbm_dataset({0.05, 0.02, 0.16}, day(2000, 1, 1), 1500, 19);
    // sim2 == sim1 for l >= 0 (no short position ever opens)
    for (double l : {0.0, 0.7, 1.3, 2.5}) {
        CHECK(run_backtest(ds, ds.range(), l, RegimeConfig::sim2()).final_equity ==
              run_backtest(ds, ds.range(), l, RegimeConfig::sim1()).final_equity);
    }
    // short positions pay the fee: sim2 strictly below sim1 for l < 0
    CHECK(run_backtest(ds, ds.range(), -0.5, RegimeConfig::sim2()).final_equity <
          run_backtest(ds, ds.range(), -0.5, RegimeConfig::sim1()).final_equity);
}

TEST_CASE("borrow spread bites only above full investment") {
    const GbmParams p{0.05, 0.02, 0.16};
    const auto base = make_gbm_dataset(p, day(2000, 1, 1), 1500, 20);
    // raise the borrow rate above deposits
    std::vector<double> ret(base.size()), dep(base.size()), bor(base.size());
    std::vector<std::uint8_t> trading(base.size(), 1);
    for (std::size_t i = 0; i < base.size(); ++i) {
        ret[i] = base.market_return(i);
        dep[i] = 0.05;
        bor[i] = 0.09;
    }
    const MarketDataset ds(day(2000, 1, 1), ret, dep, bor, trading);
    for (double l : {0.0, 0.5, 1.0}) {
        CHECK(run_backtest(ds, ds.range(), l, RegimeConfig::sim3()).final_equity ==
              run_backtest(ds, ds.range(), l, RegimeConfig::sim2()).final_equity);
    }
    CHECK(run_backtest(ds, ds.range(), 1.5, RegimeConfig::sim3()).final_equity <
          run_backtest(ds, ds.range(), 1.5, RegimeConfig::sim2()).final_equity);
}

TEST_CASE("fee regimes put slope breaks at l=0 and l=1; sim1 stays smooth") {
    const GbmParams p{0.05, 0.02, 0.16};
    const auto base = make_gbm_dataset(p, day(2000, 1, 1), 3000, 23);
    std::vector<double> ret(base.size()), dep(base.size(), 0.05), bor(base.size(), 0.09);
    for (std::size_t i = 0; i < base.size(); ++i) ret[i] = base.market_return(i);
    const MarketDataset ds(day(2000, 1, 1), ret, dep, bor,
                           std::vector<std::uint8_t>(base.size(), 1));

    const double h = 1e-4;
    auto slope_jump = [&](const RegimeConfig& regime, double at) {
        auto g = [&](double l) { return run_backtest(ds, ds.range(), l, regime).growth_rate; };
        const double left = (g(at) - g(at - h)) / h;
        const double right = (g(at + h) - g(at)) / h;
        return left - right;
    };
    // the short fee removes ~the fee rate from the slope below l=0
    CHECK(slope_jump(RegimeConfig::sim2(), 0.0) == doctest::Approx(0.05).epsilon(0.05));
    CHECK(std::abs(slope_jump(RegimeConfig::sim2(), 1.0)) < 1e-3);
    // the borrow spread removes ~the spread from the slope above l=1
    CHECK(slope_jump(RegimeConfig::sim3(), 1.0) == doctest::Approx(0.04).epsilon(0.05));
    // the smooth regime has no breaks anywhere
    for (double at : {0.0, 1.0}) CHECK(std::abs(slope_jump(RegimeConfig::sim1(), at)) < 1e-3);
}

TEST_CASE("zero-volatility dataset: growth independent of leverage in sim1") {
    const double rate = 0.05;
    const std::size_t n = 1000;
    std::vector<double> ret(n, rate / 365.0);  // returns exactly match accrual
    const auto ds = dataset_from_returns(day(2000, 1, 1), std::move(ret), rate, rate);
    const auto base = run_backtest(ds, ds.range(), 0.0, RegimeConfig::sim1());
    for (double l : {-2.0, -0.3, 0.4, 1.0, 3.7}) {
        const auto res = run_backtest(ds, ds.range(), l, RegimeConfig::sim1());
        CHECK(res.growth_rate == doctest::Approx(base.growth_rate).epsilon(1e-11));
    }
}

TEST_CASE("interest accrues while the market sleeps") {
    // weekend: trading day, two non-trading days; deposits keep compounding
    const double rate = 0.365;  // 0.1% per day, easy to see
    const MarketDataset ds(day(2000, 1, 7), {0.01, 0.0, 0.0}, {rate, rate, rate},
                           {rate, rate, rate}, {1, 0, 0});
    const auto res = run_backtest(ds, ds.range(), 0.5, RegimeConfig::sim1());
    const double d = rate / 365.0;
    const double day1 = 0.5 * 1.01 + 0.5 * (1.0 + d);
    double expected = day1;
    for (int i = 0; i < 2; ++i) {
        const double h = 0.5 * expected;
        expected = h + (expected - h) * (1.0 + d);
    }
    CHECK(res.final_equity == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("determinism and window validation") {
    const auto ds = make_gbm_dataset({0.05, 0.02, 0.16}, day(2000, 1, 1), 500, 21);
    const auto a = run_backtest(ds, ds.range(), 1.7, RegimeConfig::sim4());
    const auto b = run_backtest(ds, ds.range(), 1.7, RegimeConfig::sim4());
    CHECK(a.final_equity == b.final_equity);
    CHECK(a.growth_rate == b.growth_rate);

    CHECK_THROWS_AS(run_backtest(ds, {day(1999, 1, 1), day(2000, 2, 1)}, 1.0, RegimeConfig::sim1()),
                    DataError);
    CHECK_THROWS_AS(run_backtest(ds, {day(2000, 2, 1), day(2000, 1, 1)}, 1.0, RegimeConfig::sim1()),
                    DataError);
    CHECK_THROWS_AS(
        run_backtest(ds, ds.range(), std::numeric_limits<double>::infinity(), RegimeConfig::sim1()),
        std::invalid_argument);
}

TEST_CASE("growth_curve preserves input order and propagates errors") {
    const auto ds = make_gbm_dataset({0.05, 0.02, 0.16}, day(2000, 1, 1), 300, 22);
    const std::vector<double> ls{1.0, -2.0, 0.5};
    const auto curve = growth_curve(ds, ds.range(), ls, RegimeConfig::sim1());
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].leverage == 1.0);
    CHECK(curve[1].leverage == -2.0);
    CHECK(curve[2].leverage == 0.5);
    for (const auto& pt : curve)
        CHECK(pt.growth_rate ==
              run_backtest(ds, ds.range(), pt.leverage, RegimeConfig::sim1()).growth_rate);
    CHECK_THROWS_AS(growth_curve(ds, ds.range(), {}, RegimeConfig::sim1()), std::invalid_argument);
}

TEST_CASE("bankruptcy stops the run at the recorded date") {
    // big crash mid-window at l=5; equity never recovers
    std::vector<double> ret{0.01, 0.01, -0.25, 0.5, 0.5};
    const auto ds = dataset_from_returns(day(2000, 1, 1), std::move(ret), 0.0, 0.0);
    const auto res = run_backtest(ds, ds.range(), 5.0, RegimeConfig::sim1());
    CHECK(res.bankrupt);
    REQUIRE(res.bankruptcy_date.has_value());
    CHECK(*res.bankruptcy_date == day(2000, 1, 3));
    CHECK(res.final_equity <= 0.0);
    CHECK(res.growth_rate == -std::numeric_limits<double>::infinity());
}
