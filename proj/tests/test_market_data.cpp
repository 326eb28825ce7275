#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "levlab/errors.hpp"
#include "levlab/market_data.hpp"
#include "levlab/rng.hpp"
#include "support/fixtures.hpp"

using namespace levlab;
using levlab::testing::day;

namespace {

// Independent calendar walker for day counting: advances (y,m,d) triples
// with its own month-length table, no serial arithmetic involved.
int naive_days_inclusive(int y1, int m1, int d1, int y2, int m2, int d2) {
    auto leap = [](int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; };
    auto mlen = [&](int y, int m) {
        static const int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        return m == 2 && leap(y) ? 29 : len[m - 1];
    };
    int count = 1;
    while (y1 != y2 || m1 != m2 || d1 != d2) {
        if (++d1 > mlen(y1, m1)) {
            d1 = 1;
            if (++m1 > 12) {
                m1 = 1;
                ++y1;
            }
        }
        ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("date: parse/format round trip and arithmetic") {
    const Date d = Date::parse("1955-08-04");
    CHECK(d.to_string() == "1955-08-04");
    CHECK(d.ymd().year == 1955);
    CHECK(d.ymd().month == 8);
    CHECK(d.ymd().day == 4);
    CHECK((d + 1).to_string() == "1955-08-05");
    CHECK(day(2000, 3, 1) - day(2000, 2, 28) == 2);  // leap year
    CHECK(day(1900, 3, 1) - day(1900, 2, 28) == 1);  // century non-leap
    CHECK(day(2000, 1, 1) - day(1999, 12, 31) == 1);
    CHECK_THROWS_AS(Date::parse("1955-13-01"), DataError);
    CHECK_THROWS_AS(Date::parse("1955-02-30"), DataError);
    CHECK_THROWS_AS(Date::parse("04-08-1955"), DataError);
    CHECK_THROWS_AS(Date::parse("1955/08/04"), DataError);
}

TEST_CASE("date: serial agrees with a naive calendar walk") {
    CHECK(day(2010, 11, 17) - day(1955, 8, 4) + 1 ==
          naive_days_inclusive(1955, 8, 4, 2010, 11, 17));
    // frozen from the naive walker: 55 years spanning 14 leap days, plus
    // the Aug 4 -> Nov 17 tail, counted inclusively
    CHECK(day(2010, 11, 17) - day(1955, 8, 4) + 1 == 20195);
}

TEST_CASE("parse_fred_csv: missing markers kept, values parsed") {
    const auto s = parse_fred_csv("DATE,VALUE\n1955-08-04,43.69\n1955-08-05,.\n", "SP500");
    REQUIRE(s.observations.size() == 2);
    CHECK(s.series_id == "SP500");
    CHECK(s.observations[0].date == day(1955, 8, 4));
    CHECK(s.observations[0].value == 43.69);
    CHECK_FALSE(s.observations[1].value.has_value());
}

TEST_CASE("parse_fred_csv: empty body, alternate header, CRLF") {
    CHECK(parse_fred_csv("DATE,VALUE\n", "X").observations.empty());
    const auto s = parse_fred_csv("observation_date,SP500\r\n2020-01-02,100.5\r\n", "SP500");
    REQUIRE(s.observations.size() == 1);
    CHECK(s.observations[0].value == 100.5);
}

TEST_CASE("parse_fred_csv: errors name the line") {
    try {
        parse_fred_csv("DATE,VALUE\n1955-08-04,43.69\n1955-08-05,abc\n", "X");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("abc") != std::string::npos);
    }
    try {
        parse_fred_csv("DATE,VALUE\n1955-08-04,1\n1955-08-04,2\n", "X");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }
    CHECK_THROWS_AS(parse_fred_csv("DATE,VALUE\nnot-a-date,1\n", "X"), ParseError);
    CHECK_THROWS_AS(parse_fred_csv("time,value\n", "X"), ParseError);
}

TEST_CASE("build_dataset: gap becomes a non-trading day, returns compound over it") {
    RawSeries price{"P", {{day(2020, 1, 1), 100.0}, {day(2020, 1, 2), {}}, {day(2020, 1, 3), 102.0}}};
    RawSeries rate{"R", {{day(2020, 1, 1), 5.0}}};  // percent
    const auto ds = build_dataset(price, rate, rate, day(2020, 1, 1), day(2020, 1, 3));
    REQUIRE(ds.size() == 3);
    CHECK_FALSE(ds.is_trading_day(0));  // no earlier price
    CHECK_FALSE(ds.is_trading_day(1));
    CHECK(ds.is_trading_day(2));
    CHECK(ds.market_return(1) == 0.0);
    CHECK(ds.market_return(2) == doctest::Approx(0.02).epsilon(1e-12));
    // carry-forward and percent conversion
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(ds.deposit_rate(i) == 0.05);
    CHECK(ds.deposit_accrual(0) == 0.05 / 365.0);
}

TEST_CASE("build_dataset: previous price before the range start counts") {
    RawSeries price{"P", {{day(2020, 1, 1), 50.0}, {day(2020, 1, 2), 51.0}, {day(2020, 1, 3), 51.5}}};
    RawSeries rate{"R", {{day(2019, 12, 25), 1.0}}};
    const auto ds = build_dataset(price, rate, rate, day(2020, 1, 2), day(2020, 1, 3));
    CHECK(ds.is_trading_day(0));
    CHECK(ds.market_return(0) == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("build_dataset: errors") {
    RawSeries one{"P", {{day(2020, 1, 1), 100.0}}};
    RawSeries rate{"R", {{day(2020, 1, 1), 5.0}}};
    CHECK_THROWS_AS(build_dataset(one, rate, rate, day(2020, 1, 1), day(2020, 1, 5)), DataError);

    RawSeries price{"P", {{day(2020, 1, 1), 100.0}, {day(2020, 1, 2), 101.0}}};
    RawSeries late{"R", {{day(2020, 1, 2), 5.0}}};  // nothing on/before day 1
    CHECK_THROWS_AS(build_dataset(price, late, late, day(2020, 1, 1), day(2020, 1, 2)), DataError);

    RawSeries zero{"P", {{day(2020, 1, 1), 100.0}, {day(2020, 1, 2), 0.0}}};
    CHECK_THROWS_AS(build_dataset(zero, rate, rate, day(2020, 1, 1), day(2020, 1, 2)), DataError);
}

TEST_CASE("build_dataset: trading-day count equals present prices after the first") {
    std::mt19937_64 rng(7);
    RawSeries price{"P", {}};
    std::size_t present = 0;
    double p = 100.0;
    for (int i = 0; i < 200; ++i) {
        const bool have = rng() % 3 != 0;
        std::optional<double> v;
        if (have) {
            p *= 1.0 + (static_cast<double>(rng() % 2001) - 1000.0) / 50000.0;
            v = p;
            ++present;
        }
        price.observations.push_back({day(2020, 1, 1) + i, v});
    }
    RawSeries rate{"R", {{day(2020, 1, 1), 3.0}}};
    const auto ds = build_dataset(price, rate, rate, day(2020, 1, 1), day(2020, 1, 1) + 199);
    // every present price after the first one in the series becomes a trading day
    std::size_t expected = 0;
    bool seen = false;
    for (const auto& o : price.observations) {
        if (!o.value) continue;
        if (seen) ++expected;
        seen = true;
    }
    CHECK(present >= 2);
    CHECK(ds.trading_day_count() == expected);
}

TEST_CASE("build_dataset: compounding trading-day returns reproduces the price ratio") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(0.0, 0.01);
    RawSeries price{"P", {}};
    double p = 55.0;
    double first = -1, last = -1;
    for (int i = 0; i < 500; ++i) {
        std::optional<double> v;
        if (rng() % 4 != 0) {
            p *= std::exp(noise(rng));
            v = p;
            if (first < 0) first = p;
            last = p;
        }
        price.observations.push_back({day(1990, 6, 1) + i, v});
    }
    RawSeries rate{"R", {{day(1990, 6, 1), 8.0}}};
    const auto ds = build_dataset(price, rate, rate, day(1990, 6, 1), day(1990, 6, 1) + 499);
    double compounded = 1.0;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds.is_trading_day(i)) compounded *= 1.0 + ds.market_return(i);
    CHECK(compounded == doctest::Approx(last / first).epsilon(1e-10));
}

TEST_CASE("dataset csv: serialize/parse round trip is bit exact") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> noise(0.0, 0.02);
    const std::size_t n = 300;
    std::vector<double> ret(n, 0.0), dep(n), bor(n);
    std::vector<std::uint8_t> trading(n);
    for (std::size_t i = 0; i < n; ++i) {
        trading[i] = rng() % 7 < 5;
        if (trading[i]) ret[i] = noise(rng);
        dep[i] = noise(rng);  // negative rates allowed
        bor[i] = dep[i] + 0.03;
    }
    const MarketDataset ds(day(1971, 3, 26), ret, dep, bor, trading);

    std::ostringstream out;
    write_dataset_csv(ds, out);
    const MarketDataset back = parse_dataset_csv(out.str());

    REQUIRE(back.size() == ds.size());
    CHECK(back.start_date() == ds.start_date());
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(back.market_return(i) == ds.market_return(i));
        CHECK(back.deposit_rate(i) == ds.deposit_rate(i));
        CHECK(back.borrow_rate(i) == ds.borrow_rate(i));
        CHECK(back.is_trading_day(i) == ds.is_trading_day(i));
    }
}

TEST_CASE("dataset csv: comment lines are ignored by the parser") {
    const auto ds = testing::alternating_dataset(day(2003, 5, 1), 10, 0.004);
    std::ostringstream out;
    out << "# command=gbm emit=dataset seed=9\n";
    write_dataset_csv(ds, out);
    const auto back = parse_dataset_csv(out.str());
    REQUIRE(back.size() == ds.size());
    CHECK(back.market_return(3) == ds.market_return(3));
}

TEST_CASE("dataset csv: parser rejects gaps and bad flags") {
    CHECK_THROWS_AS(parse_dataset_csv("date,is_trading_day,market_return,deposit_rate,borrow_rate\n"
                                      "2020-01-01,1,0.0,0.05,0.06\n"
                                      "2020-01-03,1,0.0,0.05,0.06\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_dataset_csv("date,is_trading_day,market_return,deposit_rate,borrow_rate\n"
                                      "2020-01-01,2,0.0,0.05,0.06\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_dataset_csv("bogus\n"), ParseError);
}

TEST_CASE("longest_excess_run: alternating excess gives runs of one day") {
    const auto ds = testing::alternating_dataset(day(2000, 1, 1), 50, 0.001);
    CHECK(longest_excess_run(ds, RunSign::up).length == 1);
    CHECK(longest_excess_run(ds, RunSign::down).length == 1);
}

TEST_CASE("longest_excess_run: planted runs, ties reported, weekends skipped") {
    // 120 calendar days; weekends non-trading; plant a 14-day up run and two
    // separate 12-day down runs relative to a 5% deposit rate.
    const Date start = day(2001, 1, 1);
    const std::size_t n = 200;
    const double rate = 0.05;
    const double accrual = rate / 365.0;
    std::vector<double> ret(n, 0.0);
    std::vector<std::uint8_t> trading(n, 0);
    std::vector<int> trading_idx;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 7 == 5 || i % 7 == 6) continue;  // weekend
        trading[i] = 1;
        trading_idx.push_back(static_cast<int>(i));
    }
    // default: alternate so no accidental runs
    for (std::size_t k = 0; k < trading_idx.size(); ++k)
        ret[trading_idx[k]] = accrual + (k % 2 == 0 ? 0.002 : -0.002);
    auto plant = [&](std::size_t from, int len, double offset) {
        for (int j = 0; j < len; ++j) ret[trading_idx[from + j]] = accrual + offset;
    };
    plant(10, 14, +0.003);   // up run: trading days 10..23
    plant(40, 12, -0.003);   // down run 1
    plant(80, 12, -0.003);   // down run 2
    // re-break neighbours of planted stretches
    ret[trading_idx[9]] = accrual - 0.002;
    ret[trading_idx[24]] = accrual - 0.002;
    ret[trading_idx[39]] = accrual + 0.002;
    ret[trading_idx[52]] = accrual + 0.002;
    ret[trading_idx[79]] = accrual + 0.002;
    ret[trading_idx[92]] = accrual + 0.002;

    const MarketDataset ds(start, ret, std::vector<double>(n, rate),
                           std::vector<double>(n, rate), trading);

    const auto up = longest_excess_run(ds, RunSign::up);
    CHECK(up.length == 14);
    REQUIRE(up.occurrences.size() == 1);
    CHECK(up.occurrences[0].first == start + trading_idx[10]);
    CHECK(up.occurrences[0].last == start + trading_idx[23]);

    const auto down = longest_excess_run(ds, RunSign::down);
    CHECK(down.length == 12);
    REQUIRE(down.occurrences.size() == 2);
    CHECK(down.occurrences[0].first == start + trading_idx[40]);
    CHECK(down.occurrences[1].first == start + trading_idx[80]);
    CHECK(down.occurrences[1].last == start + trading_idx[91]);
}

TEST_CASE("dataset options: divisor and continuous accrual") {
    DatasetOptions opt;
    opt.day_count_divisor = 360.0;
    const auto ds = testing::dataset_from_returns(day(2000, 1, 1), {0.0, 0.0}, 0.06, 0.08, opt);
    CHECK(ds.deposit_accrual(0) == 0.06 / 360.0);
    opt.continuous_accrual = true;
    const auto ds2 = testing::dataset_from_returns(day(2000, 1, 1), {0.0, 0.0}, 0.06, 0.08, opt);
    CHECK(ds2.deposit_accrual(0) == doctest::Approx(std::expm1(0.06 / 360.0)).epsilon(1e-15));
}
