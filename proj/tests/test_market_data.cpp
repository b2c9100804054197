#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "rebal/errors.hpp"
#include "rebal/market_data.hpp"
#include "support/oracles.hpp"

using rebal::Date;

namespace {

// Deterministic synthetic close path: geometric walk with a fixed seed.
rebal::PriceSeries synthetic_series(const std::string& id, int points, std::uint64_t seed,
                                    double drift = 0.0002, double vol = 0.02) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> shock(drift, vol);
    rebal::PriceSeries series;
    series.asset_id = id;
    Date d{2020, 1, 1};
    double close = 100.0;
    for (int i = 0; i < points; ++i) {
        close *= std::exp(shock(rng));
        rebal::PricePoint p;
        p.date = d;
        p.close = close;
        p.open = close * 0.999;
        p.high = close * 1.001;
        p.low = close * 0.998;
        series.points.push_back(p);
        d = rebal::next_day(d);
    }
    return series;
}

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "rebal_md_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("csv loader accepts both header shapes") {
    const auto single = temp_file("btc.csv");
    {
        std::ofstream out(single);
        out << "date,open,high,low,close\n"
            << "2021-01-02,29.0,30.5,28.0,30.0\n"
            << "2021-01-01,28.5,29.5,28.0,29.0\n";
    }
    auto loaded = rebal::load_price_series(single.string());
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].asset_id == "btc");  // named after the file stem
    REQUIRE(loaded[0].points.size() == 2);
    CHECK(loaded[0].points[0].date == Date{2021, 1, 1});  // sorted ascending
    CHECK(loaded[0].points[1].close == doctest::Approx(30.0));

    const auto combined = temp_file("many.csv");
    {
        std::ofstream out(combined);
        out << "asset,date,open,high,low,close\n"
            << "AAA,2021-01-01,10,11,9,10.5\n"
            << "BBB,2021-01-01,20,22,19,21\n"
            << "AAA,2021-01-02,10.5,11.5,10,11\n";
    }
    auto many = rebal::load_price_series(combined.string());
    REQUIRE(many.size() == 2);
    CHECK(many[0].asset_id == "AAA");
    CHECK(many[0].points.size() == 2);
    CHECK(many[1].asset_id == "BBB");
    CHECK(many[1].points.size() == 1);
}

TEST_CASE("csv loader rejects malformed candles") {
    const auto path = temp_file("bad.csv");
    const auto write = [&](const std::string& row) {
        std::ofstream out(path);
        out << "date,open,high,low,close\n" << row << "\n";
    };

    write("2021-01-01,10,9,8,9.5");  // high below open
    CHECK_THROWS_AS(rebal::load_price_series(path.string()), rebal::Error);
    write("2021-01-01,10,11,10.5,10.6");  // low above open
    CHECK_THROWS_AS(rebal::load_price_series(path.string()), rebal::Error);
    write("2021-01-01,0,1,0,0.5");  // non-positive price
    CHECK_THROWS_AS(rebal::load_price_series(path.string()), rebal::Error);
    write("2021-13-01,10,11,9,10");  // bad date
    CHECK_THROWS_AS(rebal::load_price_series(path.string()), rebal::Error);
    write("2021-01-01,10,11,9");  // short row
    CHECK_THROWS_AS(rebal::load_price_series(path.string()), rebal::Error);

    {
        std::ofstream out(path);
        out << "date,open,high,low,close\n"
            << "2021-01-01,10,11,9,10\n"
            << "2021-01-01,10,11,9,10\n";  // duplicate date: bad data, not bad syntax
    }
    try {
        rebal::load_price_series(path.string());
        FAIL("expected throw");
    } catch (const rebal::Error& e) {
        CHECK(e.category() == rebal::ErrorCategory::validation);
        CHECK(e.exit_code() == 4);
    }

    write("2021-01-01,ten,11,9,10");  // unparseable number
    try {
        rebal::load_price_series(path.string());
        FAIL("expected throw");
    } catch (const rebal::Error& e) {
        CHECK(e.category() == rebal::ErrorCategory::parse);
        CHECK(e.exit_code() == 3);
    }
}

TEST_CASE("log returns reproduce ln(p1/p0) pointwise") {
    const auto series = synthetic_series("X", 40, 11);
    const auto returns = rebal::log_returns(series);
    REQUIRE(returns.size() == 39);
    for (std::size_t i = 0; i < returns.size(); ++i) {
        const double expect =
            std::log(series.points[i + 1].close / series.points[i].close);
        CHECK(returns.values[i] == expect);
        CHECK(returns.dates[i] == series.points[i + 1].date);
    }
}

TEST_CASE("rolling stats match the brute-force oracle exactly per window") {
    const auto series = synthetic_series("X", 401, 42);
    const auto returns = rebal::log_returns(series);
    REQUIRE(returns.size() == 400);
    const auto stats = rebal::rolling_stats(returns, 90, 30);

    // A full window at every position: 400 - 90 + 1 dates.
    REQUIRE(stats.size() == 311);
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const std::size_t end = i + 90;  // returns [i, end)
        std::vector<double> window(returns.values.begin() + static_cast<long>(i),
                                   returns.values.begin() + static_cast<long>(end));
        CHECK(stats[i].window == 90);
        CHECK(stats[i].date == returns.dates[end - 1]);
        CHECK(stats[i].mean_return == doctest::Approx(oracle::mean(window)).epsilon(1e-14));
        const double var = oracle::sample_variance(window);
        CHECK(std::abs(stats[i].variance - var) <= 1e-12 * std::abs(var));
        const double vol = oracle::sample_stddev(window);
        CHECK(std::abs(stats[i].volatility - vol) <= 1e-12 * vol);
    }
}

TEST_CASE("short series use expanding windows from the minimum history") {
    const auto series = synthetic_series("X", 61, 5);  // 60 returns < window 90
    const auto returns = rebal::log_returns(series);
    const auto stats = rebal::rolling_stats(returns, 90, 30);
    REQUIRE(stats.size() == 31);  // windows of 30..60 returns
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const int n = 30 + static_cast<int>(i);
        CHECK(stats[i].window == n);
        std::vector<double> window(returns.values.begin(),
                                   returns.values.begin() + n);
        CHECK(stats[i].volatility ==
              doctest::Approx(oracle::sample_stddev(window)).epsilon(1e-12));
    }

    const auto tiny = synthetic_series("X", 20, 5);
    CHECK_THROWS_AS(rebal::rolling_stats(rebal::log_returns(tiny), 90, 30), rebal::Error);
}

TEST_CASE("volatility-of-volatility factor is the stddev of log vol steps") {
    const auto series = synthetic_series("X", 401, 9);
    const auto stats = rebal::rolling_stats(rebal::log_returns(series), 90, 30);
    const auto adjusted = rebal::vvv_adjusted_volatility(stats, 90, 1.0, 30);

    // Steps exist between consecutive stats rows; full windows of 90 steps.
    REQUIRE(adjusted.size() == stats.size() - 90);
    std::vector<double> steps;
    for (std::size_t i = 1; i < stats.size(); ++i) {
        steps.push_back(std::log(stats[i].volatility / stats[i - 1].volatility));
    }
    for (std::size_t i = 0; i < adjusted.size(); ++i) {
        std::vector<double> window(steps.begin() + static_cast<long>(i),
                                   steps.begin() + static_cast<long>(i) + 90);
        const double factor = oracle::sample_stddev(window);
        CHECK(adjusted[i].vvv_factor == doctest::Approx(factor).epsilon(1e-12));
        CHECK(adjusted[i].vvv_volatility ==
              doctest::Approx(adjusted[i].volatility + factor).epsilon(1e-12));
        CHECK_FALSE(adjusted[i].degenerate_volatility);
    }

    // theta scales the adjustment linearly; theta = 0 leaves volatility as-is.
    const auto flat = rebal::vvv_adjusted_volatility(stats, 90, 0.0, 30);
    for (const auto& row : flat) CHECK(row.vvv_volatility == row.volatility);
    const auto doubled = rebal::vvv_adjusted_volatility(stats, 90, 2.0, 30);
    for (std::size_t i = 0; i < doubled.size(); ++i) {
        CHECK(doubled[i].vvv_volatility ==
              doctest::Approx(doubled[i].volatility + 2.0 * doubled[i].vvv_factor));
    }
}

TEST_CASE("a constant-return stretch flags degenerate volatility instead of failing") {
    rebal::ReturnSeries returns;
    returns.asset_id = "flat";
    Date d{2020, 1, 1};
    for (int i = 0; i < 80; ++i) {
        returns.dates.push_back(d);
        d = rebal::next_day(d);
        returns.values.push_back(i < 40 ? 0.0 : 0.01 * ((i % 3) - 1));
    }
    const auto stats = rebal::rolling_stats(returns, 90, 30);  // expanding windows
    const auto adjusted = rebal::vvv_adjusted_volatility(stats, 90, 1.0, 30);
    REQUIRE(!adjusted.empty());
    bool any_degenerate = false;
    for (const auto& row : adjusted) {
        any_degenerate = any_degenerate || row.degenerate_volatility;
        CHECK(std::isfinite(row.vvv_volatility));
    }
    CHECK(any_degenerate);
}

TEST_CASE("covariance diagonal equals rolling variance bit for bit") {
    std::vector<rebal::ReturnSeries> all;
    for (int a = 0; a < 4; ++a) {
        all.push_back(rebal::log_returns(
            synthetic_series("A" + std::to_string(a), 200, 100 + static_cast<std::uint64_t>(a))));
    }
    const auto cov = rebal::covariance_matrix(all, 90, 30);
    REQUIRE(cov.asset_ids.size() == 4);
    CHECK(cov.window == 90);

    for (int a = 0; a < 4; ++a) {
        const auto stats = rebal::rolling_stats(all[static_cast<std::size_t>(a)], 90, 30);
        // All series share dates, so the covariance window is the trailing 90
        // returns — the same data as the last rolling-variance row.
        CHECK(cov.values(a, a) == stats.back().variance);
    }

    // Off-diagonals against the oracle, and symmetry.
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            std::vector<double> xs(all[static_cast<std::size_t>(a)].values.end() - 90,
                                   all[static_cast<std::size_t>(a)].values.end());
            std::vector<double> ys(all[static_cast<std::size_t>(b)].values.end() - 90,
                                   all[static_cast<std::size_t>(b)].values.end());
            CHECK(cov.values(a, b) ==
                  doctest::Approx(oracle::sample_covariance(xs, ys)).epsilon(1e-12));
            CHECK(cov.values(a, b) == cov.values(b, a));
        }
    }
}

TEST_CASE("covariance intersects dates across assets") {
    auto long_series = rebal::log_returns(synthetic_series("L", 200, 1));
    auto short_series = rebal::log_returns(synthetic_series("S", 50, 2));
    // Same start date, so the overlap is the short series' 49 dates.
    const auto cov = rebal::covariance_matrix({long_series, short_series}, 90, 30);
    CHECK(cov.window == 49);

    auto tiny = rebal::log_returns(synthetic_series("T", 20, 3));
    CHECK_THROWS_AS(rebal::covariance_matrix({long_series, tiny}, 90, 30), rebal::Error);
}

TEST_CASE("price scale does not change return statistics") {
    const auto base = synthetic_series("X", 150, 77);
    auto scaled = base;
    for (auto& p : scaled.points) {
        // Power-of-two scaling is exact in binary floating point, so the log
        // returns — and everything derived from them — must match bitwise.
        p.open *= 1024.0;
        p.high *= 1024.0;
        p.low *= 1024.0;
        p.close *= 1024.0;
    }
    const auto r0 = rebal::log_returns(base);
    const auto r1 = rebal::log_returns(scaled);
    REQUIRE(r0.size() == r1.size());
    for (std::size_t i = 0; i < r0.size(); ++i) CHECK(r0.values[i] == r1.values[i]);

    const auto s0 = rebal::rolling_stats(r0, 90, 30);
    const auto s1 = rebal::rolling_stats(r1, 90, 30);
    REQUIRE(s0.size() == s1.size());
    for (std::size_t i = 0; i < s0.size(); ++i) {
        CHECK(s0[i].variance == s1[i].variance);
        CHECK(s0[i].volatility == s1[i].volatility);
    }
}
