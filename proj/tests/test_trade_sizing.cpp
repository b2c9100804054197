#include <doctest.h>

#include <random>

#include "rebal/errors.hpp"
#include "rebal/trade_sizing.hpp"

using rebal::SizingInputs;
using rebal::Usd;

namespace {

SizingInputs typical() {
    SizingInputs in;
    in.asset_id = "X";
    in.avg_gas_fees = 25.0;
    in.avg_daily_volume = 3e8;
    in.liquidity_pool_depth = 1e8;
    return in;
}

}  // namespace

TEST_CASE("typical liquidity yields a 25k/50k block band") {
    const auto bounds = rebal::size_bounds(typical());
    // Gas leg: 25 * 1000 = 25000 = the floor parameter, so min is 25000.
    CHECK(bounds.min_size == Usd::from_value(25000.0));
    // Volume leg 3e8/1000 = 300000; depth leg 1e8/2000 = 50000; cap 200000.
    CHECK(bounds.max_size == Usd::from_value(50000.0));
}

TEST_CASE("each leg of the min can bind") {
    auto in = typical();
    in.avg_gas_fees = 40.0;  // 40 * 1000 = 40000 beats the 25000 floor
    CHECK(rebal::min_block_size(in) == Usd::from_value(40000.0));
    in.avg_gas_fees = 1.0;  // floor takes over
    CHECK(rebal::min_block_size(in) == Usd::from_value(25000.0));
}

TEST_CASE("each leg of the max can bind") {
    auto in = typical();
    in.avg_daily_volume = 6e7;  // 60000 < depth leg 50000? no: 6e7/1000 = 60000
    in.liquidity_pool_depth = 4e8;  // depth leg 200000
    CHECK(rebal::max_block_size(in) == Usd::from_value(60000.0));

    in.avg_daily_volume = 3e8;
    in.liquidity_pool_depth = 5e7;  // depth leg 25000 binds
    CHECK(rebal::max_block_size(in) == Usd::from_value(25000.0));

    in.avg_daily_volume = 1e9;
    in.liquidity_pool_depth = 1e9;  // both legs above the 200000 cap
    CHECK(rebal::max_block_size(in) == Usd::from_value(200000.0));
}

TEST_CASE("bounds are monotone in their inputs") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> gas(0.1, 500.0);
    std::uniform_real_distribution<double> vol(1e6, 1e10);
    std::uniform_real_distribution<double> depth(1e6, 1e10);
    for (int it = 0; it < 500; ++it) {
        auto a = typical();
        a.avg_gas_fees = gas(rng);
        a.avg_daily_volume = vol(rng);
        a.liquidity_pool_depth = depth(rng);
        auto b = a;
        b.avg_gas_fees *= 1.5;
        b.avg_daily_volume *= 1.5;
        b.liquidity_pool_depth *= 1.5;
        // More gas never shrinks the minimum; more liquidity never shrinks the max.
        CHECK(rebal::min_block_size(b) >= rebal::min_block_size(a));
        CHECK(rebal::max_block_size(b) >= rebal::max_block_size(a));
    }
}

TEST_CASE("an illiquid, expensive asset is rejected as untradeable") {
    auto in = typical();
    in.avg_gas_fees = 300.0;            // min leg 300000
    in.liquidity_pool_depth = 2e7;      // max leg 10000
    CHECK(rebal::min_block_size(in) > rebal::max_block_size(in));
    try {
        rebal::size_bounds(in);
        FAIL("expected throw");
    } catch (const rebal::Error& e) {
        CHECK(e.category() == rebal::ErrorCategory::infeasible);
    }
}

TEST_CASE("negative liquidity figures are rejected") {
    auto in = typical();
    in.avg_daily_volume = -1.0;
    CHECK_THROWS_AS(rebal::size_bounds(in), rebal::Error);
    in = typical();
    in.avg_gas_fees = -5.0;
    CHECK_THROWS_AS(rebal::size_bounds(in), rebal::Error);
}

TEST_CASE("custom sizing parameters flow through") {
    rebal::SizingConfig config;
    config.min_size_param = 1000.0;
    config.min_size_multiplier = 10.0;
    config.max_size_param = 1e9;
    config.max_size_divisor = 100.0;
    auto in = typical();  // gas 25 -> 250 vs floor 1000; vol leg 3e6; depth leg 5e5
    const auto bounds = rebal::size_bounds(in, config);
    CHECK(bounds.min_size == Usd::from_value(1000.0));
    CHECK(bounds.max_size == Usd::from_value(500000.0));
}
