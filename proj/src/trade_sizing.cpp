#include "rebal/trade_sizing.hpp"

#include <algorithm>

#include "rebal/errors.hpp"

namespace rebal {

namespace {

void check_config(const SizingConfig& config) {
    if (config.min_size_multiplier <= 0.0 || config.min_size_param <= 0.0 ||
        config.max_size_divisor <= 0.0 || config.max_size_param <= 0.0) {
        fail(ErrorCategory::config, "trade sizing parameters must be positive");
    }
}

void check_inputs(const SizingInputs& inputs) {
    if (inputs.avg_gas_fees < 0.0) {
        fail(ErrorCategory::validation,
             "negative gas fees for asset '" + inputs.asset_id + "'");
    }
    if (inputs.avg_daily_volume <= 0.0 || inputs.liquidity_pool_depth <= 0.0) {
        fail(ErrorCategory::validation,
             "asset '" + inputs.asset_id + "' is untradable: volume and pool depth must be positive");
    }
}

}  // namespace

Usd min_block_size(const SizingInputs& inputs, const SizingConfig& config) {
    check_config(config);
    check_inputs(inputs);
    return Usd::from_value(
        std::max(inputs.avg_gas_fees * config.min_size_multiplier, config.min_size_param));
}

Usd max_block_size(const SizingInputs& inputs, const SizingConfig& config) {
    check_config(config);
    check_inputs(inputs);
    const double by_volume = inputs.avg_daily_volume / config.max_size_divisor;
    const double by_depth = inputs.liquidity_pool_depth / (2.0 * config.max_size_divisor);
    return Usd::from_value(std::min({by_volume, by_depth, config.max_size_param}));
}

TradeSizeBounds size_bounds(const SizingInputs& inputs, const SizingConfig& config) {
    TradeSizeBounds bounds{min_block_size(inputs, config), max_block_size(inputs, config)};
    if (bounds.min_size > bounds.max_size) {
        fail(ErrorCategory::infeasible,
             "asset '" + inputs.asset_id + "' has min block size " + bounds.min_size.to_string() +
                 " above max block size " + bounds.max_size.to_string());
    }
    if (bounds.min_size <= Usd{}) {
        fail(ErrorCategory::validation,
             "asset '" + inputs.asset_id + "' resolved a nonpositive min block size");
    }
    return bounds;
}

}  // namespace rebal
