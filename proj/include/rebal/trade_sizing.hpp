#pragma once

#include <string>

#include "rebal/money.hpp"

namespace rebal {

/// Per-asset liquidity measurements, all in USD.
struct SizingInputs {
    std::string asset_id;
    double avg_gas_fees = 0.0;
    double avg_daily_volume = 0.0;
    double liquidity_pool_depth = 0.0;
};

struct SizingConfig {
    double min_size_multiplier = 1000.0;
    double min_size_param = 25000.0;
    double max_size_divisor = 1000.0;
    double max_size_param = 200000.0;
};

/// Smallest and largest single-order notionals allowed for one asset.
struct TradeSizeBounds {
    Usd min_size;
    Usd max_size;
};

/// max(avg gas fees * multiplier, floor parameter): orders below this churn
/// more in fees than they move the portfolio.
Usd min_block_size(const SizingInputs& inputs, const SizingConfig& config = {});

/// min(volume / divisor, pool depth / (2 * divisor), cap parameter): orders
/// above this move the market too much.
Usd max_block_size(const SizingInputs& inputs, const SizingConfig& config = {});

/// Both bounds together; fails if the minimum exceeds the maximum, in which
/// case the asset cannot be traded this event.
TradeSizeBounds size_bounds(const SizingInputs& inputs, const SizingConfig& config = {});

}  // namespace rebal
