#pragma once

#include <string>
#include <vector>

#include "rebal/cascade.hpp"

namespace rebal {

/// One asset in the no-waterfall comparison plan: trade straight to the ideal
/// notional, subject only to the order sizing rules.
struct SimplePlanRow {
    std::string asset_id;
    Usd current_amount;
    Usd min_new;
    Usd ideal_new;
    Usd max_new;
    Usd diff;  // ideal_new - current_amount
    Usd min_deploy;    // flow share at the band floor weight
    Usd ideal_deploy;  // flow share at the ideal weight
    Usd max_deploy;    // flow share at the band cap weight
    Usd min_block;
    Usd max_block;
    bool buy = false;
    int min_orders = 0;
    int min_block_size_ind = 1;  // -1 when |diff| is below the min block size
    long additional_orders = 0;
    long total_orders = 0;
    Usd order_size;
    int order_schedule = 0;
    Usd amount_deployed;
    Usd cumulative_deployed;  // running total in execution order
};

struct SimplePlan {
    EventContext context;
    std::vector<SimplePlanRow> rows;  // context asset order
    std::vector<ScheduleEntry> schedule;
};

/// Sizes ideal-minus-current per asset with no budget interaction between
/// assets. Sells still go out before buys.
SimplePlan simple_plan(const EventContext& context, const std::vector<WeightBounds>& bounds,
                       const std::vector<TradeSizeBounds>& sizes, const PlanOptions& options = {});

}  // namespace rebal
