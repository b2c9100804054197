#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rebal/money.hpp"
#include "rebal/trade_sizing.hpp"
#include "rebal/weights.hpp"

namespace rebal {

struct Holding {
    std::string asset_id;
    double quantity = 0.0;
    double price = 0.0;
    Usd current_amount;  // quantity * price, fixed to 1e-6
};

Holding make_holding(const std::string& asset_id, double quantity, double price);

/// One rebalancing event: the portfolio snapshot plus the external cash flow.
struct EventContext {
    long event_index = 0;
    Usd flow;  // signed; >= 0 is a deposit event
    bool deposit = true;
    std::vector<Holding> holdings;  // fixes the asset order for the whole event
    std::vector<bool> full_exit;    // aligned with holdings
    Usd current_total;
};

EventContext prepare_event(std::vector<Holding> holdings, Usd flow,
                           const std::vector<std::string>& full_exit_ids = {},
                           long event_index = 0);

/// Everything the engine derives for one asset while planning an event.
struct AssetPlanRow {
    std::string asset_id;
    Usd current_amount;
    Usd min_new;    // band floor notional at the post-flow total
    Usd ideal_new;  // ideal notional at the post-flow total
    Usd max_new;    // band cap notional at the post-flow total
    Usd diff;       // band edge minus current: max side on deposits, min side on withdrawals
    Usd rebalance_delta;      // forced band-repair amount (sells on deposits, buys on withdrawals)
    Usd min_size_delta;       // rebalance_delta when below the min block size, else 0
    bool buy = false;         // diff >= 0
    int rank_desc = 0;        // 1-based, largest diff first
    int rank_asc = 0;         // 1-based, smallest diff first
    int cap_rank = 0;         // execution order: sells by rising diff, then buys by falling diff
    Usd raw_cap_filled;       // sum of diffs over earlier-ranked assets
    Usd bound_cap_filled;     // raw fill clamped to the budget
    Usd raw_cap_inclusive;    // diff + bound_cap_filled
    Usd cap_inclusive;        // inclusive fill clamped to the budget
    Usd cap_to_fill;          // the amount actually allocated to this asset
    Usd alt_cap_to_fill;      // same value via the clamped-inclusive route
    int min_orders = 0;
    int min_block_size_ind = 1;  // -1 when |cap_to_fill| is below the min block size
    long additional_orders = 0;
    long total_orders = 0;
    Usd order_size;           // representative per-order amount
    int alt_min_orders = 0;   // order counted only if |order_size| is inside the block bounds
    Usd rebalance_delta_adjusted;  // rebalance_delta masked to 0 when alt_min_orders = 0
    int order_schedule = 0;   // 1-based position among assets that trade; 0 if none
    Usd amount_deployed;      // cap_to_fill when an order fires, else 0
    Usd cumulative_deployed;  // running deployed total in cap_rank order
};

struct PlanTotals {
    Usd rebalance_delta_total;
    Usd min_size_delta_total;
    int total_buy_assets = 0;
    int total_sell_assets = 0;
    Usd budget;  // deposits: flow + min_size_delta_total; withdrawals: flow - rebalance_delta_total
};

struct ScheduleEntry {
    long sequence = 0;  // 1-based across the whole event
    std::string asset_id;
    int side = 0;  // -1 sell, +1 buy
    Usd amount;    // signed; the asset's final entry absorbs the division residue
    double delay_seconds = 0.0;
};

struct PlanOptions {
    double order_delay_seconds = 5.0;  // pause hint between consecutive orders
};

struct RebalancePlan {
    EventContext context;
    std::vector<AssetPlanRow> rows;  // context asset order
    PlanTotals totals;
    std::vector<ScheduleEntry> schedule;  // sells first, then buys
};

/// Outcome of the sell leg, reported back before buys are released.
/// Notionals are absolute values; a failed order realized nothing.
struct FillRecord {
    long sequence = 0;
    std::string asset_id;
    Usd placed_abs;
    Usd realized_abs;
    bool failed = false;
};

struct FillReport {
    std::vector<FillRecord> records;
};

/// Band notionals and the band-edge diff per asset. Full-exit assets must
/// arrive with (0, 0, 0) bounds so their diff is exactly -current.
std::vector<AssetPlanRow> compute_capacities(const EventContext& context,
                                             const std::vector<WeightBounds>& bounds);

/// Forced-trade deltas, buy/sell split and the event budget.
PlanTotals compute_deltas(const EventContext& context, std::vector<AssetPlanRow>& rows,
                          const std::vector<TradeSizeBounds>& sizes);

/// Fills all three rankings; ties break toward the lower asset index.
void rank_capacities(std::vector<AssetPlanRow>& rows);

/// Budget waterfall in rank order, closed form over prefix sums of raw diffs.
void capacity_to_fill(const EventContext& context, std::vector<AssetPlanRow>& rows,
                      const PlanTotals& totals);

/// Same allocation via clamped inclusive prefixes; must agree with
/// capacity_to_fill on every input, and also fills the intermediate columns.
void capacity_to_fill_alt(const EventContext& context, std::vector<AssetPlanRow>& rows,
                          const PlanTotals& totals);

struct OrderSizing {
    int min_orders = 0;
    long additional_orders = 0;
    long total_orders = 0;
    Usd order_size;
};

/// Splits one asset's allocation into orders: nothing below the min block
/// size, then one extra order per full max block.
OrderSizing size_orders(Usd cap_to_fill, const TradeSizeBounds& sizes);

/// Emits the order list (sells first), assigns schedule positions and the
/// cumulative deployed column. The final order per asset absorbs the
/// half-even division residue so the entries sum to cap_to_fill exactly.
std::vector<ScheduleEntry> build_schedule(std::vector<AssetPlanRow>& rows,
                                          const PlanOptions& options);

/// Runs the whole pipeline for one event.
RebalancePlan plan_event(const EventContext& context, const std::vector<WeightBounds>& bounds,
                         const std::vector<TradeSizeBounds>& sizes,
                         const PlanOptions& options = {});

/// Reconciles sell outcomes and replans the buy side: the budget moves by the
/// realized-minus-placed sell shortfall, sell rows stay frozen.
RebalancePlan adjust_after_sells(const RebalancePlan& plan,
                                 const std::vector<TradeSizeBounds>& sizes,
                                 const FillReport& fills, const PlanOptions& options = {});

}  // namespace rebal
