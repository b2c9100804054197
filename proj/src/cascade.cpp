#include "rebal/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "rebal/errors.hpp"

namespace rebal {

Holding make_holding(const std::string& asset_id, double quantity, double price) {
    if (asset_id.empty()) {
        fail(ErrorCategory::validation, "holding needs an asset id");
    }
    if (!(price > 0.0) || !std::isfinite(price)) {
        fail(ErrorCategory::validation, "asset '" + asset_id + "' needs a positive price");
    }
    if (quantity < 0.0 || !std::isfinite(quantity)) {
        fail(ErrorCategory::validation, "asset '" + asset_id + "' needs a nonnegative quantity");
    }
    Holding h;
    h.asset_id = asset_id;
    h.quantity = quantity;
    h.price = price;
    h.current_amount = Usd::from_value(quantity * price);
    return h;
}

EventContext prepare_event(std::vector<Holding> holdings, Usd flow,
                           const std::vector<std::string>& full_exit_ids, long event_index) {
    if (holdings.empty()) {
        fail(ErrorCategory::validation, "an event needs at least one asset");
    }
    std::set<std::string> seen;
    EventContext ctx;
    ctx.event_index = event_index;
    ctx.flow = flow;
    ctx.deposit = flow >= Usd{};
    for (const auto& h : holdings) {
        if (!seen.insert(h.asset_id).second) {
            fail(ErrorCategory::validation, "duplicate asset '" + h.asset_id + "' in event");
        }
        if (h.current_amount != Usd::from_value(h.quantity * h.price)) {
            fail(ErrorCategory::validation,
                 "holding notional for '" + h.asset_id + "' disagrees with quantity * price");
        }
        ctx.current_total += h.current_amount;
    }
    ctx.full_exit.assign(holdings.size(), false);
    for (const auto& id : full_exit_ids) {
        auto it = std::find_if(holdings.begin(), holdings.end(),
                               [&](const Holding& h) { return h.asset_id == id; });
        if (it == holdings.end()) {
            fail(ErrorCategory::validation, "full-exit asset '" + id + "' is not in the event");
        }
        ctx.full_exit[static_cast<std::size_t>(it - holdings.begin())] = true;
    }
    if (ctx.flow < -ctx.current_total) {
        fail(ErrorCategory::infeasible,
             "withdrawal " + flow.to_string() + " exceeds portfolio value " +
                 ctx.current_total.to_string());
    }
    ctx.holdings = std::move(holdings);
    return ctx;
}

std::vector<AssetPlanRow> compute_capacities(const EventContext& context,
                                             const std::vector<WeightBounds>& bounds) {
    if (bounds.size() != context.holdings.size()) {
        fail(ErrorCategory::validation, "weight bounds must cover every asset in the event");
    }
    const Usd total_after = context.current_total + context.flow;
    const double total_after_value = total_after.value();

    std::vector<AssetPlanRow> rows(context.holdings.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const WeightBounds& b = bounds[i];
        if (context.full_exit[i] && (b.min_w != 0.0 || b.ideal_w != 0.0 || b.max_w != 0.0)) {
            fail(ErrorCategory::validation,
                 "full-exit asset '" + context.holdings[i].asset_id +
                     "' must carry zero weight bounds");
        }
        if (!(b.min_w >= 0.0) || !(b.min_w <= b.ideal_w) || !(b.ideal_w <= b.max_w)) {
            fail(ErrorCategory::validation,
                 "weight bounds for '" + context.holdings[i].asset_id +
                     "' must satisfy 0 <= min <= ideal <= max");
        }
        AssetPlanRow& row = rows[i];
        row.asset_id = context.holdings[i].asset_id;
        row.current_amount = context.holdings[i].current_amount;
        const Usd lo = Usd::from_value(total_after_value * b.min_w);
        const Usd hi = Usd::from_value(total_after_value * b.max_w);
        row.min_new = min(lo, hi);
        row.max_new = max(lo, hi);
        row.ideal_new = Usd::from_value(total_after_value * b.ideal_w);
        row.diff = context.deposit ? row.max_new - row.current_amount
                                   : row.min_new - row.current_amount;
    }
    return rows;
}

PlanTotals compute_deltas(const EventContext& context, std::vector<AssetPlanRow>& rows,
                          const std::vector<TradeSizeBounds>& sizes) {
    if (sizes.size() != rows.size()) {
        fail(ErrorCategory::validation, "trade size bounds must cover every asset in the event");
    }
    PlanTotals totals;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (sizes[i].min_size > sizes[i].max_size || sizes[i].min_size <= Usd{}) {
            fail(ErrorCategory::validation,
                 "trade size bounds for '" + rows[i].asset_id + "' are unusable");
        }
        AssetPlanRow& row = rows[i];
        row.rebalance_delta = context.deposit ? min(row.diff, Usd{}) : max(row.diff, Usd{});
        row.min_size_delta =
            row.rebalance_delta.abs() < sizes[i].min_size ? row.rebalance_delta : Usd{};
        row.buy = row.diff >= Usd{};
        totals.rebalance_delta_total += row.rebalance_delta;
        totals.min_size_delta_total += row.min_size_delta;
        if (row.buy) {
            ++totals.total_buy_assets;
        } else {
            ++totals.total_sell_assets;
        }
    }
    totals.budget = context.deposit ? context.flow + totals.min_size_delta_total
                                    : context.flow - totals.rebalance_delta_total;
    return totals;
}

namespace {

std::vector<std::size_t> sorted_indices(const std::vector<AssetPlanRow>& rows, bool descending) {
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a].diff != rows[b].diff) {
            return descending ? rows[b].diff < rows[a].diff : rows[a].diff < rows[b].diff;
        }
        return a < b;
    });
    return idx;
}

std::vector<std::size_t> rank_order(const std::vector<AssetPlanRow>& rows) {
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a].buy != rows[b].buy) return !rows[a].buy;  // sells first
        if (rows[a].diff != rows[b].diff) {
            return rows[a].buy ? rows[b].diff < rows[a].diff   // buys: largest first
                               : rows[a].diff < rows[b].diff;  // sells: most negative first
        }
        return a < b;
    });
    return idx;
}

}  // namespace

void rank_capacities(std::vector<AssetPlanRow>& rows) {
    const auto desc = sorted_indices(rows, true);
    const auto asc = sorted_indices(rows, false);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[desc[r]].rank_desc = static_cast<int>(r + 1);
        rows[asc[r]].rank_asc = static_cast<int>(r + 1);
    }
    const auto order = rank_order(rows);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[order[r]].cap_rank = static_cast<int>(r + 1);
    }
}

void capacity_to_fill(const EventContext& context, std::vector<AssetPlanRow>& rows,
                      const PlanTotals& totals) {
    const Usd budget = totals.budget;
    const auto order = rank_order(rows);
    Usd raw;
    for (std::size_t i : order) {
        AssetPlanRow& row = rows[i];
        row.raw_cap_filled = raw;
        if (context.deposit) {
            row.cap_to_fill = min(row.diff, budget - min(budget, raw));
        } else {
            row.cap_to_fill = max(row.diff, budget - max(budget, raw));
        }
        raw += row.diff;
    }
}

void capacity_to_fill_alt(const EventContext& context, std::vector<AssetPlanRow>& rows,
                          const PlanTotals& totals) {
    const Usd budget = totals.budget;
    const auto order = rank_order(rows);
    Usd raw;
    for (std::size_t i : order) {
        AssetPlanRow& row = rows[i];
        row.bound_cap_filled = context.deposit ? min(budget, raw) : max(budget, raw);
        row.raw_cap_inclusive = row.diff + row.bound_cap_filled;
        row.cap_inclusive = context.deposit ? min(budget, row.raw_cap_inclusive)
                                            : max(budget, row.raw_cap_inclusive);
        const Usd room = row.cap_inclusive - row.bound_cap_filled;
        row.alt_cap_to_fill = context.deposit ? min(row.diff, room) : max(row.diff, room);
        raw += row.diff;
    }
}

OrderSizing size_orders(Usd cap_to_fill, const TradeSizeBounds& sizes) {
    if (sizes.min_size > sizes.max_size || sizes.min_size <= Usd{}) {
        fail(ErrorCategory::validation, "trade size bounds are unusable");
    }
    OrderSizing s;
    s.min_orders = cap_to_fill.abs() >= sizes.min_size ? 1 : 0;
    s.additional_orders = cap_to_fill.div_floor_abs(sizes.max_size);
    s.total_orders = s.min_orders + s.additional_orders;
    s.order_size =
        s.min_orders == 1 ? cap_to_fill.div_round(s.additional_orders + 1) : Usd{};
    return s;
}

namespace {

void apply_sizing(std::vector<AssetPlanRow>& rows, const std::vector<TradeSizeBounds>& sizes) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        AssetPlanRow& row = rows[i];
        const OrderSizing s = size_orders(row.cap_to_fill, sizes[i]);
        row.min_orders = s.min_orders;
        row.additional_orders = s.additional_orders;
        row.total_orders = s.total_orders;
        row.order_size = s.order_size;
        row.min_block_size_ind = row.cap_to_fill.abs() < sizes[i].min_size ? -1 : 1;
        row.alt_min_orders =
            (s.min_orders == 1 && s.order_size.abs() >= sizes[i].min_size) ? 1 : 0;
        row.rebalance_delta_adjusted = row.alt_min_orders == 1 ? row.rebalance_delta : Usd{};
        row.amount_deployed = s.min_orders == 1 ? row.cap_to_fill : Usd{};
    }
}

}  // namespace

std::vector<ScheduleEntry> build_schedule(std::vector<AssetPlanRow>& rows,
                                          const PlanOptions& options) {
    const auto order = rank_order(rows);
    std::vector<ScheduleEntry> schedule;
    long sequence = 0;
    int position = 0;
    Usd cumulative;
    for (std::size_t i : order) {
        AssetPlanRow& row = rows[i];
        if (row.total_orders >= 1) {
            row.order_schedule = ++position;
            const Usd body = row.order_size;
            Usd emitted;
            for (long n = 0; n < row.total_orders; ++n) {
                ScheduleEntry entry;
                entry.sequence = ++sequence;
                entry.asset_id = row.asset_id;
                entry.side = row.buy ? 1 : -1;
                entry.amount = n + 1 < row.total_orders ? body : row.cap_to_fill - emitted;
                entry.delay_seconds = options.order_delay_seconds;
                emitted += entry.amount;
                schedule.push_back(std::move(entry));
            }
        } else {
            row.order_schedule = 0;
        }
        cumulative += row.amount_deployed;
        row.cumulative_deployed = cumulative;
    }
    return schedule;
}

namespace {

void check_dual_route(const std::vector<AssetPlanRow>& rows) {
    for (const auto& row : rows) {
        if (row.cap_to_fill != row.alt_cap_to_fill) {
            fail(ErrorCategory::internal,
                 "allocation routes disagree for '" + row.asset_id + "': " +
                     row.cap_to_fill.to_string() + " vs " + row.alt_cap_to_fill.to_string());
        }
    }
}

}  // namespace

RebalancePlan plan_event(const EventContext& context, const std::vector<WeightBounds>& bounds,
                         const std::vector<TradeSizeBounds>& sizes, const PlanOptions& options) {
    RebalancePlan plan;
    plan.context = context;
    plan.rows = compute_capacities(context, bounds);
    plan.totals = compute_deltas(context, plan.rows, sizes);
    rank_capacities(plan.rows);
    capacity_to_fill(context, plan.rows, plan.totals);
    capacity_to_fill_alt(context, plan.rows, plan.totals);
    check_dual_route(plan.rows);
    apply_sizing(plan.rows, sizes);
    plan.schedule = build_schedule(plan.rows, options);
    return plan;
}

RebalancePlan adjust_after_sells(const RebalancePlan& plan,
                                 const std::vector<TradeSizeBounds>& sizes,
                                 const FillReport& fills, const PlanOptions& options) {
    std::map<long, const ScheduleEntry*> sells;
    for (const auto& entry : plan.schedule) {
        if (entry.side < 0) sells[entry.sequence] = &entry;
    }
    std::set<long> reported;
    Usd adjustment;
    for (const auto& record : fills.records) {
        auto it = sells.find(record.sequence);
        if (it == sells.end()) {
            fail(ErrorCategory::reconciliation,
                 "fill references unknown sell order " + std::to_string(record.sequence));
        }
        if (!reported.insert(record.sequence).second) {
            fail(ErrorCategory::reconciliation,
                 "duplicate fill for sell order " + std::to_string(record.sequence));
        }
        const ScheduleEntry& entry = *it->second;
        if (record.asset_id != entry.asset_id) {
            fail(ErrorCategory::reconciliation,
                 "fill for order " + std::to_string(record.sequence) + " names asset '" +
                     record.asset_id + "' but the order was for '" + entry.asset_id + "'");
        }
        if (record.placed_abs != entry.amount.abs()) {
            fail(ErrorCategory::reconciliation,
                 "fill for order " + std::to_string(record.sequence) +
                     " disagrees with the placed notional");
        }
        if (record.realized_abs < Usd{} || (record.failed && !record.realized_abs.is_zero())) {
            fail(ErrorCategory::reconciliation,
                 "fill for order " + std::to_string(record.sequence) + " has an invalid realized notional");
        }
        adjustment += record.realized_abs - record.placed_abs;
    }
    if (reported.size() != sells.size()) {
        fail(ErrorCategory::reconciliation,
             "every sell order needs a fill outcome before buys are released");
    }

    RebalancePlan revised = plan;
    revised.totals.min_size_delta_total += adjustment;
    revised.totals.budget = plan.context.deposit
                                ? plan.context.flow + revised.totals.min_size_delta_total
                                : plan.context.flow - revised.totals.rebalance_delta_total;

    // Replan the buy side against the adjusted budget; sell rows stay frozen.
    std::vector<AssetPlanRow> recomputed = revised.rows;
    capacity_to_fill(revised.context, recomputed, revised.totals);
    capacity_to_fill_alt(revised.context, recomputed, revised.totals);
    check_dual_route(recomputed);
    for (std::size_t i = 0; i < revised.rows.size(); ++i) {
        if (revised.rows[i].buy) revised.rows[i] = recomputed[i];
    }
    apply_sizing(revised.rows, sizes);

    // Keep the executed sell orders verbatim; regenerate only the buy orders.
    std::vector<AssetPlanRow> buys_only = revised.rows;
    for (auto& row : buys_only) {
        if (!row.buy) row.total_orders = 0;
    }
    PlanOptions opts = options;
    std::vector<ScheduleEntry> buy_schedule = build_schedule(buys_only, opts);

    revised.schedule.clear();
    long sequence = 0;
    int position = 0;
    for (const auto& entry : plan.schedule) {
        if (entry.side < 0) {
            ScheduleEntry kept = entry;
            kept.sequence = ++sequence;
            revised.schedule.push_back(kept);
        }
    }
    for (auto& row : revised.rows) {
        if (!row.buy && row.total_orders >= 1) position = std::max(position, row.order_schedule);
    }
    for (auto& entry : buy_schedule) {
        entry.sequence = ++sequence;
        revised.schedule.push_back(entry);
    }
    // Schedule positions and the cumulative column come from the merged rows.
    int buy_position = position;
    Usd cumulative;
    const auto order = rank_order(revised.rows);
    for (std::size_t i : order) {
        AssetPlanRow& row = revised.rows[i];
        if (row.buy) {
            row.order_schedule = row.total_orders >= 1 ? ++buy_position : 0;
        }
        cumulative += row.amount_deployed;
        row.cumulative_deployed = cumulative;
    }
    return revised;
}

}  // namespace rebal
