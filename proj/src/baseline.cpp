#include "rebal/baseline.hpp"

#include <algorithm>
#include <numeric>

#include "rebal/errors.hpp"

namespace rebal {

SimplePlan simple_plan(const EventContext& context, const std::vector<WeightBounds>& bounds,
                       const std::vector<TradeSizeBounds>& sizes, const PlanOptions& options) {
    if (bounds.size() != context.holdings.size() || sizes.size() != context.holdings.size()) {
        fail(ErrorCategory::validation, "bounds and trade sizes must cover every asset");
    }
    const auto capacities = compute_capacities(context, bounds);
    const double flow_value = context.flow.value();

    SimplePlan plan;
    plan.context = context;
    plan.rows.resize(capacities.size());
    for (std::size_t i = 0; i < capacities.size(); ++i) {
        SimplePlanRow& row = plan.rows[i];
        row.asset_id = capacities[i].asset_id;
        row.current_amount = capacities[i].current_amount;
        row.min_new = capacities[i].min_new;
        row.ideal_new = capacities[i].ideal_new;
        row.max_new = capacities[i].max_new;
        row.diff = row.ideal_new - row.current_amount;
        row.min_deploy = Usd::from_value(flow_value * bounds[i].min_w);
        row.ideal_deploy = Usd::from_value(flow_value * bounds[i].ideal_w);
        row.max_deploy = Usd::from_value(flow_value * bounds[i].max_w);
        row.min_block = sizes[i].min_size;
        row.max_block = sizes[i].max_size;
        row.buy = row.diff >= Usd{};
        const OrderSizing s = size_orders(row.diff, sizes[i]);
        row.min_orders = s.min_orders;
        row.additional_orders = s.additional_orders;
        row.total_orders = s.total_orders;
        row.order_size = s.order_size;
        row.min_block_size_ind = row.diff.abs() < sizes[i].min_size ? -1 : 1;
        row.amount_deployed = s.min_orders == 1 ? row.diff : Usd{};
    }

    // Execution order mirrors the main engine: sells by rising diff, then buys
    // by falling diff, ties toward the lower asset index.
    std::vector<std::size_t> order(plan.rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const SimplePlanRow& ra = plan.rows[a];
        const SimplePlanRow& rb = plan.rows[b];
        if (ra.buy != rb.buy) return !ra.buy;
        if (ra.diff != rb.diff) return ra.buy ? rb.diff < ra.diff : ra.diff < rb.diff;
        return a < b;
    });

    long sequence = 0;
    int position = 0;
    Usd cumulative;
    for (std::size_t i : order) {
        SimplePlanRow& row = plan.rows[i];
        if (row.total_orders >= 1) {
            row.order_schedule = ++position;
            Usd emitted;
            for (long n = 0; n < row.total_orders; ++n) {
                ScheduleEntry entry;
                entry.sequence = ++sequence;
                entry.asset_id = row.asset_id;
                entry.side = row.buy ? 1 : -1;
                entry.amount = n + 1 < row.total_orders ? row.order_size : row.diff - emitted;
                entry.delay_seconds = options.order_delay_seconds;
                emitted += entry.amount;
                plan.schedule.push_back(std::move(entry));
            }
        }
        cumulative += row.amount_deployed;
        row.cumulative_deployed = cumulative;
    }
    return plan;
}

}  // namespace rebal
