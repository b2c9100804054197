#include "rebal/harness/reports.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "rebal/errors.hpp"

namespace rebal {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        fail(ErrorCategory::internal, "failed to format a double");
    }
    return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // keep \n endings everywhere
    if (!out) {
        fail(ErrorCategory::io, "cannot write file: " + path);
    }
    return out;
}

constexpr const char* kWeightHeader =
    "AssetName,Volatility,vvvFactor,VVV,Variance,EqualWeight,MinVarianceWeight,"
    "SimpleParityWeight,vvvWeight,riskParityWeight,riskParityWeight-2%,riskParityWeight+2%,"
    "minMaxWeight,noShortWeight,minWeightAlt,minWeight,idealWeight,maxWeight,trueMinWeight";

constexpr const char* kCascadeHeader =
    "AssetName,minMaxActualNotionalDiff,rebalanceDelta,buyIndicator,capRankCrudeDec,"
    "capRankCrudeInc,capacityRank,rawCapacityAlreadyFilled,capacityAlreadyFilled,"
    "rawCapacityInclusive,capacityInclusive,capacityIndicator,capacityToFill,AbsCapacityToFill,"
    "minNumberOrders,minBlockSizeInd,additionalOrders,Buy or Sell,totalOrders,orderSize,"
    "orderSchedule,amountDeployed,cummTotalDeployed,altCapacityToFill,altMinNumberOfOrders,"
    "rebalanceDeltaAdusted";

constexpr const char* kSimpleHeader =
    "AssetName,idealActualNotionalDiff,absIdealActDiff,newMinDeploy,newIdealDeploy,"
    "newMaxDeploy,minBlockSize,maxBlockSize,minNumberOrders,minBlockSizeInd,additionalOrders,"
    "Buy or Sell,totalOrders,orderSize,orderSchedule,amountDeployed,cummTotalDeployed";

}  // namespace

void write_weight_table(const std::string& path, const std::vector<AssetWeightRow>& rows) {
    auto out = open_out(path);
    out << kWeightHeader << '\n';
    for (const auto& r : rows) {
        out << r.asset_id << ',' << format_double(r.volatility) << ','
            << format_double(r.vvv_factor) << ',' << format_double(r.vvv_volatility) << ','
            << format_double(r.variance) << ',' << format_double(r.equal_w) << ','
            << format_double(r.min_variance_w) << ',' << format_double(r.simple_parity_w) << ','
            << format_double(r.vvv_w) << ',' << format_double(r.risk_parity_w) << ','
            << format_double(r.rp_minus_w) << ',' << format_double(r.rp_plus_w) << ','
            << format_double(r.min_max_w) << ',' << format_double(r.no_short_w) << ','
            << format_double(r.min_weight_alt) << ',' << format_double(r.min_weight) << ','
            << format_double(r.ideal_weight) << ',' << format_double(r.max_weight) << ','
            << format_double(r.true_min_weight) << '\n';
    }
}

void write_cascade_table(const std::string& path, const RebalancePlan& plan) {
    auto out = open_out(path);
    out << kCascadeHeader << '\n';
    std::vector<std::size_t> order(plan.rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return plan.rows[a].cap_rank < plan.rows[b].cap_rank;
    });
    for (std::size_t i : order) {
        const AssetPlanRow& r = plan.rows[i];
        out << r.asset_id << ',' << r.diff.to_string() << ',' << r.rebalance_delta.to_string()
            << ',' << (r.buy ? 1 : 0) << ',' << r.rank_desc << ',' << r.rank_asc << ','
            << r.cap_rank << ',' << r.raw_cap_filled.to_string() << ','
            << r.bound_cap_filled.to_string() << ',' << r.raw_cap_inclusive.to_string() << ','
            << r.cap_inclusive.to_string() << ',' << (r.cap_to_fill.is_zero() ? 0 : 1) << ','
            << r.cap_to_fill.to_string() << ',' << r.cap_to_fill.abs().to_string() << ','
            << r.min_orders << ',' << r.min_block_size_ind << ',' << r.additional_orders << ','
            << (r.buy ? "Buy" : "Sell") << ',' << r.total_orders << ','
            << r.order_size.to_string() << ',' << r.order_schedule << ','
            << r.amount_deployed.to_string() << ',' << r.cumulative_deployed.to_string() << ','
            << r.alt_cap_to_fill.to_string() << ',' << r.alt_min_orders << ','
            << r.rebalance_delta_adjusted.to_string() << '\n';
    }
}

void write_simple_table(const std::string& path, const SimplePlan& plan) {
    auto out = open_out(path);
    out << kSimpleHeader << '\n';
    std::vector<std::size_t> order(plan.rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const SimplePlanRow& ra = plan.rows[a];
        const SimplePlanRow& rb = plan.rows[b];
        if (ra.buy != rb.buy) return !ra.buy;
        if (ra.diff != rb.diff) return ra.buy ? rb.diff < ra.diff : ra.diff < rb.diff;
        return a < b;
    });
    for (std::size_t i : order) {
        const SimplePlanRow& r = plan.rows[i];
        out << r.asset_id << ',' << r.diff.to_string() << ',' << r.diff.abs().to_string() << ','
            << r.min_deploy.to_string() << ',' << r.ideal_deploy.to_string() << ','
            << r.max_deploy.to_string() << ',' << r.min_block.to_string() << ','
            << r.max_block.to_string() << ',' << r.min_orders << ',' << r.min_block_size_ind
            << ',' << r.additional_orders << ',' << (r.buy ? "Buy" : "Sell") << ','
            << r.total_orders << ',' << r.order_size.to_string() << ',' << r.order_schedule
            << ',' << r.amount_deployed.to_string() << ',' << r.cumulative_deployed.to_string()
            << '\n';
    }
}

void write_schedule(const std::string& path, const std::vector<ScheduleEntry>& schedule) {
    auto out = open_out(path);
    out << "sequence,asset,side,amount,delay_seconds\n";
    for (const auto& entry : schedule) {
        out << entry.sequence << ',' << entry.asset_id << ','
            << (entry.side > 0 ? "Buy" : "Sell") << ',' << entry.amount.to_string() << ','
            << format_double(entry.delay_seconds) << '\n';
    }
}

void write_costs(const std::string& path, const CostReport& cascade, const CostReport& simple) {
    auto out = open_out(path);
    out << "cascade_orders = " << cascade.orders << '\n'
        << "cascade_gas_cost = " << format_double(cascade.gas_cost) << '\n'
        << "cascade_slippage_cost = " << format_double(cascade.slippage_cost) << '\n'
        << "cascade_total_cost = " << format_double(cascade.total_cost()) << '\n'
        << "simple_orders = " << simple.orders << '\n'
        << "simple_gas_cost = " << format_double(simple.gas_cost) << '\n'
        << "simple_slippage_cost = " << format_double(simple.slippage_cost) << '\n'
        << "simple_total_cost = " << format_double(simple.total_cost()) << '\n';
}

std::vector<std::string> write_event_reports(const std::string& directory,
                                             const std::string& prefix,
                                             const EventResult& event) {
    std::filesystem::create_directories(directory);
    const std::string base = directory + "/" + prefix;
    std::vector<std::string> written;
    write_weight_table(base + "_weights.csv", event.weight_rows);
    written.push_back(base + "_weights.csv");
    write_cascade_table(base + "_cascade_plan.csv", event.plan);
    written.push_back(base + "_cascade_plan.csv");
    write_simple_table(base + "_simple_plan.csv", event.simple);
    written.push_back(base + "_simple_plan.csv");
    write_schedule(base + "_schedule.csv", event.plan.schedule);
    written.push_back(base + "_schedule.csv");
    write_costs(base + "_costs.txt", event.cascade_costs, event.simple_costs);
    written.push_back(base + "_costs.txt");
    return written;
}

void write_summary(const std::string& path, const SimulationResult& result) {
    auto out = open_out(path);
    out << "events = " << result.events.size() << '\n'
        << "cash_residual = " << result.cash.to_string() << '\n'
        << "cascade_orders = " << result.cascade_costs.orders << '\n'
        << "cascade_gas_cost = " << format_double(result.cascade_costs.gas_cost) << '\n'
        << "cascade_slippage_cost = " << format_double(result.cascade_costs.slippage_cost) << '\n'
        << "cascade_total_cost = " << format_double(result.cascade_costs.total_cost()) << '\n'
        << "simple_orders = " << result.simple_costs.orders << '\n'
        << "simple_gas_cost = " << format_double(result.simple_costs.gas_cost) << '\n'
        << "simple_slippage_cost = " << format_double(result.simple_costs.slippage_cost) << '\n'
        << "simple_total_cost = " << format_double(result.simple_costs.total_cost()) << '\n';
    out << "final_quantities:\n";
    for (const auto& [asset, quantity] : result.final_quantities) {
        out << "  " << asset << " = " << format_double(quantity) << '\n';
    }
}

}  // namespace rebal
