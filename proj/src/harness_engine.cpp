#include "rebal/harness/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "text_io.hpp"

namespace rebal {

namespace {

std::vector<SizingInputs> load_sizing_file(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) {
        fail(ErrorCategory::parse, "empty sizing file: " + path);
    }
    const auto header = detail::split_csv(detail::lower(lines[0]));
    if (header.size() != 4 || detail::trim(header[0]) != "asset") {
        fail(ErrorCategory::parse,
             "unrecognized sizing header in " + path +
                 " (want asset,avg_gas_fees,avg_daily_volume,liquidity_pool_depth)");
    }
    std::vector<SizingInputs> out;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        const std::string where = "at " + path + ":" + std::to_string(i + 1);
        const auto fields = detail::split_csv(lines[i]);
        if (fields.size() != 4) {
            fail(ErrorCategory::parse, "malformed sizing row " + where);
        }
        SizingInputs s;
        s.asset_id = detail::trim(fields[0]);
        s.avg_gas_fees = detail::parse_double(fields[1], where);
        s.avg_daily_volume = detail::parse_double(fields[2], where);
        s.liquidity_pool_depth = detail::parse_double(fields[3], where);
        if (!seen.insert(s.asset_id).second) {
            fail(ErrorCategory::validation, "duplicate sizing row for '" + s.asset_id + "'");
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::pair<std::string, double>> load_holdings_file(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) {
        fail(ErrorCategory::parse, "empty holdings file: " + path);
    }
    const auto header = detail::split_csv(detail::lower(lines[0]));
    if (header.size() != 2 || detail::trim(header[0]) != "asset") {
        fail(ErrorCategory::parse,
             "unrecognized holdings header in " + path + " (want asset,quantity)");
    }
    std::vector<std::pair<std::string, double>> out;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        const std::string where = "at " + path + ":" + std::to_string(i + 1);
        const auto fields = detail::split_csv(lines[i]);
        if (fields.size() != 2) {
            fail(ErrorCategory::parse, "malformed holdings row " + where);
        }
        const std::string asset = detail::trim(fields[0]);
        const double quantity = detail::parse_double(fields[1], where);
        if (quantity < 0.0) {
            fail(ErrorCategory::validation, "negative quantity for '" + asset + "' " + where);
        }
        if (!seen.insert(asset).second) {
            fail(ErrorCategory::validation, "duplicate holdings row for '" + asset + "'");
        }
        out.emplace_back(asset, quantity);
    }
    if (out.empty()) {
        fail(ErrorCategory::parse, "holdings file has no data rows: " + path);
    }
    return out;
}

}  // namespace

HarnessData load_harness_data(const RunConfig& config) {
    HarnessData data;
    data.prices = load_price_series(config.prices_path);
    data.sizing = load_sizing_file(config.sizing_path);
    data.initial_quantities = load_holdings_file(config.holdings_path);

    std::set<std::string> priced, sized;
    for (const auto& p : data.prices) priced.insert(p.asset_id);
    for (const auto& s : data.sizing) sized.insert(s.asset_id);
    for (const auto& [asset, quantity] : data.initial_quantities) {
        (void)quantity;
        if (!priced.count(asset)) {
            fail(ErrorCategory::validation, "held asset '" + asset + "' has no price data");
        }
        if (!sized.count(asset)) {
            fail(ErrorCategory::validation, "held asset '" + asset + "' has no sizing data");
        }
    }
    for (const auto& asset : config.full_exit) {
        if (!std::any_of(data.initial_quantities.begin(), data.initial_quantities.end(),
                         [&](const auto& q) { return q.first == asset; })) {
            fail(ErrorCategory::validation, "full-exit asset '" + asset + "' is not held");
        }
    }
    return data;
}

std::vector<std::string> participating_assets(const RunConfig& config,
                                              const std::vector<std::string>& asset_ids,
                                              long event_index) {
    if (event_index < 0) {
        fail(ErrorCategory::validation, "event index must be nonnegative");
    }
    std::vector<std::string> out;
    for (const auto& id : asset_ids) {
        const NetworkConfig& network = config.network_for(id);
        if (event_index % network.modulus == 0) out.push_back(id);
    }
    return out;
}

namespace {

struct WeightBlock {
    std::vector<std::string> ids;  // survivors, input order
    std::vector<AssetWeightRow> rows;
    std::vector<WeightBounds> bounds;
    std::vector<double> close_at_date;  // aligned with ids
};

const PriceSeries* find_series(const HarnessData& data, const std::string& id) {
    for (const auto& s : data.prices) {
        if (s.asset_id == id) return &s;
    }
    return nullptr;
}

const SizingInputs* find_sizing(const HarnessData& data, const std::string& id) {
    for (const auto& s : data.sizing) {
        if (s.asset_id == id) return &s;
    }
    return nullptr;
}

// Risk stats, weight schemes and aggregated bounds for every asset that has
// usable data at `date`. Assets that cannot trade are dropped with a warning.
WeightBlock compute_weight_block(const RunConfig& config, const HarnessData& data,
                                 const std::vector<std::string>& asset_ids, Date date,
                                 bool require_sizing, std::vector<std::string>& warnings) {
    struct Survivor {
        std::string id;
        ReturnSeries returns;
        RiskStats stats;
        double close = 0.0;
    };
    std::vector<Survivor> survivors;
    auto drop = [&](const std::string& id, const std::string& why) {
        warnings.push_back("excluded '" + id + "': " + why);
    };

    for (const auto& id : asset_ids) {
        const PriceSeries* series = find_series(data, id);
        if (series == nullptr) {
            fail(ErrorCategory::validation, "asset '" + id + "' has no price data");
        }
        if (require_sizing && find_sizing(data, id) == nullptr) {
            fail(ErrorCategory::validation, "asset '" + id + "' has no sizing data");
        }
        PriceSeries trimmed;
        trimmed.asset_id = id;
        for (const auto& p : series->points) {
            if (p.date <= date) trimmed.points.push_back(p);
        }
        if (trimmed.points.empty() || trimmed.points.back().date != date) {
            drop(id, "no price at " + date.to_string());
            continue;
        }
        Survivor s;
        s.id = id;
        s.close = trimmed.points.back().close;
        try {
            s.returns = log_returns(trimmed);
            const auto stats =
                rolling_stats(s.returns, config.stats_window, config.min_history);
            const auto vvv = vvv_adjusted_volatility(stats, config.stats_window,
                                                     config.weights.theta, config.min_history);
            const auto at_date =
                std::find_if(vvv.begin(), vvv.end(),
                             [&](const RiskStats& r) { return r.date == date; });
            if (at_date == vvv.end()) {
                drop(id, "history too short for stats at " + date.to_string());
                continue;
            }
            s.stats = *at_date;
        } catch (const Error& e) {
            if (e.category() == ErrorCategory::insufficient_data) {
                drop(id, e.what());
                continue;
            }
            throw;
        }
        if (!(s.stats.volatility > 0.0) || !(s.stats.vvv_volatility > 0.0)) {
            drop(id, "degenerate volatility at " + date.to_string());
            continue;
        }
        if (require_sizing) {
            try {
                size_bounds(*find_sizing(data, id), config.sizing);
            } catch (const Error& e) {
                if (e.category() == ErrorCategory::infeasible ||
                    e.category() == ErrorCategory::validation) {
                    drop(id, e.what());
                    continue;
                }
                throw;
            }
        }
        survivors.push_back(std::move(s));
    }
    if (survivors.empty()) {
        fail(ErrorCategory::insufficient_data,
             "no asset has usable data at " + date.to_string());
    }

    // Full-exit assets are forced to zero weight, so the schemes run over the
    // remaining assets only and those weights sum to one.
    std::vector<bool> full_exit(survivors.size(), false);
    std::vector<std::size_t> scheme_index;
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        full_exit[i] = std::find(config.full_exit.begin(), config.full_exit.end(),
                                 survivors[i].id) != config.full_exit.end();
        if (!full_exit[i]) scheme_index.push_back(i);
    }
    if (scheme_index.empty()) {
        fail(ErrorCategory::insufficient_data,
             "every tradable asset is marked full-exit at " + date.to_string());
    }

    const std::size_t k = scheme_index.size();
    std::vector<ReturnSeries> returns;
    std::vector<double> vol(k), vvv_vol(k);
    returns.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const Survivor& s = survivors[scheme_index[j]];
        returns.push_back(s.returns);
        vol[j] = s.stats.volatility;
        vvv_vol[j] = s.stats.vvv_volatility;
    }
    const CovarianceMatrix cov =
        k == 1 ? CovarianceMatrix{{returns[0].asset_id},
                                  Eigen::MatrixXd::Constant(1, 1, vol[0] * vol[0]), 0}
               : covariance_matrix(returns, config.stats_window, config.min_history);

    const auto equal = equal_weights(k);
    const auto parity = inverse_measure_weights(vol);
    const auto vvv_w = inverse_measure_weights(vvv_vol);
    const auto min_var = min_variance_weights(cov.values);
    const auto rp = risk_parity_weights(cov.values, config.weights);
    const auto rp_minus = perturbed_weights(rp, -config.weights.rp_perturbation);
    const auto rp_plus = perturbed_weights(rp, config.weights.rp_perturbation);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> min_max_w(k, nan), no_short_w(k, nan);
    try {
        min_max_w = constrained_min_variance_weights(
            cov.values, std::vector<double>(k, config.weights.min_asset_weight),
            std::vector<double>(k, config.weights.max_asset_weight), config.weights);
    } catch (const Error& e) {
        if (e.category() != ErrorCategory::infeasible) throw;
        warnings.push_back(std::string("bounded min-variance unavailable: ") + e.what());
    }
    try {
        no_short_w = constrained_min_variance_weights(
            cov.values, std::vector<double>(k, 0.0),
            std::vector<double>(k, std::numeric_limits<double>::infinity()), config.weights);
    } catch (const Error& e) {
        if (e.category() != ErrorCategory::infeasible) throw;
        warnings.push_back(std::string("no-short min-variance unavailable: ") + e.what());
    }

    const std::vector<std::vector<double>> candidates{equal,  min_var, parity, vvv_w,
                                                      rp,     rp_minus, rp_plus};
    const auto scheme_bounds =
        aggregate_weight_bounds(candidates, vvv_w, config.weights);

    WeightBlock block;
    block.rows.resize(survivors.size());
    block.bounds.resize(survivors.size());
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        block.ids.push_back(survivors[i].id);
        block.close_at_date.push_back(survivors[i].close);
        AssetWeightRow& row = block.rows[i];
        row.asset_id = survivors[i].id;
        row.volatility = survivors[i].stats.volatility;
        row.vvv_factor = survivors[i].stats.vvv_factor;
        row.vvv_volatility = survivors[i].stats.vvv_volatility;
        row.variance = survivors[i].stats.variance;
        row.degenerate_volatility = survivors[i].stats.degenerate_volatility;
        if (row.degenerate_volatility) {
            warnings.push_back("asset '" + row.asset_id +
                               "' hit a zero volatility inside a vol-of-vol window");
        }
        if (full_exit[i]) {
            block.bounds[i] = WeightBounds{0.0, 0.0, 0.0, true};
            continue;  // weight columns stay zero: the position is being closed
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t i = scheme_index[j];
        AssetWeightRow& row = block.rows[i];
        row.equal_w = equal[j];
        row.min_variance_w = min_var[j];
        row.simple_parity_w = parity[j];
        row.vvv_w = vvv_w[j];
        row.risk_parity_w = rp[j];
        row.rp_minus_w = rp_minus[j];
        row.rp_plus_w = rp_plus[j];
        row.min_max_w = min_max_w[j];
        row.no_short_w = no_short_w[j];
        double lo = candidates[0][j];
        for (const auto& c : candidates) lo = std::min(lo, c[j]);
        row.min_weight = lo;
        row.min_weight_alt = scheme_bounds[j].min_w;
        row.ideal_weight = scheme_bounds[j].ideal_w;
        row.max_weight = scheme_bounds[j].max_w;
        row.true_min_weight = std::max(lo, 0.0);  // band floor absent the configured minimum
        block.bounds[i] = scheme_bounds[j];
    }
    return block;
}

CostReport schedule_costs(const std::vector<ScheduleEntry>& schedule, const HarnessData& data,
                          const RunConfig& config) {
    CostReport costs;
    for (const auto& entry : schedule) {
        const SizingInputs* sizing = find_sizing(data, entry.asset_id);
        if (sizing == nullptr) {
            fail(ErrorCategory::internal, "scheduled asset '" + entry.asset_id + "' has no sizing");
        }
        costs.orders += 1;
        costs.gas_cost += sizing->avg_gas_fees;
        const double size = entry.amount.value();
        costs.slippage_cost += size * size / (config.impact_divisor * sizing->liquidity_pool_depth);
    }
    return costs;
}

FillReport make_sell_fills(const RebalancePlan& plan, double fill_noise,
                           std::mt19937_64* noise) {
    FillReport fills;
    for (const auto& entry : plan.schedule) {
        if (entry.side >= 0) continue;
        FillRecord record;
        record.sequence = entry.sequence;
        record.asset_id = entry.asset_id;
        record.placed_abs = entry.amount.abs();
        if (noise != nullptr && fill_noise > 0.0) {
            std::uniform_real_distribution<double> lost(0.0, fill_noise);
            record.realized_abs = record.placed_abs.scaled(1.0 - lost(*noise));
        } else {
            record.realized_abs = record.placed_abs;
        }
        record.failed = record.realized_abs.is_zero() && !record.placed_abs.is_zero();
        fills.records.push_back(std::move(record));
    }
    return fills;
}

}  // namespace

std::vector<AssetWeightRow> weight_table(const RunConfig& config, const HarnessData& data,
                                         Date date, std::vector<std::string>* warnings) {
    std::vector<std::string> local;
    std::vector<std::string> ids;
    for (const auto& [asset, quantity] : data.initial_quantities) {
        (void)quantity;
        ids.push_back(asset);
    }
    WeightBlock block = compute_weight_block(config, data, ids, date, false, local);
    if (warnings != nullptr) *warnings = std::move(local);
    return std::move(block.rows);
}

EventResult run_event(const RunConfig& config, const HarnessData& data,
                      const std::vector<std::pair<std::string, double>>& quantities, Date date,
                      Usd flow, long event_index, std::mt19937_64* noise) {
    EventResult result;
    result.date = date;
    result.event_index = event_index;

    std::vector<std::string> ids;
    for (const auto& [asset, quantity] : quantities) {
        (void)quantity;
        ids.push_back(asset);
    }
    const auto participating = participating_assets(config, ids, event_index);
    if (participating.empty()) {
        fail(ErrorCategory::insufficient_data,
             "no network participates in event " + std::to_string(event_index));
    }
    WeightBlock block =
        compute_weight_block(config, data, participating, date, true, result.warnings);
    result.weight_rows = block.rows;

    std::map<std::string, double> quantity_of;
    for (const auto& [asset, quantity] : quantities) quantity_of[asset] = quantity;

    std::vector<Holding> holdings;
    std::vector<TradeSizeBounds> sizes;
    std::vector<std::string> full_exit_ids;
    holdings.reserve(block.ids.size());
    for (std::size_t i = 0; i < block.ids.size(); ++i) {
        const std::string& id = block.ids[i];
        holdings.push_back(make_holding(id, quantity_of.at(id), block.close_at_date[i]));
        sizes.push_back(size_bounds(*find_sizing(data, id), config.sizing));
        if (block.bounds[i].full_exit) full_exit_ids.push_back(id);
    }

    const EventContext context =
        prepare_event(std::move(holdings), flow, full_exit_ids, event_index);
    const PlanOptions options{config.order_delay_seconds};
    result.initial_plan = plan_event(context, block.bounds, sizes, options);
    result.sell_fills = make_sell_fills(result.initial_plan, config.fill_noise, noise);
    result.plan = adjust_after_sells(result.initial_plan, sizes, result.sell_fills, options);
    result.simple = simple_plan(context, block.bounds, sizes, options);
    result.cascade_costs = schedule_costs(result.plan.schedule, data, config);
    result.simple_costs = schedule_costs(result.simple.schedule, data, config);
    return result;
}

std::vector<FlowEvent> load_flow_schedule(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) {
        fail(ErrorCategory::parse, "empty flow schedule: " + path);
    }
    const auto header = detail::split_csv(detail::lower(lines[0]));
    if (header.size() != 2 || detail::trim(header[0]) != "date") {
        fail(ErrorCategory::parse,
             "unrecognized flow header in " + path + " (want date,flow_usd)");
    }
    std::vector<FlowEvent> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        const std::string where = "at " + path + ":" + std::to_string(i + 1);
        const auto fields = detail::split_csv(lines[i]);
        if (fields.size() != 2) {
            fail(ErrorCategory::parse, "malformed flow row " + where);
        }
        FlowEvent event;
        event.date = parse_date(detail::trim(fields[0]));
        event.flow = Usd::from_value(detail::parse_double(fields[1], where));
        if (!out.empty() && !(out.back().date < event.date)) {
            fail(ErrorCategory::validation, "flow dates must be strictly ascending " + where);
        }
        out.push_back(event);
    }
    return out;
}

SimulationResult simulate(const RunConfig& config, const HarnessData& data, Date from, Date to,
                          const std::vector<FlowEvent>& flows) {
    if (to < from) {
        fail(ErrorCategory::validation, "simulation range is empty");
    }
    SimulationResult result;
    result.final_quantities = data.initial_quantities;
    std::mt19937_64 rng(config.seed);
    std::mt19937_64* noise = config.fill_noise > 0.0 ? &rng : nullptr;

    long event_index = 0;
    for (const auto& flow_event : flows) {
        if (flow_event.date < from || to < flow_event.date) continue;
        EventResult event = run_event(config, data, result.final_quantities, flow_event.date,
                                      flow_event.flow, event_index, noise);

        // Buys fill exactly; sells realize what the fill report says.
        std::map<long, Usd> realized_sell;
        for (const auto& record : event.sell_fills.records) {
            realized_sell[record.sequence] = record.realized_abs;
        }
        std::map<std::string, Usd> amount_delta;
        Usd traded_net;
        for (const auto& entry : event.plan.schedule) {
            Usd applied;
            if (entry.side > 0) {
                applied = entry.amount;
            } else {
                applied = -realized_sell.at(entry.sequence);
            }
            amount_delta[entry.asset_id] += applied;
            traded_net += applied;
        }
        result.cash += flow_event.flow - traded_net;

        std::map<std::string, double> close_of;
        for (const auto& row : event.plan.context.holdings) {
            close_of[row.asset_id] = row.price;
        }
        for (auto& [asset, quantity] : result.final_quantities) {
            auto it = amount_delta.find(asset);
            if (it == amount_delta.end() || it->second.is_zero()) continue;
            const double price = close_of.at(asset);
            const Usd before = Usd::from_value(quantity * price);
            const Usd after = before + it->second;
            quantity = after.value() / price;
        }

        result.cascade_costs.orders += event.cascade_costs.orders;
        result.cascade_costs.gas_cost += event.cascade_costs.gas_cost;
        result.cascade_costs.slippage_cost += event.cascade_costs.slippage_cost;
        result.simple_costs.orders += event.simple_costs.orders;
        result.simple_costs.gas_cost += event.simple_costs.gas_cost;
        result.simple_costs.slippage_cost += event.simple_costs.slippage_cost;
        result.events.push_back(std::move(event));
        ++event_index;
    }
    if (result.events.empty()) {
        fail(ErrorCategory::validation, "no flow events fall inside the simulation range");
    }
    return result;
}

}  // namespace rebal
