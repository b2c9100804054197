#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rebal/baseline.hpp"
#include "rebal/cascade.hpp"
#include "rebal/harness/config.hpp"
#include "rebal/market_data.hpp"

namespace rebal {

/// Market inputs loaded once per run.
struct HarnessData {
    std::vector<PriceSeries> prices;
    std::vector<SizingInputs> sizing;
    std::vector<std::pair<std::string, double>> initial_quantities;  // holdings file order
};

HarnessData load_harness_data(const RunConfig& config);

/// One row of the weight table for one event.
struct AssetWeightRow {
    std::string asset_id;
    double volatility = 0.0;
    double vvv_factor = 0.0;
    double vvv_volatility = 0.0;
    double variance = 0.0;
    double equal_w = 0.0;
    double min_variance_w = 0.0;
    double simple_parity_w = 0.0;
    double vvv_w = 0.0;
    double risk_parity_w = 0.0;
    double rp_minus_w = 0.0;
    double rp_plus_w = 0.0;
    double min_max_w = 0.0;   // NaN when the bounded solve is infeasible
    double no_short_w = 0.0;
    double min_weight_alt = 0.0;   // aggregated lower bound
    double min_weight = 0.0;       // raw minimum across candidate schemes
    double ideal_weight = 0.0;
    double max_weight = 0.0;       // aggregated upper bound
    double true_min_weight = 0.0;  // aggregation without the configured floor
    bool degenerate_volatility = false;
};

struct CostReport {
    long orders = 0;
    double gas_cost = 0.0;
    double slippage_cost = 0.0;
    double total_cost() const { return gas_cost + slippage_cost; }
};

struct EventResult {
    Date date;
    long event_index = 0;
    std::vector<std::string> warnings;          // excluded assets and scheme fallbacks
    std::vector<AssetWeightRow> weight_rows;    // participating assets, holdings order
    RebalancePlan plan;                          // after sell reconciliation
    RebalancePlan initial_plan;                  // before sell reconciliation
    SimplePlan simple;
    FillReport sell_fills;
    CostReport cascade_costs;
    CostReport simple_costs;
};

/// Asset ids whose network joins event N (N mod modulus == 0); fast networks
/// have modulus 1 and always join.
std::vector<std::string> participating_assets(const RunConfig& config,
                                              const std::vector<std::string>& asset_ids,
                                              long event_index);

/// Plans one event at `date` with signed cash flow `flow`.
///
/// `quantities` is the live portfolio (holdings order preserved); pass the
/// loaded initial quantities for a one-shot run. When `noise` is set, sell
/// fills lose a random fraction up to config.fill_noise and the buy side is
/// replanned against the realized proceeds; otherwise fills are exact.
EventResult run_event(const RunConfig& config, const HarnessData& data,
                      const std::vector<std::pair<std::string, double>>& quantities, Date date,
                      Usd flow, long event_index, std::mt19937_64* noise = nullptr);

/// Weight table only (no flow, no trading) for the given date.
std::vector<AssetWeightRow> weight_table(const RunConfig& config, const HarnessData& data,
                                         Date date, std::vector<std::string>* warnings = nullptr);

struct FlowEvent {
    Date date;
    Usd flow;
};

/// Reads a date,flow_usd schedule, ascending by date.
std::vector<FlowEvent> load_flow_schedule(const std::string& path);

struct SimulationResult {
    std::vector<EventResult> events;
    std::vector<std::pair<std::string, double>> final_quantities;
    Usd cash;  // external flow not absorbed by trades (plus sell shortfalls)
    CostReport cascade_costs;  // aggregate across events
    CostReport simple_costs;
};

/// Replays every flow event in [from, to]: plan, fill, reconcile, apply.
/// Fully deterministic for a fixed config (including seed).
SimulationResult simulate(const RunConfig& config, const HarnessData& data, Date from, Date to,
                          const std::vector<FlowEvent>& flows);

}  // namespace rebal
