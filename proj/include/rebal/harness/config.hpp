#pragma once

#include <map>
#include <string>
#include <vector>

#include "rebal/trade_sizing.hpp"
#include "rebal/weights.hpp"

namespace rebal {

/// Chains with slow blocks trade less often: their assets only join every
/// modulus-th event.
struct NetworkConfig {
    std::string name;
    double interval_minutes = 1440.0;
    long modulus = 1;
};

/// Parsed key = value run configuration. Paths are resolved relative to the
/// config file location.
struct RunConfig {
    std::string prices_path;
    std::string sizing_path;
    std::string holdings_path;
    std::string output_dir = "out";

    WeightConfig weights;
    SizingConfig sizing;
    int stats_window = 90;
    int min_history = 30;

    double order_delay_seconds = 5.0;
    double impact_divisor = 1000.0;  // slippage = size^2 / (divisor * pool depth)
    double fill_noise = 0.0;         // max fraction of a sell that fails to realize
    unsigned long long seed = 0;

    std::vector<std::string> full_exit;
    std::map<std::string, std::string> asset_network;  // asset id -> network name
    std::map<std::string, NetworkConfig> networks;

    const NetworkConfig& network_for(const std::string& asset_id) const;
};

/// Loads and validates a run configuration. Unknown keys are rejected.
RunConfig load_config(const std::string& path);

}  // namespace rebal
