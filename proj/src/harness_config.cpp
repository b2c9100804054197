#include "rebal/harness/config.hpp"

#include <filesystem>

#include "text_io.hpp"

namespace rebal {

namespace {

const NetworkConfig kDefaultNetwork{"default", 1440.0, 1};

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    for (const auto& item : detail::split_csv(value)) {
        const std::string trimmed = detail::trim(item);
        if (!trimmed.empty()) out.push_back(trimmed);
    }
    return out;
}

std::string resolve(const std::filesystem::path& base, const std::string& value) {
    std::filesystem::path p(value);
    if (p.is_absolute()) return p.string();
    return (base / p).string();
}

void validate(const RunConfig& config, const std::string& path) {
    auto bad = [&](const std::string& message) {
        fail(ErrorCategory::config, "config " + path + ": " + message);
    };
    if (config.prices_path.empty()) bad("missing required key 'prices'");
    if (config.sizing_path.empty()) bad("missing required key 'sizing'");
    if (config.holdings_path.empty()) bad("missing required key 'holdings'");
    if (config.stats_window < 2) bad("window must be at least 2");
    if (config.min_history < 2 || config.min_history > config.stats_window) {
        bad("min_history must be in [2, window]");
    }
    if (config.weights.theta < 0.0) bad("theta must be nonnegative");
    if (config.weights.min_asset_weight < 0.0) bad("min_asset_weight must be nonnegative");
    if (config.weights.max_asset_weight < config.weights.min_asset_weight) {
        bad("max_asset_weight must be at least min_asset_weight");
    }
    if (config.weights.rp_perturbation < 0.0) bad("rp_perturbation must be nonnegative");
    if (config.sizing.min_size_multiplier <= 0.0 || config.sizing.min_size_param <= 0.0 ||
        config.sizing.max_size_divisor <= 0.0 || config.sizing.max_size_param <= 0.0) {
        bad("trade sizing parameters must be positive");
    }
    if (config.order_delay_seconds < 0.0) bad("order_delay_seconds must be nonnegative");
    if (config.impact_divisor <= 0.0) bad("impact_divisor must be positive");
    if (config.fill_noise < 0.0 || config.fill_noise >= 1.0) {
        bad("fill_noise must be in [0, 1)");
    }
    for (const auto& [name, network] : config.networks) {
        if (network.interval_minutes <= 0.0) {
            bad("network '" + name + "' needs a positive interval");
        }
        if (network.modulus < 1) {
            bad("network '" + name + "' needs a modulus of at least 1");
        }
    }
    for (const auto& [asset, network] : config.asset_network) {
        if (!config.networks.count(network)) {
            bad("asset '" + asset + "' references unknown network '" + network + "'");
        }
    }
}

}  // namespace

const NetworkConfig& RunConfig::network_for(const std::string& asset_id) const {
    auto it = asset_network.find(asset_id);
    if (it == asset_network.end()) return kDefaultNetwork;
    return networks.at(it->second);
}

RunConfig load_config(const std::string& path) {
    const auto lines = detail::read_lines(path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    RunConfig config;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = "at " + path + ":" + std::to_string(i + 1);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorCategory::config, "expected key = value " + where);
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            fail(ErrorCategory::config, "empty key or value " + where);
        }

        if (key == "prices") {
            config.prices_path = resolve(base, value);
        } else if (key == "sizing") {
            config.sizing_path = resolve(base, value);
        } else if (key == "holdings") {
            config.holdings_path = resolve(base, value);
        } else if (key == "output_dir") {
            config.output_dir = resolve(base, value);
        } else if (key == "window") {
            config.stats_window = static_cast<int>(detail::parse_int(value, where));
        } else if (key == "min_history") {
            config.min_history = static_cast<int>(detail::parse_int(value, where));
        } else if (key == "theta") {
            config.weights.theta = detail::parse_double(value, where);
        } else if (key == "min_asset_weight") {
            config.weights.min_asset_weight = detail::parse_double(value, where);
        } else if (key == "max_asset_weight") {
            config.weights.max_asset_weight = detail::parse_double(value, where);
        } else if (key == "rp_perturbation") {
            config.weights.rp_perturbation = detail::parse_double(value, where);
        } else if (key == "min_size_multiplier") {
            config.sizing.min_size_multiplier = detail::parse_double(value, where);
        } else if (key == "min_size_param") {
            config.sizing.min_size_param = detail::parse_double(value, where);
        } else if (key == "max_size_divisor") {
            config.sizing.max_size_divisor = detail::parse_double(value, where);
        } else if (key == "max_size_param") {
            config.sizing.max_size_param = detail::parse_double(value, where);
        } else if (key == "order_delay_seconds") {
            config.order_delay_seconds = detail::parse_double(value, where);
        } else if (key == "impact_divisor") {
            config.impact_divisor = detail::parse_double(value, where);
        } else if (key == "fill_noise") {
            config.fill_noise = detail::parse_double(value, where);
        } else if (key == "seed") {
            config.seed = static_cast<unsigned long long>(detail::parse_int(value, where));
        } else if (key == "full_exit") {
            config.full_exit = split_list(value);
        } else if (key.rfind("network.", 0) == 0) {
            const std::size_t dot = key.find('.', 8);
            if (dot == std::string::npos) {
                fail(ErrorCategory::config, "bad network key '" + key + "' " + where);
            }
            const std::string name = key.substr(8, dot - 8);
            const std::string field = key.substr(dot + 1);
            NetworkConfig& network = config.networks[name];
            network.name = name;
            if (field == "interval_minutes") {
                network.interval_minutes = detail::parse_double(value, where);
            } else if (field == "modulus") {
                network.modulus = detail::parse_int(value, where);
            } else {
                fail(ErrorCategory::config, "unknown network field '" + field + "' " + where);
            }
        } else if (key.rfind("asset.", 0) == 0) {
            const std::size_t dot = key.find('.', 6);
            if (dot == std::string::npos || key.substr(dot + 1) != "network") {
                fail(ErrorCategory::config, "bad asset key '" + key + "' " + where);
            }
            config.asset_network[key.substr(6, dot - 6)] = value;
        } else {
            fail(ErrorCategory::config, "unknown key '" + key + "' " + where);
        }
    }
    validate(config, path);
    return config;
}

}  // namespace rebal
