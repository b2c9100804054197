// Synthetic market fixtures written to disk for harness-level tests.
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "rebal/dates.hpp"

namespace fixture {

struct AssetSpec {
    std::string id;
    int points = 300;
    std::uint64_t seed = 1;
    double gas = 25.0;
    double volume = 3e8;
    double depth = 1e8;
    double quantity = 100.0;
    bool flat_tail = false;  // hold the close constant over the last half
};

struct Market {
    std::filesystem::path dir;
    std::vector<rebal::Date> dates;  // full calendar, ascending
    std::string prices_path;
    std::string sizing_path;
    std::string holdings_path;

    std::string date_back(std::size_t offset_from_end) const {
        return dates[dates.size() - 1 - offset_from_end].to_string();
    }
};

// Geometric walk closes; every asset shares the calendar but may stop early.
inline Market write_market(const std::filesystem::path& dir,
                           const std::vector<AssetSpec>& specs, int calendar_days = 300) {
    std::filesystem::create_directories(dir);
    Market market;
    market.dir = dir;
    rebal::Date d{2024, 1, 1};
    for (int i = 0; i < calendar_days; ++i) {
        market.dates.push_back(d);
        d = rebal::next_day(d);
    }

    market.prices_path = (dir / "prices.csv").string();
    {
        std::ofstream out(market.prices_path, std::ios::binary);
        out << "asset,date,open,high,low,close\n";
        for (const auto& spec : specs) {
            std::mt19937_64 rng(spec.seed);
            std::normal_distribution<double> shock(0.0003, 0.02);
            double close = 50.0 + static_cast<double>(spec.seed % 7) * 10.0;
            for (int i = 0; i < spec.points && i < calendar_days; ++i) {
                const bool flat = spec.flat_tail && i >= spec.points / 2;
                if (!flat) close *= std::exp(shock(rng));
                out << spec.id << ',' << market.dates[static_cast<std::size_t>(i)].to_string()
                    << ',' << close * 0.999 << ',' << close * 1.001 << ',' << close * 0.998
                    << ',' << close << '\n';
            }
        }
    }

    market.sizing_path = (dir / "sizing.csv").string();
    {
        std::ofstream out(market.sizing_path, std::ios::binary);
        out << "asset,avg_gas_fees,avg_daily_volume,liquidity_pool_depth\n";
        for (const auto& spec : specs) {
            out << spec.id << ',' << spec.gas << ',' << spec.volume << ',' << spec.depth
                << '\n';
        }
    }

    market.holdings_path = (dir / "holdings.csv").string();
    {
        std::ofstream out(market.holdings_path, std::ios::binary);
        out << "asset,quantity\n";
        for (const auto& spec : specs) {
            out << spec.id << ',' << spec.quantity << '\n';
        }
    }
    return market;
}

inline std::string write_config(const Market& market, const std::string& name,
                                const std::vector<std::string>& extra_lines = {}) {
    const std::string path = (market.dir / name).string();
    std::ofstream out(path, std::ios::binary);
    out << "# synthetic run\n"
        << "prices = prices.csv\n"
        << "sizing = sizing.csv\n"
        << "holdings = holdings.csv\n"
        << "output_dir = out\n";
    for (const auto& line : extra_lines) out << line << '\n';
    return path;
}

inline std::string write_flows(const Market& market, const std::string& name,
                               const std::vector<std::pair<std::string, double>>& rows) {
    const std::string path = (market.dir / name).string();
    std::ofstream out(path, std::ios::binary);
    out << "date,flow_usd\n";
    for (const auto& [date, flow] : rows) out << date << ',' << flow << '\n';
    return path;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace fixture
