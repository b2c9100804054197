#pragma once

#include <string>
#include <vector>

#include "rebal/harness/engine.hpp"

namespace rebal {

/// Shortest round-trip decimal rendering (deterministic across runs).
std::string format_double(double value);

void write_weight_table(const std::string& path, const std::vector<AssetWeightRow>& rows);

/// One row per asset in execution order, every engine column included.
void write_cascade_table(const std::string& path, const RebalancePlan& plan);

void write_simple_table(const std::string& path, const SimplePlan& plan);

void write_schedule(const std::string& path, const std::vector<ScheduleEntry>& schedule);

/// key = value cost aggregates for both mechanisms.
void write_costs(const std::string& path, const CostReport& cascade, const CostReport& simple);

/// Writes the four per-event files plus costs under `directory` with the given
/// file name prefix; returns the paths written.
std::vector<std::string> write_event_reports(const std::string& directory,
                                             const std::string& prefix,
                                             const EventResult& event);

void write_summary(const std::string& path, const SimulationResult& result);

}  // namespace rebal
