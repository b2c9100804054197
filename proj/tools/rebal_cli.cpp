// Command-line front end: plan a single event, replay a flow schedule, or
// print the weight table for a date.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rebal/harness/config.hpp"
#include "rebal/harness/engine.hpp"
#include "rebal/harness/reports.hpp"

namespace {

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
}

int run_rebalance(const std::string& config_path, const std::string& date_text, double flow_value,
                  long event_index) {
    const rebal::RunConfig config = rebal::load_config(config_path);
    const rebal::HarnessData data = rebal::load_harness_data(config);
    const rebal::Date date = rebal::parse_date(date_text);
    const rebal::EventResult event =
        rebal::run_event(config, data, data.initial_quantities, date,
                         rebal::Usd::from_value(flow_value), event_index);
    print_warnings(event.warnings);
    const auto written =
        rebal::write_event_reports(config.output_dir, date.to_string(), event);
    for (const auto& path : written) {
        std::cout << path << '\n';
    }
    std::cout << "assets = " << event.plan.rows.size() << '\n'
              << "orders = " << event.plan.schedule.size() << '\n'
              << "budget = " << event.plan.totals.budget.to_string() << '\n';
    return 0;
}

int run_simulate(const std::string& config_path, const std::string& from_text,
                 const std::string& to_text, const std::string& flows_path) {
    const rebal::RunConfig config = rebal::load_config(config_path);
    const rebal::HarnessData data = rebal::load_harness_data(config);
    const auto flows = rebal::load_flow_schedule(flows_path);
    const rebal::SimulationResult result = rebal::simulate(
        config, data, rebal::parse_date(from_text), rebal::parse_date(to_text), flows);
    for (const auto& event : result.events) {
        print_warnings(event.warnings);
        char prefix[32];
        std::snprintf(prefix, sizeof(prefix), "event_%04ld_%s", event.event_index,
                      event.date.to_string().c_str());
        rebal::write_event_reports(config.output_dir, prefix, event);
    }
    const std::string summary = config.output_dir + "/summary.txt";
    rebal::write_summary(summary, result);
    std::cout << summary << '\n'
              << "events = " << result.events.size() << '\n'
              << "cash_residual = " << result.cash.to_string() << '\n';
    return 0;
}

int run_weights(const std::string& config_path, const std::string& date_text) {
    const rebal::RunConfig config = rebal::load_config(config_path);
    const rebal::HarnessData data = rebal::load_harness_data(config);
    std::vector<std::string> warnings;
    const auto rows =
        rebal::weight_table(config, data, rebal::parse_date(date_text), &warnings);
    print_warnings(warnings);
    std::filesystem::create_directories(config.output_dir);
    const std::string path = config.output_dir + "/" + date_text + "_weights.csv";
    rebal::write_weight_table(path, rows);
    std::cout << path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic portfolio rebalancing engine"};
    app.require_subcommand(1);

    std::string config_path, date_text, from_text, to_text, flows_path;
    double flow_value = 0.0;
    long event_index = 0;

    auto* rebalance = app.add_subcommand("rebalance", "Plan a single rebalancing event");
    rebalance->add_option("--config", config_path, "Run configuration file")->required();
    rebalance->add_option("--date", date_text, "Event date (YYYY-MM-DD)")->required();
    rebalance->add_option("--flow", flow_value, "Signed cash flow in USD")->required();
    rebalance->add_option("--event-index", event_index, "Event counter for network participation");

    auto* simulate = app.add_subcommand("simulate", "Replay a flow schedule over a date range");
    simulate->add_option("--config", config_path, "Run configuration file")->required();
    simulate->add_option("--from", from_text, "First date (YYYY-MM-DD)")->required();
    simulate->add_option("--to", to_text, "Last date (YYYY-MM-DD)")->required();
    simulate->add_option("--flows", flows_path, "date,flow_usd schedule")->required();

    auto* weights = app.add_subcommand("weights", "Print the weight table for a date");
    weights->add_option("--config", config_path, "Run configuration file")->required();
    weights->add_option("--date", date_text, "Valuation date (YYYY-MM-DD)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (rebalance->parsed()) {
            return run_rebalance(config_path, date_text, flow_value, event_index);
        }
        if (simulate->parsed()) {
            return run_simulate(config_path, from_text, to_text, flows_path);
        }
        return run_weights(config_path, date_text);
    } catch (const rebal::Error& e) {
        std::cerr << "error (" << rebal::category_name(e.category()) << "): " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(rebal::ErrorCategory::internal);
    }
}
