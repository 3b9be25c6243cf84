#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <iostream>

#include "brokersim/planner.hpp"
#include "brokersim/scenario.hpp"

using namespace brokersim;

namespace {

struct RunOptions {
    std::string scenario;
    std::optional<int> iterations;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 0;
};

struct PlanOptions {
    std::string demand;
    double peak = kDefaultPeakCustomers;
    std::string out;
};

std::string pm(const Estimate& e) {
    if (std::isnan(e.mean)) return "n/a";
    if (!e.half_width) return fmt::format("{:.2f}", e.mean);
    return fmt::format("{:.2f} +/- {:.2f}", e.mean, *e.half_width);
}

int cmd_run(const RunOptions& o) {
    ScenarioConfig config = resolve_scenario(o.scenario);
    if (o.iterations) config.iterations = *o.iterations;
    if (o.seed) config.seed = *o.seed;
    config.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const auto results = run_replications(config, config.iterations, config.seed, o.threads);
    const auto summary = aggregate(results, config.name);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    fmt::print("scenario {} ({}), {} replication(s), seeds {}..{}, {:.2f} s\n", config.name, config.description,
               summary.replications, config.seed, config.seed + summary.replications - 1, secs);
    if (!summary.times.empty()) {
        const std::size_t last = summary.times.size() - 1;
        for (std::size_t k = 0; k < summary.technologies.size(); ++k)
            fmt::print("  attached on {:<6} at t={:g}: {}\n", summary.technologies[k], summary.times[last],
                       pm(summary.flows_per_tech[last][k]));
        fmt::print("  mean per-flow throughput at end: {} bit/s\n", pm(summary.mean_flow_throughput[last]));
    }
    fmt::print("  handovers: {}\n  block events: {}\n", pm(summary.handovers), pm(summary.blocks));
    if (!o.out.empty()) {
        emit(summary, config, o.out);
        fmt::print("  wrote {}\n", o.out);
    }
    return 0;
}

int cmd_list() {
    for (const auto& name : preset_names()) {
        const auto c = preset(name);
        fmt::print("{:<12} {}\n", name, c.description);
    }
    return 0;
}

int cmd_plan(const PlanOptions& o) {
    const DemandProfile demand = o.demand.empty() ? synthetic_week(o.peak) : load_demand(o.demand);
    const auto rows = compare(demand);
    fmt::print("weekly demand: {} (peak/off-peak {:.2f})\n", o.demand.empty() ? "synthetic commuter week" : o.demand,
               peak_to_offpeak_ratio(demand));
    fmt::print("{}", format_comparison(rows));
    if (!o.out.empty()) {
        std::filesystem::create_directories(o.out);
        write_comparison_csv(rows, std::filesystem::path(o.out) / "comparison.csv");
        for (int strategy : {1, 2})
            for (bool broker : {false, true}) {
                const auto week = simulate_week(EconomicScenario::for_strategy(strategy, broker), demand);
                write_hourly_csv(week, std::filesystem::path(o.out) /
                                           fmt::format("hourly_s{}_{}.csv", strategy, broker ? "on" : "off"));
            }
        fmt::print("wrote {}\n", o.out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Brokerage service simulator for heterogeneous wireless access"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario preset or configuration file");
    run_cmd->add_option("scenario", run_opts.scenario, "Preset name or scenario file")->required();
    run_cmd->add_option("--iterations,-n", run_opts.iterations, "Replications (default from scenario)");
    run_cmd->add_option("--seed,-s", run_opts.seed, "Base seed (default from scenario)");
    run_cmd->add_option("--out,-o", run_opts.out, "Output directory for CSV files and summary");
    run_cmd->add_option("--threads,-j", run_opts.threads, "Worker threads (0 = all cores)");

    app.add_subcommand("list-presets", "List the built-in scenario presets");

    PlanOptions plan_opts;
    auto* plan_cmd = app.add_subcommand("plan", "Weekly techno-economic comparison of provider strategies");
    plan_cmd->add_option("--demand", plan_opts.demand, "CSV with hour,customers for hours 0..167");
    plan_cmd->add_option("--peak", plan_opts.peak, "Peak-hour customers of the synthetic week")
        ->check(CLI::NonNegativeNumber);
    plan_cmd->add_option("--out,-o", plan_opts.out, "Output directory for CSV reports");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run_cmd) return cmd_run(run_opts);
        if (app.got_subcommand("list-presets")) return cmd_list();
        if (*plan_cmd) return cmd_plan(plan_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
