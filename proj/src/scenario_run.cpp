#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "brokersim/scenario.hpp"

namespace brokersim {

namespace {

std::vector<MobilityPlan> trace_plans(const ScenarioConfig& c, std::uint64_t seed) {
    if (!c.mobility_trace.empty()) {
        std::ifstream in(c.mobility_trace);
        if (!in) throw ScenarioError(c.mobility_trace + ": cannot open mobility trace");
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            return parse_bonnmotion(ss.str());
        } catch (const ParseError& e) {
            throw ScenarioError(c.mobility_trace + ": " + e.what());
        }
    }
    auto params = *c.random_waypoint;
    params.nodes = c.static_terminals + c.mobile_terminals;
    params.duration = c.duration;
    std::vector<MobilityPlan> plans;
    // Decorrelate the mobility stream from the engine stream of the same seed.
    for (auto& trace : random_waypoint(params, seed ^ 0x9e3779b97f4a7c15ULL)) plans.emplace_back(std::move(trace));
    return plans;
}

}  // namespace

std::vector<TerminalSpec> build_terminals(const ScenarioConfig& c, std::uint64_t seed) {
    std::vector<TerminalSpec> out;
    auto add = [&](Position origin, MobilityPlan plan, double start) {
        out.push_back(TerminalSpec{origin, std::move(plan), 0, start, c.cbr_rate, c.traffic_type});
    };
    auto arrival = [&](std::size_t i) { return c.first_arrival + static_cast<double>(i) * c.arrival_interval; };

    if (!c.mobility_trace.empty() || c.random_waypoint) {
        for (auto& plan : trace_plans(c, seed)) {
            const Position origin = std::get<WaypointTrace>(plan).points.front().pos;
            add(origin, std::move(plan), arrival(out.size()));
        }
    } else {
        for (int i = 0; i < c.mobile_terminals; ++i) {
            const Position origin = i % 2 == 0 ? c.mobile.left_start : c.mobile.right_start;
            const double start = c.mobile.first_start + (i / 2) * c.mobile.pair_interval;
            add(origin, LinearTo{c.mobile.dest, c.mobile.speed, start}, arrival(out.size()));
        }
        for (int i = 0; i < c.static_terminals; ++i) add(c.static_position, Static{}, arrival(out.size()));
    }
    for (const auto& crowd : c.flash_crowds)
        for (int i = 0; i < crowd.size; ++i) add(c.static_position, Static{}, crowd.time);
    return out;
}

EngineConfig engine_config(const ScenarioConfig& c) {
    EngineConfig e;
    e.tick = c.tick;
    e.duration = c.duration;
    e.record_interval = c.record_interval;
    e.broker_enabled = c.broker_enabled;
    e.default_technology = c.default_technology;
    e.policy = c.policy;
    e.probe = c.probe;
    e.agent = c.agent;
    return e;
}

RunResult run(const ScenarioConfig& config, std::uint64_t seed) {
    config.validate();
    Engine engine(engine_config(config), config.technologies, config.naps, build_terminals(config, seed), seed);
    engine.run_to_end();
    return engine.take_result();
}

std::vector<RunResult> run_replications(const ScenarioConfig& config, int iterations, std::uint64_t seed,
                                        unsigned threads) {
    if (iterations < 1) throw ScenarioError("scenario.iterations: must be >= 1");
    config.validate();
    std::vector<RunResult> results(static_cast<std::size_t>(iterations));
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(iterations));

    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(threads);
    auto worker = [&](unsigned w) {
        try {
            for (int i = next++; i < iterations; i = next++)
                results[static_cast<std::size_t>(i)] = run(config, seed + static_cast<std::uint64_t>(i));
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

}  // namespace brokersim
