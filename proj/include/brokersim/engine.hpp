#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brokersim/broker.hpp"
#include "brokersim/mobility.hpp"
#include "brokersim/nap.hpp"
#include "brokersim/random.hpp"
#include "brokersim/terminal.hpp"
#include "brokersim/traffic.hpp"

namespace brokersim {

struct TechnologySpec {
    std::string name;  // k1 key in the policy
    int provider = 0;
    BackhaulModel backhaul;
    double broadcast_period = 0.1;
};

struct NapSpec {
    std::string name;
    std::string technology;
    Position position;
    double coverage_radius = 20.0;
    double wireless_capacity = 3.5e6;
    std::optional<double> broadcast_period;  // defaults to the technology's
};

struct TerminalSpec {
    Position origin;
    MobilityPlan plan = Static{};
    int provider = 0;
    double flow_start = 0.0;
    double cbr_rate = 320e3;
    TrafficType traffic_type = TrafficType::Voice;
};

struct EngineConfig {
    double tick = 0.1;
    double duration = 300.0;
    double record_interval = 1.0;
    bool broker_enabled = true;
    // Without a broker, terminals camp on the strongest NAP of this technology.
    std::string default_technology = "wimax";
    PolicySet policy;
    ProbeConfig probe;
    AgentConfig agent;
};

struct RunResult {
    std::uint64_t seed = 0;
    std::vector<std::string> technologies;
    std::vector<std::string> naps;
    std::vector<double> times;
    std::vector<std::vector<int>> flows_per_tech;  // [sample][tech]
    std::vector<std::vector<int>> flows_per_nap;   // [sample][nap]
    std::vector<int> blocked;                      // [sample]
    std::vector<int> detached;                     // [sample]
    std::vector<int> active;                       // [sample]
    // [flow][sample]; NaN while the flow is not attached (or not started).
    std::vector<std::vector<double>> flow_throughput;
    std::vector<std::vector<double>> interarrival_delay_ms;
    // [flow][sample]; cumulative, NaN before the flow starts.
    std::vector<std::vector<double>> lost_packets;
    std::vector<std::vector<double>> backhaul_quality;  // [tech][sample]
    std::vector<std::vector<double>> reputation;        // [tech][sample]
    std::vector<std::vector<double>> nap_quality;       // [nap][sample]
    std::vector<double> handover_times;
    std::vector<double> block_times;
    int handovers = 0;
    int blocks = 0;
};

// Per-tick allocation snapshot, exposed for invariant checks.
struct TickAllocation {
    std::vector<double> flow_rate;        // [terminal], 0 when not attached
    std::vector<double> flow_demand;      // [terminal]
    std::vector<double> nap_total;        // [nap]
    std::vector<double> backhaul_total;   // [tech]
};

class Engine {
public:
    Engine(EngineConfig config, const std::vector<TechnologySpec>& technologies, const std::vector<NapSpec>& naps,
           const std::vector<TerminalSpec>& terminals, std::uint64_t seed);

    // One tick: mobility, broadcasts, broker, decisions, traffic, statistics.
    void advance();
    void run_to_end();
    bool finished() const;

    double now() const { return static_cast<double>(tick_index_) * config_.tick; }
    std::int64_t tick_index() const { return tick_index_; }

    const EngineConfig& config() const { return config_; }
    const std::vector<TechnologyState>& technologies() const { return techs_; }
    const std::vector<NapState>& naps() const { return naps_; }
    const std::vector<TerminalState>& terminals() const { return terms_; }
    const TickAllocation& last_allocation() const { return alloc_; }
    const RunResult& result() const { return result_; }
    RunResult take_result() { return std::move(result_); }

private:
    bool due(double period) const;
    bool active(const TerminalState& t) const;
    void step_mobility();
    void step_broadcasts();
    void step_broker();
    void step_decisions();
    void step_traffic();
    void step_record();

    void execute(TerminalState& t, const Action& action);
    Action decide_unmanaged(const TerminalState& t) const;
    double next_interval(const TerminalState& t);
    double carried_load(const NapState& nap) const;
    double flow_demand(const TerminalState& t, const NapState& nap) const;

    EngineConfig config_;
    std::vector<TechnologyState> techs_;
    std::vector<NapState> naps_;
    std::vector<TerminalState> terms_;
    std::vector<double> k1_by_tech_;
    std::vector<double> throttle_;       // [terminal] CS1 scale
    std::vector<TokenBucket> buckets_;   // [terminal]
    std::vector<double> lost_;           // [terminal] cumulative packets
    std::vector<std::vector<Delivery>> inbox_;
    TechnologyId default_tech_;
    TickAllocation alloc_;
    RunResult result_;
    Rng rng_;
    std::int64_t tick_index_ = 0;
    std::int64_t last_tick_ = 0;
};

}  // namespace brokersim
