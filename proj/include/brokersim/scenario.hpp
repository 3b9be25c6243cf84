#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "brokersim/engine.hpp"
#include "brokersim/stats.hpp"

namespace brokersim {

struct FlashCrowd {
    double time = 0.0;
    int size = 0;
};

// Mobile terminals come in pairs: even indices start on the left, odd ones on
// the right, both heading to `dest`.
struct MobileLayout {
    Position left_start{900.0, 999.0};
    Position right_start{1100.0, 999.0};
    Position dest{1000.0, 999.0};
    double speed = 1.0;
    double first_start = 10.0;
    double pair_interval = 5.0;
};

struct ScenarioConfig {
    std::string name = "custom";
    std::string description;
    double duration = 300.0;
    double tick = 0.1;
    double record_interval = 1.0;
    bool broker_enabled = true;
    std::string default_technology = "wimax";
    int iterations = 10;
    std::uint64_t seed = 1;

    PolicySet policy;
    ProbeConfig probe;
    AgentConfig agent;

    std::vector<TechnologySpec> technologies;
    std::vector<NapSpec> naps;

    int static_terminals = 80;
    Position static_position{1000.0, 999.0};
    int mobile_terminals = 0;  // indices 0..mobile-1
    MobileLayout mobile;
    double first_arrival = 9.0;
    double arrival_interval = 1.0;
    double cbr_rate = 320e3;
    TrafficType traffic_type = TrafficType::Voice;
    std::vector<FlashCrowd> flash_crowds;

    // Waypoint mobility: a BonnMotion file, or a random-waypoint trace drawn per seed.
    std::string mobility_trace;
    std::optional<RandomWaypointParams> random_waypoint;

    // Throws ScenarioError naming the key path.
    void validate() const;
};

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> preset_names();
// Throws ScenarioError for unknown names. "J" expands to "J-40-0.525".
ScenarioConfig preset(const std::string& name);

ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);
// Preset name or path to a configuration file.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

std::vector<TerminalSpec> build_terminals(const ScenarioConfig& config, std::uint64_t seed);
EngineConfig engine_config(const ScenarioConfig& config);

RunResult run(const ScenarioConfig& config, std::uint64_t seed);
// Seeds seed, seed+1, ...; threads = 0 picks the hardware concurrency.
std::vector<RunResult> run_replications(const ScenarioConfig& config, int iterations, std::uint64_t seed,
                                        unsigned threads = 0);

struct Summary {
    std::string scenario;
    std::size_t replications = 0;
    std::vector<std::string> technologies;
    std::vector<std::string> naps;
    std::vector<double> times;
    std::vector<std::vector<Estimate>> flows_per_tech;        // [sample][tech]
    std::vector<Estimate> blocked;                            // [sample]
    std::vector<Estimate> mean_flow_throughput;               // [sample], over attached flows
    std::vector<std::vector<Estimate>> flow_throughput;       // [flow][sample]
    std::vector<std::vector<Estimate>> lost_packets;          // [flow][sample]
    std::vector<std::vector<Estimate>> interarrival_delay_ms; // [flow][sample]
    std::vector<std::vector<Estimate>> backhaul_quality;      // [tech][sample]
    std::vector<std::vector<Estimate>> reputation;            // [tech][sample]
    std::vector<std::vector<Estimate>> nap_quality;           // [nap][sample]
    Estimate handovers;
    Estimate blocks;
    Estimate final_attached;
};

// Fewer than two results: means only, CIs absent.
Summary aggregate(const std::vector<RunResult>& results, const std::string& scenario = {});

// Writes the CSV set plus summary.txt; std::runtime_error names the failing path.
void emit(const Summary& summary, const ScenarioConfig& config, const std::filesystem::path& out_dir);

}  // namespace brokersim
