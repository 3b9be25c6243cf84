#include <functional>
#include <map>

#include "brokersim/scenario.hpp"

namespace brokersim {

namespace {

// Wi-Fi belongs to provider 0 (A), WiMAX to provider 1 (B).
ScenarioConfig reference_topology() {
    ScenarioConfig c;
    c.technologies = {
        {"wimax", 1, BackhaulModel{100e6, 20.0, 300.0, 0.9, 1.2}, 0.5},
        {"wifi", 0, BackhaulModel{100e6, 20.0, 300.0, 0.9, 1.2}, 0.1},
    };
    c.naps = {
        {"BS", "wimax", {1000.0, 1300.0}, 1000.0, 16e6, std::nullopt},
        {"AP1", "wifi", {995.0, 1000.0}, 20.0, 3.5e6, std::nullopt},
        {"AP2", "wifi", {1005.0, 1000.0}, 20.0, 3.5e6, std::nullopt},
    };
    return c;
}

ScenarioConfig wireless(const std::string& name, bool broker, double qt, int statics, int mobiles,
                        const std::string& description) {
    auto c = reference_topology();
    c.name = name;
    c.description = description;
    c.broker_enabled = broker;
    c.policy.qual_thr = qt;
    c.static_terminals = statics;
    c.mobile_terminals = mobiles;
    return c;
}

ScenarioConfig backhaul(const std::string& name, double wimax_backhaul, double qt, const std::string& description) {
    auto c = reference_topology();
    c.name = name;
    c.description = description;
    c.technologies[0].backhaul.capacity = wimax_backhaul;
    c.policy.qual_thr = qt;
    c.policy.w1 = 0.5;
    c.policy.w2 = 0.5;
    c.static_terminals = 40;  // 12.8 Mbit/s offered
    return c;
}

ScenarioConfig sdn(int flows, double qt) {
    auto c = reference_topology();
    c.name = "J-" + std::to_string(flows) + "-" + (qt < 0.6 ? "0.525" : "0.725");
    c.description = "QT sweep: " + std::to_string(flows) + " flows, QT " + (qt < 0.6 ? "0.525" : "0.725");
    c.policy.qual_thr = qt;
    c.static_terminals = flows;
    return c;
}

const std::map<std::string, std::function<ScenarioConfig()>>& registry() {
    static const std::map<std::string, std::function<ScenarioConfig()>> presets = {
        {"A", [] { return wireless("A", false, 0.525, 80, 0, "wireless overload, broker disabled"); }},
        {"B", [] { return wireless("B", true, 0.525, 80, 0, "wireless overload, broker enabled"); }},
        {"C", [] { return wireless("C", true, 0.725, 80, 0, "wireless overload, strict QT"); }},
        {"D", [] { return wireless("D", true, 0.525, 64, 16, "20% mobile terminals"); }},
        {"E", [] { return wireless("E", true, 0.525, 32, 48, "60% mobile terminals"); }},
        {"F", [] { return backhaul("F", 15e6, 0.525, "overprovisioned WiMAX backhaul"); }},
        {"G", [] { return backhaul("G", 5e6, 0.525, "underprovisioned WiMAX backhaul"); }},
        {"H", [] { return backhaul("H", 5e6, 0.725, "underprovisioned WiMAX backhaul, strict QT"); }},
        {"I",
         [] {
             auto c = wireless("I", true, 0.525, 80, 0, "three 40-flow flash crowds");
             c.duration = 900.0;
             c.flash_crowds = {{260.0, 40}, {460.0, 40}, {660.0, 40}};
             return c;
         }},
        {"J-40-0.525", [] { return sdn(40, 0.525); }},
        {"J-40-0.725", [] { return sdn(40, 0.725); }},
        {"J-80-0.525", [] { return sdn(80, 0.525); }},
        {"J-80-0.725", [] { return sdn(80, 0.725); }},
        {"RWP",
         [] {
             auto c = reference_topology();
             c.name = "RWP";
             c.description = "random waypoint mobility, 80 nodes in 26 x 26 m";
             c.naps[0].position = {326.0, 10.0};
             c.naps[1].position = {8.0, 26.0};
             c.naps[2].position = {18.0, 26.0};
             c.static_terminals = 80;
             c.random_waypoint = RandomWaypointParams{};
             return c;
         }},
    };
    return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [name, make] : registry()) out.push_back(name);
    return out;
}

ScenarioConfig preset(const std::string& name) {
    const auto& r = registry();
    auto it = r.find(name == "J" ? "J-40-0.525" : name);
    if (it == r.end()) throw ScenarioError("unknown preset '" + name + "'");
    return it->second();
}

}  // namespace brokersim
