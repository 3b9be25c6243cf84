#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "brokersim/broker.hpp"
#include "brokersim/geometry.hpp"
#include "brokersim/ids.hpp"
#include "brokersim/metrics.hpp"

namespace brokersim {

struct NapState {
    NapId id;
    TechnologyId technology;
    std::string name;
    Position position;
    double coverage_radius = 20.0;     // m
    double wireless_capacity = 3.5e6;  // bit/s
    double k1 = 0.0524;
    std::set<FlowId> attached_flows;
    Quality wq{1.0};
    std::optional<AnnouncedMetrics> last_metrics;
    double broadcast_period = 0.1;  // s
    // Load fed to the wireless quality; equals |attached_flows| except under CS1.
    double effective_load = 0.0;
};

// Throw std::logic_error on double attach / unknown detach.
void attach(NapState& nap, FlowId flow);
void detach(NapState& nap, FlowId flow);
// Recompute wq from an explicit (possibly fractional) load.
void set_effective_load(NapState& nap, double load);

double received_power(Position terminal, const NapState& nap, double pow_thr);

struct TerminalView {
    TerminalId id;
    Position position;
};

struct Delivery {
    TerminalId terminal;
    NapId nap;
    TechnologyId technology;
    double power = 0.0;
    std::optional<AnnouncedMetrics> metrics;  // absent for plain beacons
    double broadcast_period = 0.0;
};

// Metric announcement to every in-coverage terminal; empty before the
// first broker aggregation.
std::vector<Delivery> broadcast(const NapState& nap, std::span<const TerminalView> terminals, double pow_thr);
// Metric-free beacon, used when no broker is deployed.
std::vector<Delivery> beacon(const NapState& nap, std::span<const TerminalView> terminals, double pow_thr);

}  // namespace brokersim
