#include "brokersim/nap.hpp"

#include <stdexcept>

namespace brokersim {

namespace {

void recompute(NapState& nap) { nap.wq = compute_wireless_quality(nap.effective_load, nap.k1); }

std::vector<Delivery> fan_out(const NapState& nap, std::span<const TerminalView> terminals, double pow_thr,
                              const std::optional<AnnouncedMetrics>& metrics) {
    std::vector<Delivery> out;
    for (const auto& t : terminals) {
        const double p = received_power(t.position, nap, pow_thr);
        if (p <= 0.0) continue;
        out.push_back({t.id, nap.id, nap.technology, p, metrics, nap.broadcast_period});
    }
    return out;
}

}  // namespace

void attach(NapState& nap, FlowId flow) {
    if (!nap.attached_flows.insert(flow).second)
        throw std::logic_error("flow " + std::to_string(flow.value) + " already attached to NAP " + nap.name);
    nap.effective_load = static_cast<double>(nap.attached_flows.size());
    recompute(nap);
}

void detach(NapState& nap, FlowId flow) {
    if (nap.attached_flows.erase(flow) == 0)
        throw std::logic_error("flow " + std::to_string(flow.value) + " not attached to NAP " + nap.name);
    nap.effective_load = static_cast<double>(nap.attached_flows.size());
    recompute(nap);
}

void set_effective_load(NapState& nap, double load) {
    nap.effective_load = load;
    recompute(nap);
}

double received_power(Position terminal, const NapState& nap, double pow_thr) {
    return received_power(terminal, nap.position, nap.coverage_radius, pow_thr);
}

std::vector<Delivery> broadcast(const NapState& nap, std::span<const TerminalView> terminals, double pow_thr) {
    if (!nap.last_metrics) return {};
    return fan_out(nap, terminals, pow_thr, nap.last_metrics);
}

std::vector<Delivery> beacon(const NapState& nap, std::span<const TerminalView> terminals, double pow_thr) {
    return fan_out(nap, terminals, pow_thr, std::nullopt);
}

}  // namespace brokersim
