#include "brokersim/broker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brokersim {

void ProbeConfig::validate() const {
    if (!(period > 0.0)) throw std::invalid_argument("probe.period must be > 0");
    if (!(timeout > 0.0 && timeout < period)) throw std::invalid_argument("probe.timeout must lie in (0, period)");
    if (max_retries < 0) throw std::invalid_argument("probe.max_retries must be >= 0");
}

ProbeOutcome slave_probe(TechnologyState& tech, double offered_load, double now, const ProbeConfig& probe,
                         const PolicySet& policy) {
    const double cycles = now / probe.period;
    if (std::abs(cycles - std::round(cycles)) > 1e-6)
        throw std::logic_error("probe fired off its period at t=" + std::to_string(now));

    ProbeOutcome out;
    const double limit_ms = probe.timeout * 1000.0;
    // The load model is deterministic, so every retry sees the same RTT.
    for (int attempt = 0; attempt <= probe.max_retries; ++attempt) {
        ++out.attempts;
        const double rtt = backhaul_rtt(offered_load, tech.backhaul);
        if (rtt <= limit_ms) {
            out.rtt_ms = rtt;
            out.succeeded = true;
            break;
        }
    }
    if (!out.succeeded) out.rtt_ms = policy.rtt_max;
    tech.last_rtt = out.rtt_ms;
    tech.q_back = compute_backhaul_quality(out.rtt_ms, policy);
    return out;
}

AggregationResult slave_aggregate(TechnologyState& tech, const std::map<NapId, Quality>& wireless_reports,
                                  double now, const PolicySet& policy) {
    AggregationResult result;
    for (const auto& [nap, wq] : wireless_reports) {
        if (std::find(tech.naps.begin(), tech.naps.end(), nap) == tech.naps.end()) {
            result.rejected.push_back(nap);
            continue;
        }
        tech.q_nap_by_nap[nap] = compute_nap_quality(wq, tech.q_back, policy);
    }
    if (!tech.q_nap_by_nap.empty()) {
        std::vector<Quality> qs;
        qs.reserve(tech.q_nap_by_nap.size());
        for (const auto& [nap, q] : tech.q_nap_by_nap) qs.push_back(q);
        tech.reputation = compute_reputation(qs);
    }
    for (NapId nap : tech.naps) {
        auto it = tech.q_nap_by_nap.find(nap);
        if (it == tech.q_nap_by_nap.end()) continue;
        result.announcements.push_back({nap, tech.id, it->second, tech.reputation, tech.priority, now});
    }
    result.reputation = tech.reputation;
    return result;
}

std::map<TechnologyId, int> master_prioritize(const std::map<TechnologyId, Quality>& qualities) {
    if (qualities.empty()) throw std::invalid_argument("master_prioritize needs at least one technology");
    std::vector<std::pair<TechnologyId, Quality>> order(qualities.begin(), qualities.end());
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::map<TechnologyId, int> ranks;
    int rank = 1;
    for (const auto& [tech, q] : order) ranks[tech] = rank++;
    return ranks;
}

}  // namespace brokersim
