#include "brokersim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace brokersim {

Quality::Quality(double v) : value_(v) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("quality outside [0, 1]");
}

Quality Quality::clamped(double v) {
    if (std::isnan(v)) throw std::domain_error("quality is NaN");
    return Quality(std::clamp(v, 0.0, 1.0));
}

Quality compute_backhaul_quality(double rtt_ms, const PolicySet& policy) {
    if (!(rtt_ms >= 0.0)) throw std::invalid_argument("rtt must be >= 0");
    if (rtt_ms <= policy.rtt_congestion_threshold) return Quality(1.0);
    const double span = policy.backhaul_quality_mode == BackhaulQualityMode::Literal
                            ? policy.k_back
                            : policy.rtt_max - policy.rtt_base;
    return Quality::clamped((policy.rtt_max - rtt_ms) / span);
}

Quality compute_wireless_quality(double n_flow, double k1) {
    if (!(n_flow >= 0.0)) throw std::invalid_argument("n_flow must be >= 0");
    if (!(k1 > 0.0)) throw std::invalid_argument("k1 must be > 0");
    return Quality::clamped(1.0 - n_flow * k1);
}

Quality compute_nap_quality(Quality wq, Quality q_back, const PolicySet& policy) {
    return Quality::clamped(policy.w1 * wq.value() + policy.w2 * q_back.value());
}

Quality compute_reputation(std::span<const Quality> nap_qualities) {
    if (nap_qualities.empty()) throw std::invalid_argument("reputation of a technology without NAPs");
    double sum = 0.0;
    for (Quality q : nap_qualities) sum += q.value();
    return Quality::clamped(sum / static_cast<double>(nap_qualities.size()));
}

RankScore compute_rank_score(double power_w, Quality q_nap, Quality reputation, const PolicySet& policy) {
    const double p_term = std::clamp((power_w - policy.pow_thr) / policy.pow_thr, -1.0, 1.0);
    const double q_term = std::clamp((q_nap.value() - policy.qual_thr) / policy.qual_thr, -1.0, 1.0);
    return {reputation.value() * (policy.alpha * p_term + (1.0 - policy.alpha) * q_term)};
}

Quality projected_join_quality(Quality q_nap, double k1, const PolicySet& policy) {
    return Quality::clamped(q_nap.value() - policy.w1 * k1);
}

std::vector<RankedNap> build_ranking(std::span<const RankCandidate> candidates, const PolicySet& policy) {
    std::vector<RankedNap> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates)
        out.push_back({c.nap, compute_rank_score(c.power, c.q_nap, c.reputation, policy), c.priority});

    auto tie_order = [](const RankedNap& a, const RankedNap& b) {
        if (a.priority != b.priority) return a.priority > b.priority;
        return a.nap < b.nap;
    };
    std::sort(out.begin(), out.end(), [&](const RankedNap& a, const RankedNap& b) {
        if (a.score.value != b.score.value) return a.score.value > b.score.value;
        return tie_order(a, b);
    });
    // Near-equal scores form a group anchored at its highest score.
    for (std::size_t begin = 0; begin < out.size();) {
        std::size_t end = begin + 1;
        while (end < out.size() && out[begin].score.value - out[end].score.value < kScoreTieEpsilon) ++end;
        std::sort(out.begin() + static_cast<std::ptrdiff_t>(begin), out.begin() + static_cast<std::ptrdiff_t>(end),
                  tie_order);
        begin = end;
    }
    return out;
}

}  // namespace brokersim
