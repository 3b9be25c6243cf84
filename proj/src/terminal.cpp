#include "brokersim/terminal.hpp"

#include <algorithm>
#include <stdexcept>

namespace brokersim {

void AgentConfig::validate() const {
    if (!(link_update_interval >= 0.0)) throw std::invalid_argument("agent.link_update_interval must be >= 0");
    if (!(link_update_jitter >= 0.0 && link_update_jitter < 1.0))
        throw std::invalid_argument("agent.link_update_jitter must lie in [0, 1)");
    if (!(staleness_factor >= 1.0)) throw std::invalid_argument("agent.staleness_factor must be >= 1");
    if (max_backoff_exponent < 0) throw std::invalid_argument("agent.max_backoff_exponent must be >= 0");
}

bool evict_stale(TerminalState& t, double now, const AgentConfig& agent) {
    bool serving_lost = false;
    for (auto it = t.known_naps.begin(); it != t.known_naps.end();) {
        const double window = agent.staleness_factor * it->second.broadcast_period;
        if (now - it->second.last_heard > window + 1e-9) {
            if (t.attachment.kind == AttachmentKind::Attached && t.attachment.nap == it->first) serving_lost = true;
            it = t.known_naps.erase(it);
        } else {
            ++it;
        }
    }
    return serving_lost;
}

bool on_announcement(TerminalState& t, const AnnouncedMetrics& m, double power, double broadcast_period, double now,
                     const AgentConfig& agent) {
    t.known_naps[m.nap] = KnownNap{m, power, now, broadcast_period};
    return evict_stale(t, now, agent);
}

Action select_action(const Attachment& attachment, std::span<const Candidate> ranked, double delta) {
    auto first_joinable = [&](NapId exclude) -> const Candidate* {
        for (const auto& c : ranked)
            if (c.join_eligible && c.nap != exclude) return &c;
        return nullptr;
    };

    if (attachment.kind != AttachmentKind::Attached) {
        if (const Candidate* best = first_joinable(NapId{})) return {ActionKind::Attach, NapId{}, best->nap};
        return {ActionKind::Block, NapId{}, NapId{}};
    }

    const NapId serving = attachment.nap;
    auto it = std::find_if(ranked.begin(), ranked.end(), [&](const Candidate& c) { return c.nap == serving; });
    const Candidate* best = first_joinable(serving);
    if (it == ranked.end() || !it->stay_eligible) {
        if (best) return {ActionKind::Handover, serving, best->nap};
        return {ActionKind::Block, serving, NapId{}};
    }
    if (best && best->score - it->score > delta) return {ActionKind::Handover, serving, best->nap};
    return {ActionKind::Stay, serving, NapId{}};
}

Action decide(const TerminalState& t, const PolicySet& policy, const AgentConfig& agent,
              std::span<const double> k1_by_technology) {
    std::vector<RankCandidate> cands;
    cands.reserve(t.known_naps.size());
    for (const auto& [nap, k] : t.known_naps)
        cands.push_back({nap, k.power, k.metrics.q_nap, k.metrics.reputation, k.metrics.priority});
    const auto ranking = build_ranking(cands, policy);

    std::vector<Candidate> ranked;
    ranked.reserve(ranking.size());
    for (const auto& r : ranking) {
        const auto& known = t.known_naps.at(r.nap);
        const Quality q = known.metrics.q_nap;
        Candidate c{r.nap, r.score.value, q.value() > policy.qual_thr, q.value() > policy.qual_thr};
        const bool is_serving = t.attachment.kind == AttachmentKind::Attached && t.attachment.nap == r.nap;
        const auto tech = static_cast<std::size_t>(known.metrics.technology.value);
        if (agent.admission_lookahead && !is_serving && tech < k1_by_technology.size())
            c.join_eligible = projected_join_quality(q, k1_by_technology[tech], policy).value() > policy.qual_thr;
        ranked.push_back(c);
    }
    return select_action(t.attachment, ranked, policy.delta);
}

void apply(TerminalState& t, const Action& action) {
    switch (action.kind) {
        case ActionKind::Stay: return;
        case ActionKind::Attach: t.attachment = {AttachmentKind::Attached, action.to}; return;
        case ActionKind::Handover:
            t.attachment = {AttachmentKind::Attached, action.to};
            ++t.handover_count;
            return;
        case ActionKind::Block:
            if (t.attachment.kind == AttachmentKind::Blocked) return;
            if (t.attachment.kind == AttachmentKind::Attached) ++t.preemptions;
            t.attachment = {AttachmentKind::Blocked, NapId{}};
            ++t.block_events;
            return;
    }
}

TrafficClassMapping map_traffic_class(TrafficType type) {
    switch (type) {
        case TrafficType::Voice: return {AccessCategory::AC_VO, ServiceClass::CS2, Phb::EF};
        case TrafficType::Video: return {AccessCategory::AC_VI, ServiceClass::CS1, Phb::AF};
        case TrafficType::Background: return {AccessCategory::AC_BK, ServiceClass::CS0, Phb::BE};
    }
    throw std::invalid_argument("unknown traffic type");
}

double enforce_cs(const Flow& flow, double allocation, ServiceClass cs, const NapContext& ctx) {
    if (!(allocation >= 0.0)) throw std::invalid_argument("allocation must be >= 0");
    switch (cs) {
        case ServiceClass::CS0: return std::min(allocation, std::max(0.0, ctx.remaining_capacity));
        case ServiceClass::CS2: return std::min(allocation, flow.cbr_rate);
        case ServiceClass::CS1: {
            const double scale = std::clamp(ctx.throttle_scale, kThrottleFloor, 1.0);
            return std::min(allocation, flow.cbr_rate * scale);
        }
    }
    return allocation;
}

double ThrottlePlan::scale_for(TrafficType type) const {
    switch (type) {
        case TrafficType::Voice: return 1.0;
        case TrafficType::Video: return video_scale;
        case TrafficType::Background: return background_scale;
    }
    return 1.0;
}

ThrottlePlan plan_cs1_throttle(int voice, int video, int background, double k1, Quality q_back,
                               const PolicySet& policy) {
    if (voice < 0 || video < 0 || background < 0) throw std::invalid_argument("flow counts must be >= 0");
    if (!(k1 > 0.0)) throw std::invalid_argument("k1 must be > 0");
    ThrottlePlan plan;
    const double full = static_cast<double>(voice + video + background);
    plan.effective_load = full;
    if (policy.w1 <= 0.0) return plan;  // wireless load does not move the NAP quality

    // Largest load keeping w1*(1 - k1*n) + w2*q_back strictly above QT.
    const double wq_needed = (policy.qual_thr - policy.w2 * q_back.value()) / policy.w1;
    const double n_max = (1.0 - wq_needed) / k1 * (1.0 - 1e-9);
    double excess = full - n_max;
    if (excess <= 0.0) return plan;

    auto shed = [&](int count, double& scale) {
        if (count == 0 || excess <= 0.0) return;
        const double n = static_cast<double>(count);
        const double cut = std::min(excess, n * (1.0 - kThrottleFloor));
        scale = 1.0 - cut / n;
        excess -= cut;
    };
    shed(background, plan.background_scale);
    shed(video, plan.video_scale);
    plan.effective_load = voice + video * plan.video_scale + background * plan.background_scale;
    return plan;
}

std::string to_string(AttachmentKind kind) {
    switch (kind) {
        case AttachmentKind::Detached: return "detached";
        case AttachmentKind::Attached: return "attached";
        case AttachmentKind::Blocked: return "blocked";
    }
    return "?";
}

std::string to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::Stay: return "stay";
        case ActionKind::Attach: return "attach";
        case ActionKind::Handover: return "handover";
        case ActionKind::Block: return "block";
    }
    return "?";
}

std::string to_string(AccessCategory ac) {
    switch (ac) {
        case AccessCategory::AC_VO: return "AC_VO";
        case AccessCategory::AC_VI: return "AC_VI";
        case AccessCategory::AC_BK: return "AC_BK";
    }
    return "?";
}

std::string to_string(Phb phb) {
    switch (phb) {
        case Phb::EF: return "EF";
        case Phb::AF: return "AF";
        case Phb::BE: return "BE";
    }
    return "?";
}

}  // namespace brokersim
