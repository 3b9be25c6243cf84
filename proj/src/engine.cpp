#include "brokersim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace brokersim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t ticks_per(double period, double tick, const char* what) {
    const double ratio = period / tick;
    const auto n = std::llround(ratio);
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-6)
        throw std::invalid_argument(std::string(what) + " must be a positive multiple of the tick");
    return n;
}

}  // namespace

Engine::Engine(EngineConfig config, const std::vector<TechnologySpec>& technologies,
               const std::vector<NapSpec>& naps, const std::vector<TerminalSpec>& terminals, std::uint64_t seed)
    : config_(std::move(config)), rng_(seed) {
    if (!(config_.tick > 0.0)) throw std::invalid_argument("tick must be > 0");
    if (!(config_.duration > 0.0)) throw std::invalid_argument("duration must be > 0");
    config_.policy.validate();
    config_.probe.validate();
    config_.agent.validate();
    ticks_per(config_.record_interval, config_.tick, "record_interval");
    ticks_per(config_.probe.period, config_.tick, "probe.period");
    last_tick_ = std::llround(config_.duration / config_.tick);

    std::map<std::string, TechnologyId> tech_by_name;
    for (const auto& spec : technologies) {
        if (tech_by_name.contains(spec.name)) throw std::invalid_argument("duplicate technology '" + spec.name + "'");
        spec.backhaul.validate();
        ticks_per(spec.broadcast_period, config_.tick, "broadcast_period");
        TechnologyState ts;
        ts.id = TechnologyId(static_cast<std::int32_t>(techs_.size()));
        ts.name = spec.name;
        ts.provider = spec.provider;
        ts.backhaul = spec.backhaul;
        ts.last_rtt = spec.backhaul.rtt_base;
        tech_by_name[spec.name] = ts.id;
        techs_.push_back(std::move(ts));
        k1_by_tech_.push_back(config_.policy.k1_for(spec.name));
    }
    for (const auto& spec : naps) {
        auto it = tech_by_name.find(spec.technology);
        if (it == tech_by_name.end())
            throw std::invalid_argument("NAP '" + spec.name + "' uses unknown technology '" + spec.technology + "'");
        if (!(spec.coverage_radius > 0.0)) throw std::invalid_argument("NAP '" + spec.name + "' needs radius > 0");
        if (!(spec.wireless_capacity > 0.0))
            throw std::invalid_argument("NAP '" + spec.name + "' needs capacity > 0");
        auto& tech = techs_[static_cast<std::size_t>(it->second.value)];
        NapState n;
        n.id = NapId(static_cast<std::int32_t>(naps_.size()));
        n.technology = tech.id;
        n.name = spec.name;
        n.position = spec.position;
        n.coverage_radius = spec.coverage_radius;
        n.wireless_capacity = spec.wireless_capacity;
        n.k1 = k1_by_tech_[static_cast<std::size_t>(tech.id.value)];
        n.broadcast_period = spec.broadcast_period.value_or(technologies[static_cast<std::size_t>(tech.id.value)].broadcast_period);
        ticks_per(n.broadcast_period, config_.tick, "broadcast_period");
        tech.naps.push_back(n.id);
        naps_.push_back(std::move(n));
    }
    for (const auto& spec : terminals) {
        validate(spec.plan);
        if (!(spec.cbr_rate > 0.0)) throw std::invalid_argument("flow cbr_rate must be > 0");
        TerminalState t;
        t.id = TerminalId(static_cast<std::int32_t>(terms_.size()));
        t.origin = spec.origin;
        t.plan = spec.plan;
        t.position = position_at(t.plan, t.origin, 0.0);
        t.provider = spec.provider;
        t.flow = Flow{FlowId(t.id.value), t.id, spec.cbr_rate, spec.flow_start, spec.traffic_type};
        buckets_.emplace_back(spec.cbr_rate, spec.cbr_rate * config_.tick);
        terms_.push_back(std::move(t));
    }
    if (auto it = tech_by_name.find(config_.default_technology); it != tech_by_name.end()) default_tech_ = it->second;

    throttle_.assign(terms_.size(), 1.0);
    inbox_.resize(terms_.size());
    alloc_.flow_rate.assign(terms_.size(), 0.0);
    alloc_.flow_demand.assign(terms_.size(), 0.0);
    alloc_.nap_total.assign(naps_.size(), 0.0);
    alloc_.backhaul_total.assign(techs_.size(), 0.0);

    result_.seed = seed;
    for (const auto& t : techs_) result_.technologies.push_back(t.name);
    for (const auto& n : naps_) result_.naps.push_back(n.name);
    result_.flow_throughput.resize(terms_.size());
    result_.interarrival_delay_ms.resize(terms_.size());
    result_.lost_packets.resize(terms_.size());
    result_.backhaul_quality.resize(techs_.size());
    result_.reputation.resize(techs_.size());
    result_.nap_quality.resize(naps_.size());
    lost_.assign(terms_.size(), 0.0);
}

bool Engine::finished() const { return tick_index_ > last_tick_; }

bool Engine::due(double period) const {
    return tick_index_ % std::llround(period / config_.tick) == 0;
}

bool Engine::active(const TerminalState& t) const { return t.flow && now() >= t.flow->start_time - 1e-9; }

void Engine::advance() {
    step_mobility();
    step_broadcasts();
    step_broker();
    step_decisions();
    step_traffic();
    step_record();
    ++tick_index_;
}

void Engine::run_to_end() {
    while (!finished()) advance();
}

void Engine::step_mobility() {
    const double t = now();
    for (auto& term : terms_) term.position = position_at(term.plan, term.origin, t);
}

void Engine::step_broadcasts() {
    std::vector<TerminalView> views;
    for (const auto& t : terms_)
        if (active(t)) views.push_back({t.id, t.position});
    for (const auto& nap : naps_) {
        if (!due(nap.broadcast_period)) continue;
        auto deliveries = config_.broker_enabled ? broadcast(nap, views, config_.policy.pow_thr)
                                                 : beacon(nap, views, config_.policy.pow_thr);
        for (auto& d : deliveries) inbox_[static_cast<std::size_t>(d.terminal.value)].push_back(std::move(d));
    }
}

double Engine::carried_load(const NapState& nap) const {
    double demand = 0.0;
    for (FlowId f : nap.attached_flows) demand += flow_demand(terms_[static_cast<std::size_t>(f.value)], nap);
    return std::min(demand, nap.wireless_capacity);
}

double Engine::flow_demand(const TerminalState& t, const NapState& nap) const {
    switch (config_.policy.cs_class) {
        case ServiceClass::CS0: return nap.wireless_capacity;
        case ServiceClass::CS1: return t.flow->cbr_rate * throttle_[static_cast<std::size_t>(t.id.value)];
        case ServiceClass::CS2: return t.flow->cbr_rate;
    }
    return t.flow->cbr_rate;
}

// The slaves also measure when no broker is deployed so that quality series
// exist for comparison; metrics only reach terminals when it is enabled.
void Engine::step_broker() {
    if (!due(config_.probe.period)) return;
    const double t = now();
    std::vector<AggregationResult> rounds;
    std::map<TechnologyId, Quality> status;
    for (auto& tech : techs_) {
        double offered = 0.0;
        std::map<NapId, Quality> reports;
        for (NapId id : tech.naps) {
            const auto& nap = naps_[static_cast<std::size_t>(id.value)];
            offered += carried_load(nap);
            reports[id] = nap.wq;
        }
        slave_probe(tech, offered, t, config_.probe, config_.policy);
        rounds.push_back(slave_aggregate(tech, reports, t, config_.policy));
        if (!rounds.back().rejected.empty()) throw std::logic_error("foreign NAP report in technology " + tech.name);
        if (!tech.naps.empty()) status[tech.id] = rounds.back().reputation;
    }
    if (status.empty()) return;
    const auto ranks = master_prioritize(status);
    const int n = static_cast<int>(ranks.size());
    for (auto& tech : techs_) {
        auto it = ranks.find(tech.id);
        if (it == ranks.end()) continue;
        tech.rank = it->second;
        tech.priority = n + 1 - it->second;
    }
    for (auto& round : rounds) {
        for (auto& m : round.announcements) {
            m.priority = techs_[static_cast<std::size_t>(m.technology.value)].priority;
            naps_[static_cast<std::size_t>(m.nap.value)].last_metrics = m;
        }
    }
}

Action Engine::decide_unmanaged(const TerminalState& t) const {
    if (t.attachment.kind == AttachmentKind::Attached && t.known_naps.contains(t.attachment.nap)) return {};
    const KnownNap* best = nullptr;
    auto better = [&](const KnownNap& k) {
        if (!best) return true;
        const bool k_default = k.metrics.technology == default_tech_;
        const bool b_default = best->metrics.technology == default_tech_;
        if (k_default != b_default) return k_default;
        return k.power > best->power;
    };
    for (const auto& [id, k] : t.known_naps)
        if (better(k)) best = &k;
    if (t.attachment.kind == AttachmentKind::Attached) {
        if (best) return {ActionKind::Handover, t.attachment.nap, best->metrics.nap};
        return {ActionKind::Block, t.attachment.nap, NapId{}};
    }
    if (best) return {ActionKind::Attach, NapId{}, best->metrics.nap};
    return {};
}

double Engine::next_interval(const TerminalState& t) {
    const auto& agent = config_.agent;
    if (agent.link_update_interval <= 0.0) return 0.0;
    double f = uniform(rng_, 1.0 - agent.link_update_jitter, 1.0 + agent.link_update_jitter);
    if (t.attachment.kind == AttachmentKind::Blocked)
        f *= std::ldexp(1.0, std::min(t.preemptions, agent.max_backoff_exponent));
    return agent.link_update_interval * f;
}

void Engine::execute(TerminalState& t, const Action& action) {
    const FlowId flow = t.flow->id;
    auto nap = [&](NapId id) -> NapState& { return naps_[static_cast<std::size_t>(id.value)]; };
    switch (action.kind) {
        case ActionKind::Stay: break;
        case ActionKind::Attach: attach(nap(action.to), flow); break;
        case ActionKind::Handover:
            detach(nap(action.from), flow);
            attach(nap(action.to), flow);
            result_.handover_times.push_back(now());
            ++result_.handovers;
            break;
        case ActionKind::Block:
            if (t.attachment.kind == AttachmentKind::Attached) detach(nap(action.from), flow);
            if (t.attachment.kind != AttachmentKind::Blocked) {
                result_.block_times.push_back(now());
                ++result_.blocks;
            }
            break;
    }
    apply(t, action);
}

void Engine::step_decisions() {
    const double t_now = now();
    for (auto& t : terms_) {
        auto& inbox = inbox_[static_cast<std::size_t>(t.id.value)];
        if (!active(t)) {
            inbox.clear();
            continue;
        }
        for (const auto& d : inbox) {
            if (d.metrics) {
                on_announcement(t, *d.metrics, d.power, d.broadcast_period, t_now, config_.agent);
            } else {
                AnnouncedMetrics m;
                m.nap = d.nap;
                m.technology = d.technology;
                m.timestamp = t_now;
                t.known_naps[d.nap] = KnownNap{m, d.power, t_now, d.broadcast_period};
            }
        }
        inbox.clear();
        const bool serving_lost = evict_stale(t, t_now, config_.agent);

        bool run = false;
        switch (t.attachment.kind) {
            case AttachmentKind::Detached: run = !t.known_naps.empty(); break;
            case AttachmentKind::Attached: run = serving_lost || (config_.broker_enabled && t_now >= t.next_decision); break;
            case AttachmentKind::Blocked: run = config_.broker_enabled && t_now >= t.next_decision; break;
        }
        if (!run) continue;
        const Action action = config_.broker_enabled ? decide(t, config_.policy, config_.agent, k1_by_tech_)
                                                     : decide_unmanaged(t);
        execute(t, action);
        t.next_decision = t_now + next_interval(t);
    }
}

void Engine::step_traffic() {
    const double dt = config_.tick;
    const auto cs = config_.policy.cs_class;
    std::fill(alloc_.flow_rate.begin(), alloc_.flow_rate.end(), 0.0);
    std::fill(alloc_.flow_demand.begin(), alloc_.flow_demand.end(), 0.0);
    std::fill(alloc_.nap_total.begin(), alloc_.nap_total.end(), 0.0);
    std::fill(alloc_.backhaul_total.begin(), alloc_.backhaul_total.end(), 0.0);

    for (auto& tech : techs_) {
        std::vector<std::size_t> flows;      // terminal indices
        std::vector<double> wireless;        // per-flow allocation on the air
        std::vector<double> nap_cap_left;    // per-flow CS0 ceiling
        for (NapId id : tech.naps) {
            auto& nap = naps_[static_cast<std::size_t>(id.value)];
            if (cs == ServiceClass::CS1) {
                int counts[3] = {0, 0, 0};
                for (FlowId f : nap.attached_flows)
                    ++counts[static_cast<int>(terms_[static_cast<std::size_t>(f.value)].flow->traffic_type)];
                const auto plan = plan_cs1_throttle(counts[0], counts[1], counts[2], nap.k1, tech.q_back, config_.policy);
                for (FlowId f : nap.attached_flows) {
                    const auto idx = static_cast<std::size_t>(f.value);
                    throttle_[idx] = plan.scale_for(terms_[idx].flow->traffic_type);
                }
                set_effective_load(nap, plan.effective_load);
            }
            std::vector<double> demands;
            std::vector<std::size_t> local;
            for (FlowId f : nap.attached_flows) {
                const auto idx = static_cast<std::size_t>(f.value);
                const auto& term = terms_[idx];
                double d = flow_demand(term, nap);
                if (cs == ServiceClass::CS1) {
                    buckets_[idx].set_rate(d);
                    d = buckets_[idx].pass(term.flow->cbr_rate * dt, dt) / dt;
                }
                demands.push_back(d);
                local.push_back(idx);
                alloc_.flow_demand[idx] = term.flow->cbr_rate;
            }
            if (demands.empty()) continue;
            const auto shares = share_capacity(demands, nap.wireless_capacity);
            double total = 0.0;
            for (double s : shares) total += s;
            for (std::size_t k = 0; k < local.size(); ++k) {
                flows.push_back(local[k]);
                wireless.push_back(shares[k]);
                nap_cap_left.push_back(nap.wireless_capacity - (total - shares[k]));
            }
        }
        if (flows.empty()) continue;
        const auto carried = share_capacity(wireless, tech.backhaul.capacity);
        for (std::size_t k = 0; k < flows.size(); ++k) {
            const auto idx = flows[k];
            const auto& term = terms_[idx];
            const NapContext ctx{nap_cap_left[k], throttle_[idx]};
            const double rate = enforce_cs(*term.flow, carried[k], cs, ctx);
            alloc_.flow_rate[idx] = rate;
            alloc_.nap_total[static_cast<std::size_t>(term.attachment.nap.value)] += rate;
            alloc_.backhaul_total[static_cast<std::size_t>(tech.id.value)] += rate;
            lost_[idx] += std::max(0.0, term.flow->cbr_rate - rate) * dt / kPacketBits;
        }
    }
}

void Engine::step_record() {
    if (!due(config_.record_interval)) return;
    result_.times.push_back(now());
    std::vector<int> per_tech(techs_.size(), 0);
    std::vector<int> per_nap(naps_.size(), 0);
    int blocked = 0, detached = 0, active_count = 0;
    for (const auto& t : terms_) {
        const auto idx = static_cast<std::size_t>(t.id.value);
        const bool on = active(t);
        const bool attached = on && t.attachment.kind == AttachmentKind::Attached;
        if (on) {
            ++active_count;
            if (attached) {
                const auto& nap = naps_[static_cast<std::size_t>(t.attachment.nap.value)];
                ++per_nap[static_cast<std::size_t>(nap.id.value)];
                ++per_tech[static_cast<std::size_t>(nap.technology.value)];
            } else if (t.attachment.kind == AttachmentKind::Blocked) {
                ++blocked;
            } else {
                ++detached;
            }
        }
        const double rate = alloc_.flow_rate[idx];
        result_.flow_throughput[idx].push_back(attached ? rate : kNaN);
        result_.interarrival_delay_ms[idx].push_back(attached && rate > 0.0 ? kPacketBits / rate * 1000.0 : kNaN);
        result_.lost_packets[idx].push_back(on ? lost_[idx] : kNaN);
    }
    result_.flows_per_tech.push_back(std::move(per_tech));
    result_.flows_per_nap.push_back(std::move(per_nap));
    result_.blocked.push_back(blocked);
    result_.detached.push_back(detached);
    result_.active.push_back(active_count);
    for (const auto& tech : techs_) {
        const auto i = static_cast<std::size_t>(tech.id.value);
        result_.backhaul_quality[i].push_back(tech.q_back.value());
        result_.reputation[i].push_back(tech.reputation.value());
    }
    for (const auto& nap : naps_) {
        const auto& tech = techs_[static_cast<std::size_t>(nap.technology.value)];
        auto it = tech.q_nap_by_nap.find(nap.id);
        result_.nap_quality[static_cast<std::size_t>(nap.id.value)].push_back(
            it == tech.q_nap_by_nap.end() ? kNaN : it->second.value());
    }
}

}  // namespace brokersim
