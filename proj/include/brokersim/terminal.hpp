#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brokersim/broker.hpp"
#include "brokersim/geometry.hpp"
#include "brokersim/ids.hpp"
#include "brokersim/metrics.hpp"
#include "brokersim/mobility.hpp"
#include "brokersim/traffic.hpp"

namespace brokersim {

enum class AttachmentKind { Detached, Attached, Blocked };

struct Attachment {
    AttachmentKind kind = AttachmentKind::Detached;
    NapId nap;  // valid only when Attached
    bool operator==(const Attachment&) const = default;
};

struct KnownNap {
    AnnouncedMetrics metrics;
    double power = 0.0;
    double last_heard = 0.0;
    double broadcast_period = 0.1;
};

// Agent timing knobs. Decisions happen at link-update instants drawn per
// terminal, not on every received beacon.
struct AgentConfig {
    double link_update_interval = 10.0;  // mean, s
    double link_update_jitter = 0.5;     // interval ~ U(1 - j, 1 + j) * mean
    double staleness_factor = 3.0;       // x broadcast period
    bool admission_lookahead = true;     // join only if q_nap - w1*k1 > QT
    int max_backoff_exponent = 4;        // after pre-emption, wait up to 2^4 intervals

    void validate() const;
};

struct TerminalState {
    TerminalId id;
    Position origin;
    Position position;
    MobilityPlan plan = Static{};
    int provider = 0;
    std::optional<Flow> flow;
    Attachment attachment;
    std::map<NapId, KnownNap> known_naps;
    int handover_count = 0;
    int block_events = 0;
    int preemptions = 0;  // Attached -> Blocked transitions
    double next_decision = 0.0;
};

enum class ActionKind { Stay, Attach, Handover, Block };

struct Action {
    ActionKind kind = ActionKind::Stay;
    NapId from;
    NapId to;
    bool operator==(const Action&) const = default;
};

// Refreshes the entry for m.nap and evicts stale ones. Returns true when the
// serving NAP was evicted.
bool on_announcement(TerminalState& t, const AnnouncedMetrics& m, double power, double broadcast_period, double now,
                     const AgentConfig& agent);
bool evict_stale(TerminalState& t, double now, const AgentConfig& agent);

struct Candidate {
    NapId nap;
    double score = 0.0;
    bool stay_eligible = false;  // q_nap > QT
    bool join_eligible = false;  // q_nap (after joining, with lookahead) > QT
};

// Rules: Detached/Blocked attach to the top join-eligible NAP or block; an
// eligible serving NAP is left only for a join-eligible NAP beating it by more
// than delta; an ineligible (or lost) serving NAP is left without hysteresis.
Action select_action(const Attachment& attachment, std::span<const Candidate> ranked, double delta);

// `k1_by_technology` is indexed by TechnologyId::value.
Action decide(const TerminalState& t, const PolicySet& policy, const AgentConfig& agent,
              std::span<const double> k1_by_technology);

// Terminal-side bookkeeping of an action (counters, attachment).
void apply(TerminalState& t, const Action& action);

enum class AccessCategory { AC_VO, AC_VI, AC_BK };
enum class Phb { EF, AF, BE };

struct TrafficClassMapping {
    AccessCategory access_category;
    ServiceClass cs;
    Phb phb;
    bool operator==(const TrafficClassMapping&) const = default;
};

TrafficClassMapping map_traffic_class(TrafficType type);

struct NapContext {
    double remaining_capacity = 0.0;  // CS0 ceiling
    double throttle_scale = 1.0;      // CS1 factor for this flow's traffic type
};

inline constexpr double kThrottleFloor = 0.1;

double enforce_cs(const Flow& flow, double allocation, ServiceClass cs, const NapContext& ctx);

struct ThrottlePlan {
    double video_scale = 1.0;
    double background_scale = 1.0;
    double effective_load = 0.0;  // flows weighted by their shaped fraction

    double scale_for(TrafficType type) const;
};

// CS1: scale Background, then Video, down (never below the floor) until the
// effective load keeps the NAP quality above QT.
ThrottlePlan plan_cs1_throttle(int voice, int video, int background, double k1, Quality q_back,
                               const PolicySet& policy);

std::string to_string(AttachmentKind kind);
std::string to_string(ActionKind kind);
std::string to_string(AccessCategory ac);
std::string to_string(Phb phb);

}  // namespace brokersim
