#pragma once

#include <map>
#include <string>
#include <vector>

#include "brokersim/ids.hpp"
#include "brokersim/metrics.hpp"
#include "brokersim/traffic.hpp"

namespace brokersim {

struct ProbeConfig {
    double period = 0.5;   // s
    double timeout = 0.1;  // s
    int max_retries = 3;

    void validate() const;
};

struct AnnouncedMetrics {
    NapId nap;
    TechnologyId technology;
    Quality q_nap;
    Quality reputation;
    int priority = 0;  // larger is better
    double timestamp = 0.0;
};

// Broker-slave view of one access technology.
struct TechnologyState {
    TechnologyId id;
    std::string name;  // also the k1 lookup key
    int provider = 0;
    BackhaulModel backhaul;
    std::vector<NapId> naps;
    double last_rtt = 0.0;
    Quality q_back{1.0};
    std::map<NapId, Quality> q_nap_by_nap;
    Quality reputation{1.0};
    int rank = 1;      // 1 = best, from the master
    int priority = 1;  // n + 1 - rank
};

struct ProbeOutcome {
    double rtt_ms = 0.0;
    int attempts = 0;
    bool succeeded = false;
};

// Requires `now` to be a multiple of probe.period (std::logic_error otherwise).
ProbeOutcome slave_probe(TechnologyState& tech, double offered_load, double now, const ProbeConfig& probe,
                         const PolicySet& policy);

struct AggregationResult {
    std::vector<AnnouncedMetrics> announcements;
    Quality reputation;              // status report for the master
    std::vector<NapId> rejected;     // reports from NAPs of another technology
};

AggregationResult slave_aggregate(TechnologyState& tech, const std::map<NapId, Quality>& wireless_reports,
                                  double now, const PolicySet& policy);

// Dense ranks 1..n by quality descending; ties go to the lower technology id.
std::map<TechnologyId, int> master_prioritize(const std::map<TechnologyId, Quality>& qualities);

}  // namespace brokersim
