#pragma once

#include <span>
#include <vector>

#include "brokersim/ids.hpp"
#include "brokersim/policy.hpp"

namespace brokersim {

// A dimensionless quality in [0, 1].
class Quality {
public:
    constexpr Quality() = default;
    // Throws std::domain_error outside [0, 1] or for NaN.
    explicit Quality(double v);
    static Quality clamped(double v);

    constexpr double value() const { return value_; }
    constexpr auto operator<=>(const Quality&) const = default;

private:
    double value_ = 0.0;
};

// Ranking score of a NAP; finite, in [-1, 1] with the clamped terms.
struct RankScore {
    double value = 0.0;
    constexpr auto operator<=>(const RankScore&) const = default;
};

Quality compute_backhaul_quality(double rtt_ms, const PolicySet& policy);
Quality compute_wireless_quality(double n_flow, double k1);
Quality compute_nap_quality(Quality wq, Quality q_back, const PolicySet& policy);
Quality compute_reputation(std::span<const Quality> nap_qualities);
RankScore compute_rank_score(double power_w, Quality q_nap, Quality reputation, const PolicySet& policy);

// Quality a NAP would report after admitting one more flow, seen from a
// terminal that only knows the announced value.
Quality projected_join_quality(Quality q_nap, double k1, const PolicySet& policy);

struct RankCandidate {
    NapId nap;
    double power = 0.0;
    Quality q_nap;
    Quality reputation;
    int priority = 0;  // larger wins ties
};

struct RankedNap {
    NapId nap;
    RankScore score;
    int priority = 0;
};

// Descending score; near-equal scores (|d| < 1e-9) fall back to higher
// priority, then lower nap id.
std::vector<RankedNap> build_ranking(std::span<const RankCandidate> candidates, const PolicySet& policy);

inline constexpr double kScoreTieEpsilon = 1e-9;

}  // namespace brokersim
