#pragma once

// Small hand-rolled generators for property tests. Every test seeds its own
// stream so failures replay exactly.

#include <cstdint>
#include <random>
#include <vector>

#include "brokersim/policy.hpp"

namespace gen {

inline constexpr int kCases = 500;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }

    // Biased towards boundary values, where formula bugs tend to live.
    double unit() {
        switch (integer(0, 9)) {
            case 0: return 0.0;
            case 1: return 1.0;
            default: return real(0.0, 1.0);
        }
    }

    std::vector<double> reals(int n, double lo, double hi) {
        std::vector<double> out(static_cast<std::size_t>(n));
        for (auto& v : out) v = real(lo, hi);
        return out;
    }

    brokersim::PolicySet policy() {
        brokersim::PolicySet p;
        p.w1 = unit();
        p.w2 = 1.0 - p.w1;
        p.alpha = unit();
        p.qual_thr = real(0.05, 0.95);
        p.delta = real(0.0, 1.0);
        p.rtt_base = real(1.0, 100.0);
        p.rtt_congestion_threshold = real(p.rtt_base, 250.0);
        p.rtt_max = real(p.rtt_congestion_threshold + 1.0, 600.0);
        p.backhaul_quality_mode =
            coin() ? brokersim::BackhaulQualityMode::Normalized : brokersim::BackhaulQualityMode::Literal;
        return p;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace gen
