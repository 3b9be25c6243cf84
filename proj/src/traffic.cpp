#include "brokersim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace brokersim {

void BackhaulModel::validate() const {
    if (!(capacity > 0.0)) throw std::invalid_argument("backhaul.capacity must be > 0");
    if (!(rtt_base < rtt_max)) throw std::invalid_argument("backhaul.rtt_base must be below rtt_max");
    if (!(util_knee < util_sat)) throw std::invalid_argument("backhaul.util_knee must be below util_sat");
}

double backhaul_rtt(double offered_load, const BackhaulModel& m) {
    if (!(offered_load >= 0.0)) throw std::invalid_argument("offered load must be >= 0");
    const double u = offered_load / m.capacity;
    if (u <= m.util_knee) return m.rtt_base;
    const double ramp = std::min(1.0, (u - m.util_knee) / (m.util_sat - m.util_knee));
    return m.rtt_base + (m.rtt_max - m.rtt_base) * ramp;
}

std::vector<double> share_capacity(std::span<const double> demands, double capacity) {
    if (!(capacity > 0.0)) throw std::invalid_argument("capacity must be > 0");
    std::vector<std::size_t> order(demands.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (double d : demands)
        if (!(d >= 0.0)) throw std::invalid_argument("demands must be >= 0");
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return demands[a] < demands[b]; });

    std::vector<double> alloc(demands.size(), 0.0);
    double remaining = capacity;
    std::size_t left = demands.size();
    for (std::size_t idx : order) {
        const double fair = remaining / static_cast<double>(left);
        const double a = std::min(demands[idx], fair);
        alloc[idx] = a;
        remaining = std::max(0.0, remaining - a);
        --left;
    }
    return alloc;
}

TokenBucket::TokenBucket(double rate, double burst) : rate_(rate), burst_(burst), tokens_(burst) {
    if (!(rate >= 0.0) || !(burst >= 0.0)) throw std::invalid_argument("token bucket rate and burst must be >= 0");
}

void TokenBucket::set_rate(double rate) {
    if (!(rate >= 0.0)) throw std::invalid_argument("token bucket rate must be >= 0");
    rate_ = rate;
}

double TokenBucket::pass(double offered_bits, double dt) {
    tokens_ = std::min(burst_, tokens_ + rate_ * dt);
    const double out = std::min(offered_bits, tokens_);
    tokens_ -= out;
    return out;
}

std::string to_string(TrafficType type) {
    switch (type) {
        case TrafficType::Voice: return "voice";
        case TrafficType::Video: return "video";
        case TrafficType::Background: return "background";
    }
    return "?";
}

TrafficType parse_traffic_type(const std::string& text) {
    if (text == "voice") return TrafficType::Voice;
    if (text == "video") return TrafficType::Video;
    if (text == "background") return TrafficType::Background;
    throw std::invalid_argument("unknown traffic type '" + text + "' (voice|video|background)");
}

}  // namespace brokersim
