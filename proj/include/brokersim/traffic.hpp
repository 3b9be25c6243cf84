#pragma once

#include <span>
#include <string>
#include <vector>

#include "brokersim/ids.hpp"

namespace brokersim {

enum class TrafficType { Voice, Video, Background };

struct Flow {
    FlowId id;
    TerminalId terminal;
    double cbr_rate = 320e3;  // bit/s
    double start_time = 0.0;  // s
    TrafficType traffic_type = TrafficType::Voice;
};

struct BackhaulModel {
    double capacity = 100e6;  // bit/s
    double rtt_base = 20.0;   // ms
    double rtt_max = 300.0;   // ms
    double util_knee = 0.9;
    double util_sat = 1.2;

    void validate() const;
};

double backhaul_rtt(double offered_load, const BackhaulModel& model);

// Max-min fair (water-filling) split; result order matches `demands`.
std::vector<double> share_capacity(std::span<const double> demands, double capacity);

// Rate limiter in bits: fills at `rate`, holds at most `burst`.
class TokenBucket {
public:
    TokenBucket(double rate, double burst);

    void set_rate(double rate);
    double rate() const { return rate_; }
    double tokens() const { return tokens_; }

    // Adds dt seconds of tokens, then releases up to `offered_bits`.
    double pass(double offered_bits, double dt);

private:
    double rate_;
    double burst_;
    double tokens_;
};

std::string to_string(TrafficType type);
TrafficType parse_traffic_type(const std::string& text);

inline constexpr double kPacketBits = 8000.0;  // 1000-byte packets

}  // namespace brokersim
