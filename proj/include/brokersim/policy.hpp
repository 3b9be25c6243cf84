#pragma once

#include <map>
#include <string>

namespace brokersim {

enum class BackhaulQualityMode { Literal, Normalized };
enum class ServiceClass { CS0, CS1, CS2 };

// Centralized broker configuration: every fitness weight and threshold used by
// the quality formulas and by the terminal agents.
struct PolicySet {
    double rtt_max = 300.0;                   // ms
    double k_back = 9600.0;                   // Literal-mode denominator
    double rtt_congestion_threshold = 150.0;  // ms
    double rtt_base = 20.0;                   // ms, Normalized mode
    std::map<std::string, double> k1_per_technology{{"wimax", 0.0183}, {"wifi", 0.0524}};
    double w1 = 0.8;
    double w2 = 0.2;
    double alpha = 0.2;
    double pow_thr = 7e-9;  // W
    double qual_thr = 0.525;
    double delta = 0.33;
    BackhaulQualityMode backhaul_quality_mode = BackhaulQualityMode::Normalized;
    ServiceClass cs_class = ServiceClass::CS2;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    double k1_for(const std::string& technology_kind) const;
};

std::string to_string(BackhaulQualityMode mode);
std::string to_string(ServiceClass cs);
BackhaulQualityMode parse_backhaul_quality_mode(const std::string& text);
ServiceClass parse_service_class(const std::string& text);

// Multi-line "key = value" dump, used by reports.
std::string describe(const PolicySet& policy);

}  // namespace brokersim
