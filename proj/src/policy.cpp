#include "brokersim/policy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace brokersim {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw std::invalid_argument("policy." + field + ": " + what);
}

}  // namespace

void PolicySet::validate() const {
    require(std::isfinite(w1) && w1 >= 0.0, "w1", "must be >= 0");
    require(std::isfinite(w2) && w2 >= 0.0, "w2", "must be >= 0");
    require(std::abs(w1 + w2 - 1.0) <= 1e-9, "w1", "w1 + w2 must equal 1");
    require(alpha >= 0.0 && alpha <= 1.0, "alpha", "must lie in [0, 1]");
    require(qual_thr > 0.0 && qual_thr < 1.0, "qual_thr", "must lie in (0, 1)");
    require(delta >= 0.0, "delta", "must be >= 0");
    require(pow_thr > 0.0, "pow_thr", "must be > 0");
    require(k_back > 0.0, "k_back", "must be > 0");
    for (const auto& [tech, k1] : k1_per_technology)
        require(std::isfinite(k1) && k1 > 0.0, "k1." + tech, "must be > 0");
    require(rtt_base < rtt_congestion_threshold, "rtt_base", "must be below rtt_congestion_threshold");
    require(rtt_congestion_threshold <= rtt_max, "rtt_congestion_threshold", "must not exceed rtt_max");
}

double PolicySet::k1_for(const std::string& technology_kind) const {
    auto it = k1_per_technology.find(technology_kind);
    if (it == k1_per_technology.end())
        throw std::invalid_argument("policy.k1: no coefficient for technology '" + technology_kind + "'");
    return it->second;
}

std::string to_string(BackhaulQualityMode mode) {
    return mode == BackhaulQualityMode::Literal ? "literal" : "normalized";
}

std::string to_string(ServiceClass cs) {
    switch (cs) {
        case ServiceClass::CS0: return "CS0";
        case ServiceClass::CS1: return "CS1";
        case ServiceClass::CS2: return "CS2";
    }
    return "?";
}

BackhaulQualityMode parse_backhaul_quality_mode(const std::string& text) {
    if (text == "literal") return BackhaulQualityMode::Literal;
    if (text == "normalized") return BackhaulQualityMode::Normalized;
    throw std::invalid_argument("unknown backhaul quality mode '" + text + "' (literal|normalized)");
}

ServiceClass parse_service_class(const std::string& text) {
    if (text == "CS0" || text == "cs0") return ServiceClass::CS0;
    if (text == "CS1" || text == "cs1") return ServiceClass::CS1;
    if (text == "CS2" || text == "cs2") return ServiceClass::CS2;
    throw std::invalid_argument("unknown class of service '" + text + "' (CS0|CS1|CS2)");
}

std::string describe(const PolicySet& p) {
    std::ostringstream os;
    os.precision(10);
    os << "rtt_max = " << p.rtt_max << "\n"
       << "k_back = " << p.k_back << "\n"
       << "rtt_congestion_threshold = " << p.rtt_congestion_threshold << "\n"
       << "rtt_base = " << p.rtt_base << "\n";
    for (const auto& [tech, k1] : p.k1_per_technology) os << "k1_" << tech << " = " << k1 << "\n";
    os << "w1 = " << p.w1 << "\n"
       << "w2 = " << p.w2 << "\n"
       << "alpha = " << p.alpha << "\n"
       << "pow_thr = " << p.pow_thr << "\n"
       << "qual_thr = " << p.qual_thr << "\n"
       << "delta = " << p.delta << "\n"
       << "backhaul_quality_mode = " << to_string(p.backhaul_quality_mode) << "\n"
       << "cs_class = " << to_string(p.cs_class) << "\n";
    return os.str();
}

}  // namespace brokersim
