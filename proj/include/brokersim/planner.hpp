#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace brokersim {

// Provider A runs Wi-Fi APs, provider B WiMAX BSs.
struct EconomicScenario {
    int strategy = 2;
    double p_a = 0.70;  // per connection-hour
    double p_b = 0.90;
    double p_h = 0.68;  // paid to the host per moved connection-hour
    int ap_count = 5;
    int bs_count = 1;
    int ap_capacity_clients = 8;
    int bs_capacity_clients = 24;
    double infra_cost_wifi = 600.0;    // per Mbit/s-year
    double infra_cost_wimax = 1200.0;  // per Mbit/s-year
    double mbps_per_client = 0.32;
    double churn_cost_per_block = 1.35;
    double market_share_a = 0.5;
    double market_share_b = 0.5;
    bool broker_enabled = true;

    static EconomicScenario for_strategy(int strategy, bool broker_enabled);
    void validate() const;
    double capacity_a() const { return static_cast<double>(ap_count) * ap_capacity_clients; }
    double capacity_b() const { return static_cast<double>(bs_count) * bs_capacity_clients; }
    double weekly_infra_a() const;
    double weekly_infra_b() const;
};

inline constexpr std::size_t kHoursPerWeek = 168;

struct DemandProfile {
    std::array<double, kHoursPerWeek> customers{};
};

class DemandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "hour,customers" rows for hours 0..167, header first.
DemandProfile parse_demand(const std::string& csv);
DemandProfile load_demand(const std::filesystem::path& path);

// Commuter week: weekday morning/evening peaks, flat weekend, peak/off-peak ~3.4.
DemandProfile synthetic_week(double peak_customers);
// Max hour over the mean weekday 11:00-14:00 level.
double peak_to_offpeak_ratio(const DemandProfile& demand);

inline constexpr double kDefaultPeakCustomers = 120.0;

struct HourOutcome {
    double subscribers = 0.0;
    double served = 0.0;   // on own network
    double moved = 0.0;    // to the other provider (broker ON)
    double hosted = 0.0;   // the other provider's clients carried here
    double blocked = 0.0;
    double revenue = 0.0;  // tariffs collected from own subscribers
    double transfer = 0.0; // net inter-provider payment received (negative = paid)
    double churn = 0.0;
    double profit = 0.0;   // revenue + transfer - churn
    double quality = 1.0;   // delivered / nominal rate of carried connections
    double admitted = 1.0;  // carried / subscribers
};

struct ProviderWeek {
    std::vector<HourOutcome> hours;
    double infra_cost = 0.0;
    double weekly_profit = 0.0;  // sum of hourly profit - infra_cost
    double mean_quality = 1.0;
};

struct WeekResult {
    ProviderWeek a;
    ProviderWeek b;
};

WeekResult simulate_week(const EconomicScenario& scenario, const DemandProfile& demand);

struct ComparisonRow {
    int strategy = 1;
    bool broker_enabled = false;
    double profit_a = 0.0;
    double profit_b = 0.0;
    double quality_a = 0.0;
    double quality_b = 0.0;
    char dominant = 'A';
};

// Both strategies with the broker off and on.
std::vector<ComparisonRow> compare(const DemandProfile& demand);

std::string format_comparison(const std::vector<ComparisonRow>& rows);
void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path);
void write_hourly_csv(const WeekResult& week, const std::filesystem::path& path);

}  // namespace brokersim
