#include "brokersim/planner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace brokersim {

EconomicScenario EconomicScenario::for_strategy(int strategy, bool broker_enabled) {
    EconomicScenario s;
    s.strategy = strategy;
    s.broker_enabled = broker_enabled;
    if (strategy == 1) {
        s.p_a = 0.45;
        s.ap_count = 3;
    } else if (strategy == 2) {
        s.p_a = 0.70;
        s.ap_count = 5;
    } else {
        throw std::invalid_argument("strategy must be 1 or 2");
    }
    return s;
}

void EconomicScenario::validate() const {
    if (p_a < 0 || p_b < 0 || p_h < 0) throw std::invalid_argument("tariffs must be >= 0");
    if (ap_count < 1 || bs_count < 1) throw std::invalid_argument("NAP counts must be >= 1");
    if (ap_capacity_clients < 0 || bs_capacity_clients < 0) throw std::invalid_argument("capacities must be >= 0");
    if (!(market_share_a > 0 && market_share_a < 1) || !(market_share_b > 0 && market_share_b < 1))
        throw std::invalid_argument("market shares must lie in (0, 1)");
    if (churn_cost_per_block < 0 || mbps_per_client < 0) throw std::invalid_argument("costs must be >= 0");
}

double EconomicScenario::weekly_infra_a() const {
    return capacity_a() * mbps_per_client * infra_cost_wifi / 52.0;
}

double EconomicScenario::weekly_infra_b() const {
    return capacity_b() * mbps_per_client * infra_cost_wimax / 52.0;
}

DemandProfile parse_demand(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::size_t line_no = 0;
    std::array<bool, kHoursPerWeek> seen{};
    DemandProfile d;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (!header) {
            if (line != "hour,customers") throw DemandError("line 1: expected header 'hour,customers'");
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (comma == std::string::npos) throw DemandError(where + "expected 'hour,customers'");
        long hour = -1;
        double count = 0.0;
        const std::string h = line.substr(0, comma), c = line.substr(comma + 1);
        auto [hp, he] = std::from_chars(h.data(), h.data() + h.size(), hour);
        if (he != std::errc{} || hp != h.data() + h.size()) throw DemandError(where + "bad hour '" + h + "'");
        auto [cp, ce] = std::from_chars(c.data(), c.data() + c.size(), count);
        if (ce != std::errc{} || cp != c.data() + c.size() || !std::isfinite(count))
            throw DemandError(where + "bad customer count '" + c + "'");
        if (hour < 0 || hour >= static_cast<long>(kHoursPerWeek))
            throw DemandError(where + "hour " + h + " outside 0..167");
        if (count < 0) throw DemandError(where + "negative customer count for hour " + h);
        if (seen[static_cast<std::size_t>(hour)]) throw DemandError(where + "duplicate hour " + h);
        seen[static_cast<std::size_t>(hour)] = true;
        d.customers[static_cast<std::size_t>(hour)] = count;
    }
    if (!header) throw DemandError("empty demand file");
    for (std::size_t h = 0; h < kHoursPerWeek; ++h)
        if (!seen[h]) throw DemandError("missing hour " + std::to_string(h));
    return d;
}

DemandProfile load_demand(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DemandError(path.string() + ": cannot open demand file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_demand(ss.str());
    } catch (const DemandError& e) {
        throw DemandError(path.string() + ": " + e.what());
    }
}

DemandProfile synthetic_week(double peak) {
    if (!(peak >= 0.0)) throw std::invalid_argument("peak customers must be >= 0");
    const double off_peak = peak / 3.4;
    const double night = 0.08 * peak;
    auto bump = [](double x) { return std::exp(-0.5 * x * x); };
    DemandProfile d;
    for (std::size_t h = 0; h < kHoursPerWeek; ++h) {
        const std::size_t day = h / 24;
        const double hod = static_cast<double>(h % 24);
        double v = night;
        if (day < 5) {
            if (hod >= 5 && hod < 23)
                v = off_peak + (peak - off_peak) * std::max(bump(hod - 8.0), bump(hod - 17.5));
        } else if (hod >= 7 && hod < 23) {
            v = off_peak;
        }
        d.customers[h] = std::round(v * 1000.0) / 1000.0;
    }
    return d;
}

double peak_to_offpeak_ratio(const DemandProfile& d) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t day = 0; day < 5; ++day)
        for (std::size_t hod = 11; hod < 15; ++hod) {
            sum += d.customers[day * 24 + hod];
            ++n;
        }
    const double off = sum / n;
    const double peak = *std::max_element(d.customers.begin(), d.customers.end());
    return off > 0 ? peak / off : 0.0;
}

WeekResult simulate_week(const EconomicScenario& s, const DemandProfile& demand) {
    s.validate();
    WeekResult w;
    const double cap_a = s.capacity_a(), cap_b = s.capacity_b();
    for (double total : demand.customers) {
        HourOutcome a, b;
        a.subscribers = total * s.market_share_a;
        b.subscribers = total * s.market_share_b;
        a.served = std::min(a.subscribers, cap_a);
        b.served = std::min(b.subscribers, cap_b);
        if (s.broker_enabled) {
            const double spare_a = cap_a - a.served, spare_b = cap_b - b.served;
            a.moved = std::min(a.subscribers - a.served, spare_b);
            b.moved = std::min(b.subscribers - b.served, spare_a);
            a.hosted = b.moved;
            b.hosted = a.moved;
            a.blocked = a.subscribers - a.served - a.moved;
            b.blocked = b.subscribers - b.served - b.moved;
            a.revenue = (a.served + a.moved) * s.p_a;
            b.revenue = (b.served + b.moved) * s.p_b;
            a.transfer = (b.moved - a.moved) * s.p_h;
            b.transfer = -a.transfer;
            a.churn = a.blocked * s.churn_cost_per_block;
            b.churn = b.blocked * s.churn_cost_per_block;
            // Admission control keeps every carried connection at its nominal rate.
            a.admitted = a.subscribers > 0 ? (a.served + a.moved) / a.subscribers : 1.0;
            b.admitted = b.subscribers > 0 ? (b.served + b.moved) / b.subscribers : 1.0;
        } else {
            // Best effort: everybody attaches at home and shares the capacity.
            a.served = a.subscribers;
            b.served = b.subscribers;
            a.revenue = a.subscribers * s.p_a;
            b.revenue = b.subscribers * s.p_b;
            a.quality = a.subscribers > 0 ? std::min(1.0, cap_a / a.subscribers) : 1.0;
            b.quality = b.subscribers > 0 ? std::min(1.0, cap_b / b.subscribers) : 1.0;
        }
        a.profit = a.revenue + a.transfer - a.churn;
        b.profit = b.revenue + b.transfer - b.churn;
        w.a.hours.push_back(a);
        w.b.hours.push_back(b);
    }
    auto close = [](ProviderWeek& p, double infra) {
        p.infra_cost = infra;
        double profit = 0.0, quality = 0.0;
        for (const auto& h : p.hours) {
            profit += h.profit;
            quality += h.quality;
        }
        p.weekly_profit = profit - infra;
        p.mean_quality = p.hours.empty() ? 1.0 : quality / static_cast<double>(p.hours.size());
    };
    close(w.a, s.weekly_infra_a());
    close(w.b, s.weekly_infra_b());
    return w;
}

std::vector<ComparisonRow> compare(const DemandProfile& demand) {
    std::vector<ComparisonRow> rows;
    for (int strategy : {1, 2})
        for (bool broker : {false, true}) {
            const auto w = simulate_week(EconomicScenario::for_strategy(strategy, broker), demand);
            ComparisonRow r{strategy, broker, w.a.weekly_profit, w.b.weekly_profit, w.a.mean_quality,
                            w.b.mean_quality, w.a.weekly_profit >= w.b.weekly_profit ? 'A' : 'B'};
            rows.push_back(r);
        }
    return rows;
}

std::string format_comparison(const std::vector<ComparisonRow>& rows) {
    std::string out = fmt::format("{:<9}{:<8}{:>14}{:>14}{:>11}{:>11}  {}\n", "strategy", "broker", "profit A",
                                  "profit B", "quality A", "quality B", "dominant");
    for (const auto& r : rows)
        out += fmt::format("{:<9}{:<8}{:>14.2f}{:>14.2f}{:>11.4f}{:>11.4f}  {}\n", r.strategy,
                           r.broker_enabled ? "on" : "off", r.profit_a, r.profit_b, r.quality_a, r.quality_b,
                           r.dominant);
    return out;
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << "strategy,broker,weekly_profit_a,weekly_profit_b,mean_quality_a,mean_quality_b,dominant\n";
    for (const auto& r : rows)
        out << fmt::format("{},{},{},{},{},{},{}\n", r.strategy, r.broker_enabled ? "on" : "off", r.profit_a,
                           r.profit_b, r.quality_a, r.quality_b, r.dominant);
    out.close();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void write_hourly_csv(const WeekResult& w, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << "hour,provider,subscribers,served,moved,hosted,blocked,profit,quality,admitted\n";
    for (std::size_t h = 0; h < w.a.hours.size(); ++h)
        for (const auto& [name, p] : {std::pair<char, const ProviderWeek*>{'A', &w.a}, {'B', &w.b}}) {
            const auto& o = p->hours[h];
            out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", h, name, o.subscribers, o.served, o.moved,
                               o.hosted, o.blocked, o.profit, o.quality, o.admitted);
        }
    out.close();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace brokersim
