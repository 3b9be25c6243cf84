#include <fmt/format.h>
#include <fmt/os.h>

#include <cmath>
#include <fstream>
#include <functional>

#include "brokersim/scenario.hpp"

namespace brokersim {

namespace {

std::vector<Estimate> across(const std::vector<RunResult>& rs, std::size_t n,
                             const std::function<double(const RunResult&, std::size_t)>& pick) {
    std::vector<Estimate> out(n);
    std::vector<double> xs(rs.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < rs.size(); ++r) xs[r] = pick(rs[r], i);
        out[i] = estimate(xs);
    }
    return out;
}

double mean_attached_rate(const RunResult& r, std::size_t sample) {
    double sum = 0.0;
    int n = 0;
    for (const auto& series : r.flow_throughput) {
        const double v = series[sample];
        if (std::isnan(v)) continue;
        sum += v;
        ++n;
    }
    return n ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

std::string num(double v) { return fmt::format("{}", v); }

std::string ci(const Estimate& e) { return e.half_width ? num(*e.half_width) : std::string{}; }

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const std::string& header) : path_(path), out_(path) {
        if (!out_) throw std::runtime_error(path.string() + ": cannot open for writing");
        out_ << header << '\n';
    }
    template <class... Args>
    void row(fmt::format_string<Args...> f, Args&&... args) {
        out_ << fmt::format(f, std::forward<Args>(args)...) << '\n';
    }
    void close() {
        out_.close();
        if (!out_) throw std::runtime_error(path_.string() + ": write failed");
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

void per_flow(const std::filesystem::path& path, const std::string& column, const std::vector<double>& times,
              const std::vector<std::vector<Estimate>>& series) {
    CsvFile f(path, "t,flow," + column);
    for (std::size_t s = 0; s < times.size(); ++s)
        for (std::size_t flow = 0; flow < series.size(); ++flow) {
            const auto& e = series[flow][s];
            if (!std::isnan(e.mean)) f.row("{},{},{}", num(times[s]), flow, num(e.mean));
        }
    f.close();
}

void per_key(const std::filesystem::path& path, const std::string& key, const std::string& column,
             const std::vector<double>& times, const std::vector<std::string>& names,
             const std::vector<std::vector<Estimate>>& series) {
    CsvFile f(path, "t," + key + "," + column);
    for (std::size_t s = 0; s < times.size(); ++s)
        for (std::size_t k = 0; k < names.size(); ++k) {
            const auto& e = series[k][s];
            if (!std::isnan(e.mean)) f.row("{},{},{}", num(times[s]), names[k], num(e.mean));
        }
    f.close();
}

std::string pm(const Estimate& e) {
    if (std::isnan(e.mean)) return "n/a";
    if (!e.half_width) return fmt::format("{:.4g} (CI n/a)", e.mean);
    return fmt::format("{:.4g} +/- {:.4g}", e.mean, *e.half_width);
}

}  // namespace

Summary aggregate(const std::vector<RunResult>& rs, const std::string& scenario) {
    Summary s;
    s.scenario = scenario;
    s.replications = rs.size();
    if (rs.empty()) return s;
    const auto& first = rs.front();
    for (const auto& r : rs)
        if (r.times.size() != first.times.size() || r.technologies != first.technologies ||
            r.flow_throughput.size() != first.flow_throughput.size())
            throw std::invalid_argument("aggregate: replications come from different scenarios");
    s.technologies = first.technologies;
    s.naps = first.naps;
    s.times = first.times;
    const std::size_t samples = s.times.size();
    const std::size_t techs = s.technologies.size();

    s.flows_per_tech.resize(samples);
    for (std::size_t i = 0; i < samples; ++i)
        s.flows_per_tech[i] = across(rs, techs, [i](const RunResult& r, std::size_t k) {
            return static_cast<double>(r.flows_per_tech[i][k]);
        });
    s.blocked = across(rs, samples, [](const RunResult& r, std::size_t i) { return double(r.blocked[i]); });
    s.mean_flow_throughput = across(rs, samples, mean_attached_rate);

    auto series = [&](auto member, std::size_t count) {
        std::vector<std::vector<Estimate>> out(count);
        for (std::size_t k = 0; k < count; ++k)
            out[k] = across(rs, samples, [&](const RunResult& r, std::size_t i) { return (r.*member)[k][i]; });
        return out;
    };
    const std::size_t flows = first.flow_throughput.size();
    s.flow_throughput = series(&RunResult::flow_throughput, flows);
    s.lost_packets = series(&RunResult::lost_packets, flows);
    s.interarrival_delay_ms = series(&RunResult::interarrival_delay_ms, flows);
    s.backhaul_quality = series(&RunResult::backhaul_quality, techs);
    s.reputation = series(&RunResult::reputation, techs);
    s.nap_quality = series(&RunResult::nap_quality, s.naps.size());

    std::vector<double> ho, bl, fin;
    for (const auto& r : rs) {
        ho.push_back(r.handovers);
        bl.push_back(r.blocks);
        double total = 0.0;
        if (!r.flows_per_tech.empty())
            for (int v : r.flows_per_tech.back()) total += v;
        fin.push_back(total);
    }
    s.handovers = estimate(ho);
    s.blocks = estimate(bl);
    s.final_attached = estimate(fin);
    return s;
}

void emit(const Summary& s, const ScenarioConfig& config, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error(out_dir.string() + ": " + ec.message());

    {
        CsvFile f(out_dir / "flows_per_tech.csv", "t,technology,attached_flows");
        for (std::size_t i = 0; i < s.times.size(); ++i)
            for (std::size_t k = 0; k < s.technologies.size(); ++k)
                f.row("{},{},{}", num(s.times[i]), s.technologies[k], num(s.flows_per_tech[i][k].mean));
        f.close();
    }
    per_flow(out_dir / "flow_throughput.csv", "throughput_bps", s.times, s.flow_throughput);
    per_flow(out_dir / "lost_packets.csv", "lost_packets", s.times, s.lost_packets);
    per_flow(out_dir / "interarrival_delay.csv", "delay_ms", s.times, s.interarrival_delay_ms);
    per_key(out_dir / "backhaul_quality.csv", "technology", "backhaul_quality", s.times, s.technologies,
            s.backhaul_quality);
    per_key(out_dir / "reputation.csv", "technology", "reputation", s.times, s.technologies, s.reputation);
    per_key(out_dir / "nap_quality.csv", "nap", "q_nap", s.times, s.naps, s.nap_quality);
    {
        CsvFile f(out_dir / "confidence.csv", "metric,t,key,mean,ci95_half_width,n");
        for (std::size_t i = 0; i < s.times.size(); ++i) {
            const std::string t = num(s.times[i]);
            for (std::size_t k = 0; k < s.technologies.size(); ++k) {
                const auto& name = s.technologies[k];
                const auto& a = s.flows_per_tech[i][k];
                f.row("attached_flows,{},{},{},{},{}", t, name, num(a.mean), ci(a), a.n);
                const auto& q = s.backhaul_quality[k][i];
                f.row("backhaul_quality,{},{},{},{},{}", t, name, num(q.mean), ci(q), q.n);
                const auto& rep = s.reputation[k][i];
                f.row("reputation,{},{},{},{},{}", t, name, num(rep.mean), ci(rep), rep.n);
            }
            const auto& b = s.blocked[i];
            f.row("blocked,{},all,{},{},{}", t, num(b.mean), ci(b), b.n);
            const auto& m = s.mean_flow_throughput[i];
            if (!std::isnan(m.mean)) f.row("mean_flow_throughput_bps,{},all,{},{},{}", t, num(m.mean), ci(m), m.n);
        }
        f.close();
    }

    const auto path = out_dir / "summary.txt";
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << "scenario: " << (s.scenario.empty() ? config.name : s.scenario) << "\n";
    if (!config.description.empty()) out << "description: " << config.description << "\n";
    out << "replications: " << s.replications << " (base seed " << config.seed << ")\n";
    out << "confidence: 95% Student-t" << (s.replications < 2 ? " (omitted, fewer than 2 replications)" : "")
        << "\n\n";
    out << "handovers: " << pm(s.handovers) << "\n";
    out << "block events: " << pm(s.blocks) << "\n";
    out << "attached flows at end: " << pm(s.final_attached) << "\n";
    if (!s.times.empty()) {
        const std::size_t last = s.times.size() - 1;
        for (std::size_t k = 0; k < s.technologies.size(); ++k)
            out << "  " << s.technologies[k] << ": " << pm(s.flows_per_tech[last][k]) << "\n";
        out << "mean per-flow throughput at end (bit/s): " << pm(s.mean_flow_throughput[last]) << "\n";
    }
    out << "\n[policy]\n" << describe(config.policy);
    out << "\n[probe]\nperiod = " << config.probe.period << "\ntimeout = " << config.probe.timeout
        << "\nmax_retries = " << config.probe.max_retries << "\n";
    out << "\n[agent]\nlink_update_interval = " << config.agent.link_update_interval
        << "\nlink_update_jitter = " << config.agent.link_update_jitter
        << "\nstaleness_factor = " << config.agent.staleness_factor
        << "\nadmission_lookahead = " << (config.agent.admission_lookahead ? "true" : "false")
        << "\nmax_backoff_exponent = " << config.agent.max_backoff_exponent << "\n";
    out << "\n[scenario]\nbroker_enabled = " << (config.broker_enabled ? "true" : "false")
        << "\nduration = " << config.duration << "\ntick = " << config.tick << "\n";
    for (const auto& t : config.technologies)
        out << "technology " << t.name << ": provider " << t.provider << ", backhaul " << t.backhaul.capacity
            << " bit/s, broadcast " << t.broadcast_period << " s\n";
    for (const auto& n : config.naps)
        out << "nap " << n.name << ": " << n.technology << " at (" << n.position.x << ", " << n.position.y
            << "), radius " << n.coverage_radius << " m, capacity " << n.wireless_capacity << " bit/s\n";
    out.close();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace brokersim
