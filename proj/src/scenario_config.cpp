#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "brokersim/scenario.hpp"

namespace brokersim {

namespace {

namespace pt = boost::property_tree;

using Setter = std::function<void(const std::string& value, const std::string& path)>;
using Section = std::map<std::string, Setter>;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ScenarioError(path + ": " + what); }

double to_double(const std::string& v, const std::string& path) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
        fail(path, "expected a number, got '" + v + "'");
    return out;
}

long long to_int(const std::string& v, const std::string& path) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) fail(path, "expected an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& v, const std::string& path) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    fail(path, "expected a boolean, got '" + v + "'");
}

template <class F>
auto wrap(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
}

Setter num(double& target) {
    return [&target](const std::string& v, const std::string& p) { target = to_double(v, p); };
}
Setter integer(int& target) {
    return [&target](const std::string& v, const std::string& p) { target = static_cast<int>(to_int(v, p)); };
}
Setter flag(bool& target) {
    return [&target](const std::string& v, const std::string& p) { target = to_bool(v, p); };
}
Setter text(std::string& target) {
    return [&target](const std::string& v, const std::string&) { target = v; };
}

std::vector<FlashCrowd> parse_crowds(const std::string& v, const std::string& path) {
    std::vector<FlashCrowd> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
        const auto colon = item.find(':');
        if (colon == std::string::npos) fail(path, "expected time:size entries, got '" + item + "'");
        out.push_back({to_double(item.substr(0, colon), path),
                       static_cast<int>(to_int(item.substr(colon + 1), path))});
    }
    return out;
}

void apply_section(const pt::ptree& section, const std::string& name, const Section& setters) {
    for (const auto& [key, node] : section) {
        const std::string path = name + "." + key;
        auto it = setters.find(key);
        if (it == setters.end()) fail(path, "unknown key");
        it->second(node.data(), path);
    }
}

TechnologySpec& technology_named(ScenarioConfig& c, const std::string& name) {
    for (auto& t : c.technologies)
        if (t.name == name) return t;
    c.technologies.push_back(TechnologySpec{name, 0, BackhaulModel{}, 0.1});
    return c.technologies.back();
}

NapSpec& nap_named(ScenarioConfig& c, const std::string& name) {
    for (auto& n : c.naps)
        if (n.name == name) return n;
    c.naps.push_back(NapSpec{name, "", {}, 20.0, 3.5e6, std::nullopt});
    return c.naps.back();
}

void apply_scenario(ScenarioConfig& c, const pt::ptree& s) {
    Section setters{
        {"preset", [](const std::string&, const std::string&) {}},
        {"name", text(c.name)},
        {"description", text(c.description)},
        {"duration", num(c.duration)},
        {"tick", num(c.tick)},
        {"record_interval", num(c.record_interval)},
        {"broker_enabled", flag(c.broker_enabled)},
        {"default_technology", text(c.default_technology)},
        {"iterations", integer(c.iterations)},
        {"seed", [&c](const std::string& v, const std::string& p) {
             const auto s = to_int(v, p);
             if (s < 0) fail(p, "must be >= 0");
             c.seed = static_cast<std::uint64_t>(s);
         }},
    };
    apply_section(s, "scenario", setters);
}

void apply_policy(ScenarioConfig& c, const pt::ptree& s) {
    auto& p = c.policy;
    Section setters{
        {"rtt_max", num(p.rtt_max)},
        {"k_back", num(p.k_back)},
        {"rtt_congestion_threshold", num(p.rtt_congestion_threshold)},
        {"rtt_base", num(p.rtt_base)},
        {"w1", num(p.w1)},
        {"w2", num(p.w2)},
        {"alpha", num(p.alpha)},
        {"pow_thr", num(p.pow_thr)},
        {"qual_thr", num(p.qual_thr)},
        {"delta", num(p.delta)},
        {"backhaul_quality_mode",
         [&p](const std::string& v, const std::string& path) {
             p.backhaul_quality_mode = wrap(path, [&] { return parse_backhaul_quality_mode(v); });
         }},
        {"cs_class",
         [&p](const std::string& v, const std::string& path) {
             p.cs_class = wrap(path, [&] { return parse_service_class(v); });
         }},
    };
    for (const auto& [key, node] : s) {
        if (key.rfind("k1_", 0) == 0) {
            p.k1_per_technology[key.substr(3)] = to_double(node.data(), "policy." + key);
            continue;
        }
        const std::string path = "policy." + key;
        auto it = setters.find(key);
        if (it == setters.end()) fail(path, "unknown key");
        it->second(node.data(), path);
    }
}

void apply_probe(ScenarioConfig& c, const pt::ptree& s) {
    apply_section(s, "probe",
                  {{"period", num(c.probe.period)},
                   {"timeout", num(c.probe.timeout)},
                   {"max_retries", integer(c.probe.max_retries)}});
}

void apply_agent(ScenarioConfig& c, const pt::ptree& s) {
    auto& a = c.agent;
    apply_section(s, "agent",
                  {{"link_update_interval", num(a.link_update_interval)},
                   {"link_update_jitter", num(a.link_update_jitter)},
                   {"staleness_factor", num(a.staleness_factor)},
                   {"admission_lookahead", flag(a.admission_lookahead)},
                   {"max_backoff_exponent", integer(a.max_backoff_exponent)}});
}

void apply_traffic(ScenarioConfig& c, const pt::ptree& s, const std::filesystem::path& base_dir) {
    auto rwp = [&c]() -> RandomWaypointParams& {
        if (!c.random_waypoint) c.random_waypoint = RandomWaypointParams{};
        return *c.random_waypoint;
    };
    Section setters{
        {"static_terminals", integer(c.static_terminals)},
        {"static_x", num(c.static_position.x)},
        {"static_y", num(c.static_position.y)},
        {"mobile_terminals", integer(c.mobile_terminals)},
        {"mobile_left_x", num(c.mobile.left_start.x)},
        {"mobile_left_y", num(c.mobile.left_start.y)},
        {"mobile_right_x", num(c.mobile.right_start.x)},
        {"mobile_right_y", num(c.mobile.right_start.y)},
        {"mobile_dest_x", num(c.mobile.dest.x)},
        {"mobile_dest_y", num(c.mobile.dest.y)},
        {"mobile_speed", num(c.mobile.speed)},
        {"mobile_first_start", num(c.mobile.first_start)},
        {"mobile_pair_interval", num(c.mobile.pair_interval)},
        {"first_arrival", num(c.first_arrival)},
        {"arrival_interval", num(c.arrival_interval)},
        {"cbr_rate", num(c.cbr_rate)},
        {"traffic_type",
         [&c](const std::string& v, const std::string& p) {
             c.traffic_type = wrap(p, [&] { return parse_traffic_type(v); });
         }},
        {"flash_crowds", [&c](const std::string& v, const std::string& p) { c.flash_crowds = parse_crowds(v, p); }},
        {"mobility_trace",
         [&c, &base_dir](const std::string& v, const std::string&) {
             std::filesystem::path path(v);
             c.mobility_trace = (path.is_relative() && !base_dir.empty() ? base_dir / path : path).string();
         }},
        {"random_waypoint",
         [&c](const std::string& v, const std::string& p) {
             if (to_bool(v, p)) {
                 if (!c.random_waypoint) c.random_waypoint = RandomWaypointParams{};
             } else {
                 c.random_waypoint.reset();
             }
         }},
        {"rwp_width", [rwp](const std::string& v, const std::string& p) { rwp().width = to_double(v, p); }},
        {"rwp_height", [rwp](const std::string& v, const std::string& p) { rwp().height = to_double(v, p); }},
        {"rwp_min_speed", [rwp](const std::string& v, const std::string& p) { rwp().min_speed = to_double(v, p); }},
        {"rwp_max_speed", [rwp](const std::string& v, const std::string& p) { rwp().max_speed = to_double(v, p); }},
        {"rwp_max_pause", [rwp](const std::string& v, const std::string& p) { rwp().max_pause = to_double(v, p); }},
    };
    apply_section(s, "traffic", setters);
}

void apply_technology(ScenarioConfig& c, const std::string& name, const pt::ptree& s) {
    auto& t = technology_named(c, name);
    apply_section(s, "technology:" + name,
                  {{"provider", integer(t.provider)},
                   {"backhaul_capacity", num(t.backhaul.capacity)},
                   {"rtt_base", num(t.backhaul.rtt_base)},
                   {"rtt_max", num(t.backhaul.rtt_max)},
                   {"util_knee", num(t.backhaul.util_knee)},
                   {"util_sat", num(t.backhaul.util_sat)},
                   {"broadcast_period", num(t.broadcast_period)}});
}

void apply_nap(ScenarioConfig& c, const std::string& name, const pt::ptree& s) {
    auto& n = nap_named(c, name);
    apply_section(s, "nap:" + name,
                  {{"technology", text(n.technology)},
                   {"x", num(n.position.x)},
                   {"y", num(n.position.y)},
                   {"radius", num(n.coverage_radius)},
                   {"capacity", num(n.wireless_capacity)},
                   {"broadcast_period",
                    [&n](const std::string& v, const std::string& p) { n.broadcast_period = to_double(v, p); }}});
}

}  // namespace

void ScenarioConfig::validate() const {
    if (!(duration > 0.0)) fail("scenario.duration", "must be > 0");
    if (!(tick > 0.0)) fail("scenario.tick", "must be > 0");
    if (!(record_interval >= tick)) fail("scenario.record_interval", "must be >= tick");
    if (iterations < 1) fail("scenario.iterations", "must be >= 1");
    wrap("policy", [&] { policy.validate(); });
    wrap("probe", [&] { probe.validate(); });
    wrap("agent", [&] { agent.validate(); });
    if (technologies.empty()) fail("technology", "at least one technology is required");
    if (naps.empty()) fail("nap", "at least one NAP is required");
    std::set<std::string> techs;
    for (const auto& t : technologies) {
        const std::string path = "technology:" + t.name;
        if (!techs.insert(t.name).second) fail(path, "duplicate technology");
        if (!policy.k1_per_technology.contains(t.name)) fail("policy.k1_" + t.name, "missing load coefficient");
        wrap(path, [&] { t.backhaul.validate(); });
        if (!(t.broadcast_period > 0.0)) fail(path + ".broadcast_period", "must be > 0");
    }
    for (const auto& n : naps) {
        const std::string path = "nap:" + n.name;
        if (!techs.contains(n.technology)) fail(path + ".technology", "unknown technology '" + n.technology + "'");
        if (!(n.coverage_radius > 0.0)) fail(path + ".radius", "must be > 0");
        if (!(n.wireless_capacity > 0.0)) fail(path + ".capacity", "must be > 0");
        if (n.broadcast_period && !(*n.broadcast_period > 0.0)) fail(path + ".broadcast_period", "must be > 0");
    }
    if (static_terminals < 0) fail("traffic.static_terminals", "must be >= 0");
    if (mobile_terminals < 0) fail("traffic.mobile_terminals", "must be >= 0");
    if (mobile_terminals > 0 && !(mobile.speed > 0.0)) fail("traffic.mobile_speed", "must be > 0");
    if (!(arrival_interval >= 0.0)) fail("traffic.arrival_interval", "must be >= 0");
    if (!(cbr_rate > 0.0)) fail("traffic.cbr_rate", "must be > 0");
    for (const auto& fc : flash_crowds) {
        if (fc.size <= 0) fail("traffic.flash_crowds", "burst sizes must be > 0");
        if (!(fc.time >= 0.0)) fail("traffic.flash_crowds", "burst times must be >= 0");
    }
    if (random_waypoint) {
        const auto& r = *random_waypoint;
        if (!(r.width > 0.0 && r.height > 0.0)) fail("traffic.rwp_width", "area must be positive");
        if (!(r.min_speed > 0.0 && r.max_speed >= r.min_speed)) fail("traffic.rwp_min_speed", "invalid speed range");
        if (!(r.max_pause >= 0.0)) fail("traffic.rwp_max_pause", "must be >= 0");
    }
}

ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ScenarioError("line " + std::to_string(e.line()) + ": " + e.message());
    }

    ScenarioConfig c;
    c.technologies.clear();
    c.naps.clear();
    if (auto s = tree.get_child_optional("scenario")) {
        if (auto p = s->get_optional<std::string>("preset")) {
            try {
                c = preset(*p);
            } catch (const ScenarioError& e) {
                fail("scenario.preset", e.what());
            }
        }
    }
    for (const auto& [name, section] : tree) {
        if (section.empty() && !section.data().empty()) fail(name, "unknown key (keys must live in a section)");
        if (name == "scenario") {
            apply_scenario(c, section);
        } else if (name == "policy") {
            apply_policy(c, section);
        } else if (name == "probe") {
            apply_probe(c, section);
        } else if (name == "agent") {
            apply_agent(c, section);
        } else if (name == "traffic") {
            apply_traffic(c, section, base_dir);
        } else if (name.rfind("technology:", 0) == 0) {
            apply_technology(c, name.substr(11), section);
        } else if (name.rfind("nap:", 0) == 0) {
            apply_nap(c, name.substr(4), section);
        } else {
            fail(name, "unknown section");
        }
    }
    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_scenario(ss.str(), path.parent_path());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path.string() + ": " + e.what());
    }
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
    for (const auto& name : preset_names())
        if (name == name_or_path) return preset(name);
    if (name_or_path == "J") return preset("J");
    if (std::filesystem::exists(name_or_path)) return load_scenario(name_or_path);
    throw ScenarioError("'" + name_or_path + "' is neither a preset nor a readable scenario file");
}

}  // namespace brokersim
