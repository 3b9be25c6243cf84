#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "brokersim/metrics.hpp"
#include "brokersim/mobility.hpp"
#include "brokersim/planner.hpp"
#include "brokersim/scenario.hpp"
#include "brokersim/traffic.hpp"

namespace py = pybind11;
using namespace brokersim;

namespace {

py::object maybe(const Estimate& e) {
    if (!e.half_width) return py::none();
    return py::float_(*e.half_width);
}

py::dict estimate_dict(const Estimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["ci95_half_width"] = maybe(e);
    d["n"] = e.n;
    return d;
}

// Means only, shaped [key][sample]; the CSV writer carries the full detail.
template <class Series>
py::dict keyed_means(const std::vector<std::string>& keys, const Series& series) {
    py::dict out;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        std::vector<double> xs;
        for (const auto& e : series[k]) xs.push_back(e.mean);
        out[py::str(keys[k])] = xs;
    }
    return out;
}

py::dict summary_dict(const Summary& s) {
    py::dict d;
    d["scenario"] = s.scenario;
    d["replications"] = s.replications;
    d["technologies"] = s.technologies;
    d["naps"] = s.naps;
    d["times"] = s.times;
    py::dict per_tech;
    for (std::size_t k = 0; k < s.technologies.size(); ++k) {
        std::vector<double> xs;
        for (const auto& row : s.flows_per_tech) xs.push_back(row[k].mean);
        per_tech[py::str(s.technologies[k])] = xs;
    }
    d["attached_flows"] = per_tech;
    std::vector<double> tput;
    for (const auto& e : s.mean_flow_throughput) tput.push_back(e.mean);
    d["mean_flow_throughput"] = tput;
    d["backhaul_quality"] = keyed_means(s.technologies, s.backhaul_quality);
    d["reputation"] = keyed_means(s.technologies, s.reputation);
    d["nap_quality"] = keyed_means(s.naps, s.nap_quality);
    d["handovers"] = estimate_dict(s.handovers);
    d["blocks"] = estimate_dict(s.blocks);
    d["final_attached"] = estimate_dict(s.final_attached);
    return d;
}

}  // namespace

PYBIND11_MODULE(_brokersim, m) {
    m.doc() = "Brokerage service simulator for heterogeneous wireless access";

    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
    py::register_exception<DemandError>(m, "DemandError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::enum_<BackhaulQualityMode>(m, "BackhaulQualityMode")
        .value("Literal", BackhaulQualityMode::Literal)
        .value("Normalized", BackhaulQualityMode::Normalized);
    py::enum_<ServiceClass>(m, "ServiceClass")
        .value("CS0", ServiceClass::CS0)
        .value("CS1", ServiceClass::CS1)
        .value("CS2", ServiceClass::CS2);

    py::class_<PolicySet>(m, "PolicySet")
        .def(py::init<>())
        .def_readwrite("rtt_max", &PolicySet::rtt_max)
        .def_readwrite("k_back", &PolicySet::k_back)
        .def_readwrite("rtt_congestion_threshold", &PolicySet::rtt_congestion_threshold)
        .def_readwrite("rtt_base", &PolicySet::rtt_base)
        .def_readwrite("k1_per_technology", &PolicySet::k1_per_technology)
        .def_readwrite("w1", &PolicySet::w1)
        .def_readwrite("w2", &PolicySet::w2)
        .def_readwrite("alpha", &PolicySet::alpha)
        .def_readwrite("pow_thr", &PolicySet::pow_thr)
        .def_readwrite("qual_thr", &PolicySet::qual_thr)
        .def_readwrite("delta", &PolicySet::delta)
        .def_readwrite("backhaul_quality_mode", &PolicySet::backhaul_quality_mode)
        .def_readwrite("cs_class", &PolicySet::cs_class)
        .def("validate", &PolicySet::validate)
        .def("__repr__", [](const PolicySet& p) { return describe(p); });

    // Qualities cross the boundary as plain floats.
    m.def(
        "backhaul_quality",
        [](double rtt, const PolicySet& p) { return compute_backhaul_quality(rtt, p).value(); }, py::arg("rtt_ms"),
        py::arg("policy") = PolicySet{});
    m.def(
        "wireless_quality", [](double n, double k1) { return compute_wireless_quality(n, k1).value(); },
        py::arg("n_flow"), py::arg("k1"));
    m.def(
        "nap_quality",
        [](double wq, double qb, const PolicySet& p) {
            return compute_nap_quality(Quality(wq), Quality(qb), p).value();
        },
        py::arg("wq"), py::arg("q_back"), py::arg("policy") = PolicySet{});
    m.def(
        "reputation",
        [](const std::vector<double>& qs) {
            std::vector<Quality> v;
            for (double q : qs) v.emplace_back(q);
            return compute_reputation(v).value();
        },
        py::arg("nap_qualities"));
    m.def(
        "rank_score",
        [](double power, double q, double rep, const PolicySet& p) {
            return compute_rank_score(power, Quality(q), Quality(rep), p).value;
        },
        py::arg("power_w"), py::arg("q_nap"), py::arg("reputation"), py::arg("policy") = PolicySet{});

    py::class_<BackhaulModel>(m, "BackhaulModel")
        .def(py::init<>())
        .def_readwrite("capacity", &BackhaulModel::capacity)
        .def_readwrite("rtt_base", &BackhaulModel::rtt_base)
        .def_readwrite("rtt_max", &BackhaulModel::rtt_max)
        .def_readwrite("util_knee", &BackhaulModel::util_knee)
        .def_readwrite("util_sat", &BackhaulModel::util_sat);
    m.def("backhaul_rtt", &backhaul_rtt, py::arg("offered_load"), py::arg("model") = BackhaulModel{});
    m.def(
        "share_capacity",
        [](const std::vector<double>& demands, double capacity) { return share_capacity(demands, capacity); },
        py::arg("demands"), py::arg("capacity"));

    m.def(
        "parse_bonnmotion",
        [](const std::string& text) {
            std::vector<std::vector<std::tuple<double, double, double>>> out;
            for (const auto& plan : parse_bonnmotion(text)) {
                auto& trace = out.emplace_back();
                for (const auto& w : std::get<WaypointTrace>(plan).points) trace.emplace_back(w.t, w.pos.x, w.pos.y);
            }
            return out;
        },
        py::arg("text"), "Waypoints per node as (t, x, y) tuples.");

    m.def("preset_names", &preset_names);
    m.def(
        "describe_preset",
        [](const std::string& name) {
            const auto c = resolve_scenario(name);
            py::dict d;
            d["name"] = c.name;
            d["description"] = c.description;
            d["broker_enabled"] = c.broker_enabled;
            d["duration"] = c.duration;
            d["qual_thr"] = c.policy.qual_thr;
            d["w1"] = c.policy.w1;
            d["w2"] = c.policy.w2;
            d["static_terminals"] = c.static_terminals;
            d["mobile_terminals"] = c.mobile_terminals;
            py::dict backhaul;
            for (const auto& t : c.technologies) backhaul[py::str(t.name)] = t.backhaul.capacity;
            d["backhaul_capacity"] = backhaul;
            return d;
        },
        py::arg("name_or_path"));
    m.def(
        "run",
        [](const std::string& scenario, std::optional<int> iterations, std::optional<std::uint64_t> seed,
           std::optional<std::filesystem::path> out, unsigned threads) {
            auto c = resolve_scenario(scenario);
            if (iterations) c.iterations = *iterations;
            if (seed) c.seed = *seed;
            Summary s;
            {
                py::gil_scoped_release release;
                s = aggregate(run_replications(c, c.iterations, c.seed, threads), c.name);
                if (out) emit(s, c, *out);
            }
            return summary_dict(s);
        },
        py::arg("scenario"), py::arg("iterations") = py::none(), py::arg("seed") = py::none(),
        py::arg("out") = py::none(), py::arg("threads") = 0u,
        "Run a preset or scenario file and return the aggregated means.");

    m.attr("DEFAULT_PEAK_CUSTOMERS") = kDefaultPeakCustomers;
    m.def(
        "synthetic_week", [](double peak) { return synthetic_week(peak).customers; },
        py::arg("peak_customers") = kDefaultPeakCustomers);
    m.def(
        "compare_strategies",
        [](std::optional<std::vector<double>> demand) {
            DemandProfile d = synthetic_week(kDefaultPeakCustomers);
            if (demand) {
                if (demand->size() != kHoursPerWeek) throw DemandError("demand needs 168 hourly values");
                std::copy(demand->begin(), demand->end(), d.customers.begin());
            }
            py::list rows;
            for (const auto& r : compare(d)) {
                py::dict row;
                row["strategy"] = r.strategy;
                row["broker_enabled"] = r.broker_enabled;
                row["profit_a"] = r.profit_a;
                row["profit_b"] = r.profit_b;
                row["quality_a"] = r.quality_a;
                row["quality_b"] = r.quality_b;
                row["dominant"] = std::string(1, r.dominant);
                rows.append(row);
            }
            return rows;
        },
        py::arg("demand") = py::none(), "Weekly profit and quality for both strategies, broker off and on.");
}
