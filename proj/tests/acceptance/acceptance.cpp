// Acceptance checks: one PASS/FAIL line per criterion. With an argument N only
// criterion N runs; the exit code is non-zero when any selected check fails.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "brokersim/metrics.hpp"
#include "brokersim/planner.hpp"
#include "brokersim/scenario.hpp"

using namespace brokersim;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool within(double value, double target, double rel) { return std::abs(value - target) <= rel * target; }

std::size_t sample_at(const RunResult& r, double t) {
    auto it = std::lower_bound(r.times.begin(), r.times.end(), t - 1e-9);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - r.times.begin(), r.times.size() - 1));
}

int tech_index(const RunResult& r, const std::string& name) {
    return static_cast<int>(std::find(r.technologies.begin(), r.technologies.end(), name) - r.technologies.begin());
}

double attached(const RunResult& r, std::size_t s, int tech = -1) {
    if (tech >= 0) return r.flows_per_tech[s][static_cast<std::size_t>(tech)];
    return std::accumulate(r.flows_per_tech[s].begin(), r.flows_per_tech[s].end(), 0.0);
}

template <class F>
double mean_over(const std::vector<RunResult>& rs, F&& f) {
    double sum = 0.0;
    for (const auto& r : rs) sum += f(r);
    return sum / static_cast<double>(rs.size());
}

// Mean of a per-sample quantity over [t0, t1] for one run.
template <class F>
double window_mean(const RunResult& r, double t0, double t1, F&& f) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t s = 0; s < r.times.size(); ++s)
        if (r.times[s] >= t0 - 1e-9 && r.times[s] <= t1 + 1e-9) {
            sum += f(s);
            ++n;
        }
    return n ? sum / n : std::nan("");
}

std::vector<RunResult> replicate(const std::string& name, int n = 10) { return run_replications(preset(name), n, 1); }

// Highest n for which the NAP quality with n flows stays above QT (q_back = 1).
int knee_oracle(double k1, const PolicySet& p) {
    int last = 0;
    for (int n = 0; n <= 40; ++n)
        if (p.w1 * std::max(0.0, 1.0 - n * k1) + p.w2 > p.qual_thr) last = n;
    return last;
}

Verdict formulas() {
    const auto t0 = Clock::now();
    PolicySet d;
    PolicySet half = d;
    half.w1 = half.w2 = 0.5;
    struct Case {
        const char* what;
        double got, want;
    };
    const std::vector<Quality> two{Quality(0.6), Quality(0.8)}, single{Quality(0.7)}, ideal(3, Quality(1.0));
    const std::vector<Case> cases{
        {"q_back(50)", compute_backhaul_quality(50, d).value(), 1.0},
        {"q_back(300)", compute_backhaul_quality(300, d).value(), 0.0},
        {"q_back(160)", compute_backhaul_quality(160, d).value(), 0.5},
        {"wq(0)", compute_wireless_quality(0, 0.0524).value(), 1.0},
        {"wq(24, wimax)", compute_wireless_quality(24, 0.0183).value(), 0.5608},
        {"wq(8, wifi)", compute_wireless_quality(8, 0.0524).value(), 0.5808},
        {"q_nap(1,1)", compute_nap_quality(Quality(1), Quality(1), d).value(), 1.0},
        {"q_nap(0.57,1,0.5,0.5)", compute_nap_quality(Quality(0.57), Quality(1), half).value(), 0.785},
        {"q_nap(0.5,0)", compute_nap_quality(Quality(0.5), Quality(0), d).value(), 0.4},
        {"rep[0.7]", compute_reputation(single).value(), 0.7},
        {"rep[0.6,0.8]", compute_reputation(two).value(), 0.7},
        {"rep[1,1,1]", compute_reputation(ideal).value(), 1.0},
        {"P(thr,QT,1)", compute_rank_score(d.pow_thr, Quality(d.qual_thr), Quality(1), d).value, 0.0},
        {"P(2thr,QT,1)", compute_rank_score(2 * d.pow_thr, Quality(d.qual_thr), Quality(1), d).value, 0.2},
        {"P(2thr,QT,0.5)", compute_rank_score(2 * d.pow_thr, Quality(d.qual_thr), Quality(0.5), d).value, 0.1},
    };
    std::string bad;
    for (const auto& c : cases)
        if (std::abs(c.got - c.want) > 1e-9) bad += fmt::format(" {}={} (want {})", c.what, c.got, c.want);
    const double secs = seconds_since(t0);
    return {bad.empty() && secs < 1.0,
            fmt::format("{} examples within 1e-9 in {:.3f} s{}", cases.size(), secs, bad)};
}

Verdict admission_knees() {
    const auto t0 = Clock::now();
    PolicySet p;
    const int wifi_knee = knee_oracle(p.k1_for("wifi"), p), wimax_knee = knee_oracle(p.k1_for("wimax"), p);
    const auto rs = replicate("B");
    int wifi_max = 0, wimax_max = 0;
    for (const auto& r : rs)
        for (std::size_t s = sample_at(r, 150.0); s < r.times.size(); ++s)
            for (std::size_t n = 0; n < r.naps.size(); ++n) {
                int& slot = r.naps[n] == "BS" ? wimax_max : wifi_max;
                slot = std::max(slot, r.flows_per_nap[s][n]);
            }
    const bool oracle_ok = wifi_max <= wifi_knee && wimax_max <= wimax_knee;
    const bool literal_ok = wifi_max <= 9 && wimax_max <= 25;
    return {oracle_ok && literal_ok && seconds_since(t0) < 1.0,
            fmt::format("steady max per NAP wifi {} / wimax {}; oracle knees {} / {} ({}); stated bounds 9 / 25 ({}); "
                        "{:.2f} s",
                        wifi_max, wimax_max, wifi_knee, wimax_knee, oracle_ok ? "held" : "exceeded",
                        literal_ok ? "held" : "exceeded", seconds_since(t0))};
}

Verdict scenario_a_vs_b() {
    const auto t0 = Clock::now();
    const auto a = replicate("A"), b = replicate("B");
    const double secs = seconds_since(t0);

    // Peak load: all 80 flows started (last arrival at 88 s).
    const double a_frac = mean_over(a, [](const RunResult& r) {
                              return window_mean(r, 100.0, r.times.back(), [&](std::size_t s) {
                                  double sum = 0.0;
                                  int n = 0;
                                  for (const auto& f : r.flow_throughput)
                                      if (!std::isnan(f[s])) sum += f[s], ++n;
                                  return n ? sum / n : 0.0;
                              });
                          }) /
                          320e3;
    double b_min = 1e18;
    for (const auto& r : b)
        for (const auto& f : r.flow_throughput)
            for (std::size_t s = sample_at(r, 150.0); s < f.size(); ++s)
                if (!std::isnan(f[s])) b_min = std::min(b_min, f[s]);
    const int wimax = tech_index(b[0], "wimax"), wifi = tech_index(b[0], "wifi");
    const double bw = mean_over(b, [&](const RunResult& r) { return attached(r, sample_at(r, 150.0), wimax); });
    const double bf = mean_over(b, [&](const RunResult& r) { return attached(r, sample_at(r, 150.0), wifi); });
    const bool ok = std::abs(a_frac - 0.625) <= 0.08 && b_min >= 0.95 * 320e3 && within(bw + bf, 47.0, 0.2) &&
                    within(bw, 27.0, 0.2) && within(bf, 20.0, 0.2) && secs < 60.0;
    return {ok, fmt::format("A mean per-flow {:.1f}% of 320k; B min admitted flow after 150 s {:.1f}%; B at 150 s "
                            "{:.1f} wimax + {:.1f} wifi = {:.1f} (target 27+20); 20 runs in {:.2f} s",
                            100 * a_frac, 100 * b_min / 320e3, bw, bf, bw + bf, secs)};
}

Verdict scenario_c() {
    const auto b = replicate("B"), c = replicate("C");
    auto at270 = [](const RunResult& r) { return attached(r, sample_at(r, 270.0)); };
    const double nb = mean_over(b, at270), nc = mean_over(c, at270);
    const double ratio = nc / nb;
    return {nc < nb && ratio >= 0.35 && ratio <= 0.75,
            fmt::format("attached at 270 s: C {:.1f} vs B {:.1f}, ratio {:.3f} (allowed 0.35..0.75)", nc, nb, ratio)};
}

Verdict scenario_f() {
    const auto f = replicate("F");
    double q_min = 1.0, q_max = 0.0, back_min = 1.0;
    for (std::size_t n = 0; n < f[0].naps.size(); ++n) {
        const double q = mean_over(f, [&](const RunResult& r) {
            return window_mean(r, 200.0, r.times.back(), [&](std::size_t s) { return r.nap_quality[n][s]; });
        });
        q_min = std::min(q_min, q);
        q_max = std::max(q_max, q);
    }
    for (const auto& r : f)
        for (const auto& series : r.backhaul_quality)
            for (double v : series) back_min = std::min(back_min, v);
    return {q_min >= 0.70 && q_max <= 0.85 && back_min == 1.0,
            fmt::format("settled Q_NAP per NAP in [{:.3f}, {:.3f}] (want within [0.70, 0.85]); min backhaul quality "
                        "{:.3f}",
                        q_min, q_max, back_min)};
}

Verdict scenarios_g_h() {
    const auto g = replicate("G"), h = replicate("H");
    const int wimax = tech_index(g[0], "wimax"), wifi = tech_index(g[0], "wifi");
    auto final_mean = [](const std::vector<RunResult>& rs, int tech) {
        return mean_over(rs, [&](const RunResult& r) {
            return window_mean(r, 200.0, r.times.back(), [&](std::size_t s) { return attached(r, s, tech); });
        });
    };
    const double gw = final_mean(g, wimax), gf = final_mean(g, wifi), gt = final_mean(g, -1);
    const double ht = final_mean(h, -1);
    auto backhaul = [&](const std::vector<RunResult>& rs) {
        std::vector<double> xs;
        for (const auto& r : rs)
            for (std::size_t s = sample_at(r, 200.0); s < r.times.size(); ++s)
                xs.push_back(r.backhaul_quality[static_cast<std::size_t>(wimax)][s]);
        std::sort(xs.begin(), xs.end());
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
        return std::pair{xs[xs.size() / 2], mean};
    };
    const auto [h_median, h_mean] = backhaul(h);
    const auto [g_median, g_mean] = backhaul(g);
    const bool orderings = gf > gw && ht < gt && h_median == 1.0 && h_mean > g_mean;
    const bool counts = within(gw, 17, 0.25) && within(gf, 21, 0.25) && within(gt, 38, 0.25) && within(ht, 26, 0.25);
    return {orderings && counts,
            fmt::format("G wimax {:.1f} (17) wifi {:.1f} (21) total {:.1f} (38); H total {:.1f} (26); WiMAX q_back "
                        "median/mean G {:.2f}/{:.2f} H {:.2f}/{:.2f}; orderings {}, counts within 25% {}",
                        gw, gf, gt, ht, g_median, g_mean, h_median, h_mean, orderings ? "hold" : "broken",
                        counts ? "yes" : "no")};
}

Verdict scenario_i() {
    const auto rs = replicate("I");
    bool ok = true;
    std::string detail;
    for (double t : {260.0, 460.0, 660.0}) {
        const double pre = mean_over(rs, [&](const RunResult& r) {
            return window_mean(r, t - 20.0, t - 1.0, [&](std::size_t s) { return attached(r, s); });
        });
        double peak = 0.0;
        for (const auto& r : rs)
            for (std::size_t s = sample_at(r, t); s < sample_at(r, t + 30.0); ++s) peak = std::max(peak, attached(r, s));
        const double shed = mean_over(rs, [&](const RunResult& r) { return attached(r, sample_at(r, t + 30.0)); });
        const double after = mean_over(rs, [&](const RunResult& r) {
            return window_mean(r, t + 30.0, t + 150.0, [&](std::size_t s) { return attached(r, s); });
        });
        double ho_max = 0.0;
        for (const auto& r : rs)
            ho_max = std::max<double>(ho_max, std::count_if(r.handover_times.begin(), r.handover_times.end(),
                                                            [&](double x) { return x >= t && x < t + 200.0; }));
        const bool crowd_ok = shed <= pre * 1.05 && std::abs(after - pre) <= 0.05 * pre && ho_max <= 20;
        ok = ok && crowd_ok;
        detail += fmt::format("{}crowd@{:g}: pre {:.1f}, peak {:.0f}, +30 s {:.1f}, settled {:.1f}, handovers <= {:.0f}",
                              detail.empty() ? "" : "; ", t, pre, peak, shed, after, ho_max);
    }
    return {ok, detail};
}

Verdict planner_ordinal() {
    const auto rows = compare(synthetic_week(kDefaultPeakCustomers));
    auto row = [&](int s, bool broker) {
        return *std::find_if(rows.begin(), rows.end(),
                             [&](const ComparisonRow& r) { return r.strategy == s && r.broker_enabled == broker; });
    };
    const bool off_b = row(1, false).profit_b > row(1, false).profit_a && row(2, false).profit_b > row(2, false).profit_a;
    const bool on_a = row(2, true).profit_a > row(2, true).profit_b;
    bool quality = true;
    for (int s : {1, 2})
        quality = quality && row(s, true).quality_a > row(s, false).quality_a &&
                  row(s, true).quality_b > row(s, false).quality_b;
    return {off_b && on_a && quality,
            fmt::format("broker off, B dominates both strategies: {}; broker on + strategy 2, A dominates: {} "
                        "({:.0f} vs {:.0f}); quality on > off for both providers: {}",
                        off_b ? "yes" : "no", on_a ? "yes" : "no", row(2, true).profit_a, row(2, true).profit_b,
                        quality ? "yes" : "no")};
}

Verdict properties() {
    const auto t0 = Clock::now();
    std::string bad;

    auto c = preset("E");
    c.duration = 150.0;
    const auto r1 = run(c, 3), r2 = run(c, 3);
    if (r1.flows_per_tech != r2.flows_per_tech || r1.handover_times != r2.handover_times ||
        r1.block_times != r2.block_times)
        bad += " determinism";

    long ticks = 0;
    bool conserved = true, cs2 = true;
    for (const char* name : {"A", "B", "G", "I"}) {
        const auto s = preset(name);
        Engine e(engine_config(s), s.technologies, s.naps, build_terminals(s, 1), 1);
        while (!e.finished()) {
            e.advance();
            ++ticks;
            const auto& a = e.last_allocation();
            for (const auto& n : e.naps())
                conserved = conserved && a.nap_total[static_cast<std::size_t>(n.id.value)] <= n.wireless_capacity + 1e-6;
            for (const auto& t : e.technologies())
                conserved = conserved && a.backhaul_total[static_cast<std::size_t>(t.id.value)] <= t.backhaul.capacity + 1e-6;
            for (const auto& t : e.terminals())
                cs2 = cs2 && a.flow_rate[static_cast<std::size_t>(t.id.value)] <= t.flow->cbr_rate + 1e-6;
        }
    }
    if (!conserved) bad += " conservation";
    if (!cs2) bad += " cs2-cap";

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool in_range = true;
    for (int i = 0; i < 100000; ++i) {
        PolicySet p;
        p.w1 = u(rng);
        p.w2 = 1.0 - p.w1;
        const Quality qb = compute_backhaul_quality(1000 * u(rng), p);
        const Quality wq = compute_wireless_quality(60 * u(rng), 0.001 + 0.2 * u(rng));
        const double q = compute_nap_quality(wq, qb, p).value();
        in_range = in_range && q >= 0.0 && q <= 1.0 && qb.value() >= 0.0 && qb.value() <= 1.0;
    }
    if (!in_range) bad += " quality-range";

    bool fixed_point = true;
    const std::vector<double> k1{0.0183, 0.0524};
    for (int i = 0; i < 2000; ++i) {
        TerminalState t;
        AgentConfig agent;
        for (int k = 0; k < 4; ++k)
            on_announcement(t, {NapId(k), TechnologyId(k % 2), Quality(u(rng)), Quality(0.1 + 0.9 * u(rng)), 1 + k % 2, 0},
                            5e-8 * u(rng), 1.0, 0.0, agent);
        for (int round = 0; round < 5; ++round) apply(t, decide(t, PolicySet{}, agent, k1));
        const int settled = t.handover_count;
        for (int round = 0; round < 5; ++round) apply(t, decide(t, PolicySet{}, agent, k1));
        fixed_point = fixed_point && t.handover_count == settled;
    }
    if (!fixed_point) bad += " ping-pong";

    const double secs = seconds_since(t0);
    return {bad.empty() && secs < 120.0,
            fmt::format("determinism, conservation over {} ticks, CS2 cap, 100000 fuzzed qualities, 2000 frozen-metric "
                        "agents in {:.2f} s{}{}",
                        ticks, secs, bad.empty() ? "" : "; failed:", bad)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"formula examples", formulas},
        {"admission knees", admission_knees},
        {"scenario A vs B", scenario_a_vs_b},
        {"scenario C vs B", scenario_c},
        {"scenario F", scenario_f},
        {"scenarios G/H", scenarios_g_h},
        {"scenario I stability", scenario_i},
        {"planner ordinal", planner_ordinal},
        {"property suites", properties},
    };
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > static_cast<int>(criteria.size())) {
            fmt::print(stderr, "usage: {} [1..{}]\n", argv[0], criteria.size());
            return 2;
        }
    }
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && static_cast<int>(i) + 1 != only) continue;
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.pass;
        fmt::print("criterion {} [{}] {}: {}\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first, v.detail);
        std::fflush(stdout);
    }
    return failures ? 1 : 0;
}
