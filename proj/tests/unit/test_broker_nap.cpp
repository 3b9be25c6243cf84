#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "../support/generators.hpp"
#include "brokersim/broker.hpp"
#include "brokersim/nap.hpp"

using namespace brokersim;

namespace {

TechnologyState tech_with(int naps, double capacity = 100.0) {
    TechnologyState t;
    t.id = TechnologyId(0);
    t.name = "wifi";
    t.backhaul.capacity = capacity;
    for (int i = 0; i < naps; ++i) t.naps.push_back(NapId(i));
    return t;
}

NapState wifi_nap() {
    NapState n;
    n.id = NapId(0);
    n.technology = TechnologyId(0);
    n.k1 = 0.0524;
    n.coverage_radius = 20.0;
    n.last_metrics = AnnouncedMetrics{n.id, n.technology, Quality(0.8), Quality(0.8), 1, 0.0};
    return n;
}

}  // namespace

TEST_SUITE("broker") {

TEST_CASE("probe examples") {
    PolicySet p;
    ProbeConfig probe;
    auto t = tech_with(1);
    auto idle = slave_probe(t, 0.0, 0.0, probe, p);
    CHECK(idle.succeeded);
    CHECK(t.last_rtt == 20.0);
    CHECK(t.q_back.value() == 1.0);

    auto sat = slave_probe(t, 120.0, 0.5, probe, p);
    CHECK_FALSE(sat.succeeded);
    CHECK(t.last_rtt == p.rtt_max);
    CHECK(t.q_back.value() == doctest::Approx(0.0));

    // 160 ms exceeds the 100 ms timeout on every attempt.
    auto slow = slave_probe(t, 105.0, 1.0, probe, p);
    CHECK(slow.attempts == 1 + probe.max_retries);
    CHECK(t.last_rtt == p.rtt_max);

    CHECK_THROWS_AS(slave_probe(t, 0.0, 0.3, probe, p), std::logic_error);
}

TEST_CASE("probe config validation") {
    ProbeConfig p;
    CHECK_NOTHROW(p.validate());
    p.timeout = 0.6;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.max_retries = -1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("aggregate examples") {
    PolicySet p;
    auto one = tech_with(1);
    auto r1 = slave_aggregate(one, {{NapId(0), Quality(1.0)}}, 0.0, p);
    CHECK(r1.reputation.value() == doctest::Approx(1.0));
    REQUIRE(r1.announcements.size() == 1);
    CHECK(r1.announcements[0].q_nap.value() == doctest::Approx(1.0));

    auto two = tech_with(2);
    auto r2 = slave_aggregate(two, {{NapId(0), Quality(0.5808)}, {NapId(1), Quality(0.5808)}}, 0.0, p);
    for (const auto& a : r2.announcements) CHECK(a.q_nap.value() == doctest::Approx(0.66464).epsilon(1e-12));
    CHECK(r2.reputation.value() == doctest::Approx(0.66464).epsilon(1e-12));

    // NAP 1 stays silent: its previous value is kept.
    auto r3 = slave_aggregate(two, {{NapId(0), Quality(1.0)}}, 0.5, p);
    CHECK(two.q_nap_by_nap.at(NapId(1)).value() == doctest::Approx(0.66464).epsilon(1e-12));
    CHECK(r3.reputation.value() == doctest::Approx((1.0 + 0.66464) / 2).epsilon(1e-12));
    CHECK(r3.announcements.size() == 2);

    auto r4 = slave_aggregate(two, {{NapId(7), Quality(1.0)}}, 1.0, p);
    CHECK(r4.rejected == std::vector<NapId>{NapId(7)});
}

TEST_CASE("master prioritize examples") {
    const TechnologyId a(0), b(1);
    auto r = master_prioritize({{a, Quality(0.9)}, {b, Quality(0.6)}});
    CHECK(r[a] == 1);
    CHECK(r[b] == 2);
    auto tie = master_prioritize({{a, Quality(0.7)}, {b, Quality(0.7)}});
    CHECK(tie[a] == 1);
    CHECK(tie[b] == 2);
    CHECK(master_prioritize({{b, Quality(0.1)}})[b] == 1);
    CHECK_THROWS_AS(master_prioritize({}), std::invalid_argument);
}

TEST_CASE("property: reputation is the mean of stored qualities and every NAP is announced") {
    gen::Gen g(31);
    for (int i = 0; i < gen::kCases / 5; ++i) {
        const PolicySet p = g.policy();
        const int n = g.integer(1, 6);
        auto t = tech_with(n);
        for (int round = 0; round < 5; ++round) {
            std::map<NapId, Quality> reports;
            for (int k = 0; k < n; ++k)
                if (round == 0 || g.coin(0.7)) reports[NapId(k)] = Quality(g.unit());
            slave_probe(t, g.real(0.0, 150.0), 0.5 * round, ProbeConfig{}, p);
            const auto r = slave_aggregate(t, reports, 0.5 * round, p);
            double sum = 0.0;
            for (const auto& [nap, q] : t.q_nap_by_nap) sum += q.value();
            CHECK(t.reputation.value() == doctest::Approx(sum / n).epsilon(1e-12));
            CHECK(r.announcements.size() == static_cast<std::size_t>(n));
        }
    }
}

TEST_CASE("property: backhaul quality is non-increasing in offered load") {
    gen::Gen g(32);
    for (int i = 0; i < gen::kCases; ++i) {
        const PolicySet p = g.policy();
        auto t1 = tech_with(1), t2 = tech_with(1);
        const double lo = g.real(0.0, 150.0), hi = lo + g.real(0.0, 50.0);
        slave_probe(t1, lo, 0.0, ProbeConfig{}, p);
        slave_probe(t2, hi, 0.0, ProbeConfig{}, p);
        CHECK(t1.q_back >= t2.q_back);
    }
}

TEST_CASE("property: priorities are dense ranks") {
    gen::Gen g(33);
    for (int i = 0; i < gen::kCases; ++i) {
        std::map<TechnologyId, Quality> qs;
        const int n = g.integer(1, 8);
        for (int k = 0; k < n; ++k) qs[TechnologyId(k)] = Quality(g.integer(0, 3) / 3.0);
        const auto ranks = master_prioritize(qs);
        std::set<int> seen;
        for (const auto& [tech, r] : ranks) seen.insert(r);
        CHECK(seen.size() == static_cast<std::size_t>(n));
        CHECK(*seen.begin() == 1);
        CHECK(*seen.rbegin() == n);
        for (const auto& [a, ra] : ranks)
            for (const auto& [b, rb] : ranks)
                if (qs[a] > qs[b]) CHECK(ra < rb);
    }
}

}  // TEST_SUITE

TEST_SUITE("nap") {

TEST_CASE("attach and detach examples") {
    NapState n = wifi_nap();
    attach(n, FlowId(1));
    CHECK(n.wq.value() == doctest::Approx(0.9476));
    CHECK_THROWS_AS(attach(n, FlowId(1)), std::logic_error);
    for (int f = 2; f <= 9; ++f) attach(n, FlowId(f));
    CHECK(n.wq.value() == doctest::Approx(0.5284));
    for (int f = 1; f <= 9; ++f) detach(n, FlowId(f));
    CHECK(n.wq.value() == 1.0);
    CHECK_THROWS_AS(detach(n, FlowId(3)), std::logic_error);

    NapState bs = wifi_nap();
    bs.k1 = 0.0183;
    for (int f = 0; f < 26; ++f) attach(bs, FlowId(f));
    detach(bs, FlowId(0));
    CHECK(bs.wq.value() == doctest::Approx(0.5425));
}

TEST_CASE("property: wq always equals the closed form of the final flow count") {
    gen::Gen g(34);
    for (int i = 0; i < gen::kCases / 5; ++i) {
        NapState n = wifi_nap();
        n.k1 = g.real(0.001, 0.2);
        std::set<int> flows;
        for (int step = 0; step < 60; ++step) {
            const int f = g.integer(0, 20);
            if (flows.contains(f)) {
                const double before = compute_wireless_quality(flows.size() - 1.0, n.k1).value();
                detach(n, FlowId(f));
                flows.erase(f);
                CHECK(n.wq.value() == before);
            } else {
                const double before = n.wq.value();
                attach(n, FlowId(f));
                flows.insert(f);
                if (g.coin()) {  // round trip restores wq exactly
                    detach(n, FlowId(f));
                    flows.erase(f);
                    CHECK(n.wq.value() == before);
                }
            }
            CHECK(n.wq.value() == compute_wireless_quality(static_cast<double>(flows.size()), n.k1).value());
        }
    }
}

TEST_CASE("broadcast examples") {
    NapState n = wifi_nap();
    const double thr = 7e-9;
    CHECK(broadcast(n, std::vector<TerminalView>{{TerminalId(0), {50, 0}}}, thr).empty());

    const auto edge = broadcast(n, std::vector<TerminalView>{{TerminalId(0), {20, 0}}}, thr);
    REQUIRE(edge.size() == 1);
    CHECK(edge[0].power == doctest::Approx(thr));

    const std::vector<TerminalView> three{{TerminalId(0), {2, 0}}, {TerminalId(1), {5, 0}}, {TerminalId(2), {9, 0}}};
    const auto fan = broadcast(n, three, thr);
    REQUIRE(fan.size() == 3);
    std::set<double> powers;
    for (const auto& d : fan) {
        REQUIRE(d.metrics);
        CHECK(d.metrics->q_nap == n.last_metrics->q_nap);
        powers.insert(d.power);
    }
    CHECK(powers.size() == 3);

    n.last_metrics.reset();
    CHECK(broadcast(n, three, thr).empty());
    const auto beacons = beacon(n, three, thr);
    CHECK(beacons.size() == 3);
    for (const auto& d : beacons) CHECK_FALSE(d.metrics);
}

TEST_CASE("property: broadcast reaches exactly the terminals within coverage") {
    gen::Gen g(35);
    for (int i = 0; i < gen::kCases / 5; ++i) {
        NapState n = wifi_nap();
        n.position = {g.real(-50, 50), g.real(-50, 50)};
        n.coverage_radius = g.real(1, 40);
        std::vector<TerminalView> views;
        std::set<int> inside;
        for (int k = 0; k < 40; ++k) {
            const Position p{g.real(-100, 100), g.real(-100, 100)};
            views.push_back({TerminalId(k), p});
            if (std::hypot(p.x - n.position.x, p.y - n.position.y) <= n.coverage_radius) inside.insert(k);
        }
        std::set<int> reached;
        for (const auto& d : broadcast(n, views, 7e-9)) reached.insert(d.terminal.value);
        CHECK(reached == inside);
    }
}

}  // TEST_SUITE
