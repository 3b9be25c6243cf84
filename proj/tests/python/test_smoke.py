import math

import pytest

import brokersim as bs


def test_formula_examples():
    assert bs.backhaul_quality(50) == 1.0
    assert bs.backhaul_quality(160) == pytest.approx(0.5)
    assert bs.wireless_quality(8, 0.0524) == pytest.approx(0.5808)
    half = bs.PolicySet()
    half.w1 = half.w2 = 0.5
    assert bs.nap_quality(0.57, 1.0, half) == pytest.approx(0.785)
    assert bs.reputation([0.6, 0.8]) == pytest.approx(0.7)
    p = bs.PolicySet()
    assert bs.rank_score(2 * p.pow_thr, p.qual_thr, 0.5) == pytest.approx(0.1)


def test_invalid_inputs_raise():
    with pytest.raises(ValueError):
        bs.reputation([])
    with pytest.raises(ValueError):
        bs.nap_quality(1.5, 1.0)
    p = bs.PolicySet()
    p.w1 = 0.7
    with pytest.raises(ValueError, match="w1"):
        p.validate()


def test_traffic_helpers():
    assert bs.share_capacity([100e3, 900e3], 800e3) == pytest.approx([100e3, 700e3])
    m = bs.BackhaulModel()
    m.capacity = 100.0
    assert bs.backhaul_rtt(105.0, m) == pytest.approx(160.0)


def test_bonnmotion():
    traces = bs.parse_bonnmotion("0 0 0 10 10 0\n")
    assert traces == [[(0.0, 0.0, 0.0), (10.0, 10.0, 0.0)]]
    with pytest.raises(bs.ParseError, match="line 1"):
        bs.parse_bonnmotion("0 0 0 10 10")


def test_presets():
    names = bs.preset_names()
    assert {"A", "B", "H", "I"} <= set(names)
    h = bs.describe_preset("H")
    assert h["qual_thr"] == 0.725
    assert h["backhaul_capacity"]["wimax"] == 5e6
    with pytest.raises(bs.ScenarioError):
        bs.describe_preset("nope")


def test_run_summary(tmp_path):
    s = bs.run("B", iterations=2, seed=3, out=str(tmp_path))
    assert s["replications"] == 2
    assert s["times"][-1] == pytest.approx(300.0)
    final = sum(series[-1] for series in s["attached_flows"].values())
    assert final == pytest.approx(s["final_attached"]["mean"])
    assert s["handovers"]["ci95_half_width"] is not None
    assert (tmp_path / "flows_per_tech.csv").read_text().startswith("t,technology,attached_flows")
    assert not math.isnan(s["mean_flow_throughput"][-1])


def test_planner():
    week = bs.synthetic_week()
    assert len(week) == 168
    rows = bs.compare_strategies()
    assert len(rows) == 4
    by = {(r["strategy"], r["broker_enabled"]): r for r in rows}
    assert by[(2, True)]["dominant"] == "A"
    assert by[(1, False)]["dominant"] == "B"
    with pytest.raises(bs.DemandError):
        bs.compare_strategies([1.0] * 10)
