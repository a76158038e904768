"""Smoke tests for the Python bindings: every exported entry point is called
once and checked against an independently computed value."""

import json
import math

import pytest

import feller

COST_TRUNCATED_EUCLIDEAN = '{"metric": {"kind": "pnorm", "p": 2}, "truncate": true}'

CONFIG = json.dumps(
    {
        "check": "e",
        "semigroup": {"kind": "identity", "dimension": 2},
        "metric": {"kind": "pnorm", "p": 2},
        "y": [0.25, 0],
        "schedules": {
            "times": {"kind": "ray", "direction": ["1"], "count": 5},
            "radii": [0.5, 0.25],
            "probes": {"kind": "default", "count": 4},
        },
        "functions": [{"kind": "truncated-norm-anchor", "anchor": [0, 0]}],
        "options": {"tol": 1e-6},
    }
)


def test_exports():
    expected = {
        "scaling_asf_bound",
        "blowup_value",
        "blowup_threshold",
        "wasserstein",
        "apply_scaling",
        "scaling_log_factor",
        "check",
        "refute_identity_asf",
        "demo_asf_without_e",
        "demo_e_without_asf",
    }
    assert expected <= set(dir(feller))
    assert feller.__version__ == "0.1.0"


def test_scaling_asf_bound():
    for n in (1, 5, 20):
        for gamma in (1.0, 0.1):
            want = (n * math.exp(-n)) * gamma
            assert feller.scaling_asf_bound(n, gamma) == pytest.approx(want, rel=1e-14)
    assert feller.scaling_asf_bound(20, 1.0) <= 4.13e-8
    with pytest.raises(ValueError):
        feller.scaling_asf_bound(3, 1.0, s1="1")  # weight must contract


def test_blowup_value_and_threshold_agree():
    y, x = [1.0, 0.0], [1.1, 0.0]
    sample = feller.blowup_value(y, x, 10)
    assert sample["exponent"] == "10"
    assert sample["delta"] == pytest.approx(0.1, rel=1e-12)
    assert sample["value"] == pytest.approx(sample["delta"] * math.exp(10.0), rel=1e-12)

    target = 1e6
    m_star = feller.blowup_threshold(y, x, "1", target)
    assert m_star == 17
    assert feller.blowup_value(y, x, m_star)["value"] >= target
    assert feller.blowup_value(y, x, m_star - 1)["value"] < target

    # the exponent stays exact after the double value overflows
    huge = feller.blowup_value(y, x, 5000)
    assert huge["exponent"] == "5000"
    assert math.isinf(huge["value"])


def test_wasserstein_two_diracs():
    d = feller.wasserstein([([0.0, 0.0], 1)], [([0.3, 0.0], 1)], COST_TRUNCATED_EUCLIDEAN)
    assert d["primal"] == 0.3
    assert d["dual"] == 0.3
    assert d["gap"] == 0.0
    assert d["gap_exact"] == "0"


def test_wasserstein_modes():
    mu = [([0.0], "1/3"), ([1.0], "2/3")]
    nu = [([0.5], 1)]
    exact = feller.wasserstein(mu, nu, '{"metric": {"kind": "pnorm", "p": 1}}')
    assert exact["gap_exact"] == "0"
    assert exact["primal"] == pytest.approx(0.5, rel=1e-12)

    real = feller.wasserstein(mu, nu, '{"metric": {"kind": "pnorm", "p": 1}}', mode="real")
    assert real["gap_exact"] is None
    assert abs(real["gap"]) <= 1e-9
    assert real["primal"] == pytest.approx(0.5, rel=1e-9)

    with pytest.raises(ValueError):
        feller.wasserstein([([0.0], 1)], [([1.0], "1/2")], COST_TRUNCATED_EUCLIDEAN)


def test_apply_scaling_and_log_factor():
    moved = feller.apply_scaling(["-1", "1"], [2, 0], [1.0, 0.0])
    assert moved == [math.exp(-2.0), 0.0]
    assert feller.scaling_log_factor(["-1", "1"], [2, 0]) == "-2"
    assert feller.scaling_log_factor(["-1", "1"], ["1/2", "1/3"]) == "-1/6"


def test_check_roundtrip():
    report = json.loads(feller.check(CONFIG))
    assert report["property"] == "e"
    assert report["verdict"] in {"HoldsOnProbes", "FailsWithCertificate", "Inconclusive"}
    assert len(report["trace"]) == 10  # 2 radii x 5 times

    broken = json.loads(CONFIG)
    del broken["schedules"]["radii"]
    with pytest.raises(ValueError, match="/schedules/radii"):
        feller.check(json.dumps(broken))


def test_refute_identity_asf():
    ref = feller.refute_identity_asf([0.25, 0.0], [0.65, 0.0], 0.5)
    assert ref["z"] == [0.65, 0.0]
    assert ref["base_distance"] == pytest.approx(0.4, rel=1e-12)
    assert ref["n0"] == 2
    assert ref["reaches_one"] == 3
    assert ref["lower_bound"] == 0.5
    assert ref["values"][-1] == 1.0
    assert all(v >= 0.5 for v in ref["values"][ref["n0"] - 1 :])


def test_demos():
    code, text = feller.demo_asf_without_e()
    assert code == 0
    doc = json.loads(text)
    assert all(e["pass"] for e in doc["expectations"])
    assert doc["asf"]["verdict"] == "HoldsOnProbes"
    assert doc["asymptotic_e"]["verdict"] == "FailsWithCertificate"
    assert doc["asymptotic_e"]["certificate"]["slope"] == "1"
    assert doc["blowup"]["m_star"] == 17

    code, text = feller.demo_e_without_asf()
    assert code == 0
    doc = json.loads(text)
    assert all(e["pass"] for e in doc["expectations"])
    assert doc["e"]["verdict"] == "HoldsOnProbes"
    assert doc["refutation"]["reaches_one"] == 3
