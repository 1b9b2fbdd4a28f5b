"""Smoke tests for the python bindings.

The compiled module directory is injected through PYTHONPATH by the test
registration, so a plain import must work.
"""

import json
import math

import pytest

import fracbridge as fb


def test_special_function_values():
    assert fb.beta_function(0.7, 0.4) == pytest.approx(
        3.02653229033561785505713633085, abs=1e-13
    )
    assert fb.beta_function(1.0, 1.0) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(Exception):
        fb.beta_function(0.0, 1.0)


def test_covariance_values():
    # 2^{2H - 1} at H = 0.7, s = 1, t = 2
    assert fb.fbm_covariance(0.7, 1.0, 2.0) == pytest.approx(
        1.31950791077289425937400197123, abs=1e-14
    )
    assert fb.fbm_covariance(0.5, 1.0, 2.0) == pytest.approx(1.0, abs=1e-15)


def test_regime_and_constants():
    assert fb.regime(0.7, 0.3) == "R2_log_cauchy"
    assert fb.regime(0.6, 0.1) == "R1_cauchy"
    consts = fb.limit_constants(0.6, 0.1)
    assert consts["cauchy_scale"] == pytest.approx(
        1.07400045900974409816629982384, abs=1e-12
    )
    # consistency between the two published factorizations
    ratio = consts["aux_gaussian_scale"] / math.sqrt(consts["var_xi_terminal"])
    assert consts["cauchy_scale"] == pytest.approx(ratio, abs=1e-10)


def test_sample_path_shape_and_determinism():
    a = fb.sample_path(hurst=0.7, t_max=1.0, grid_n=256, seed=5, replication=0)
    b = fb.sample_path(hurst=0.7, t_max=1.0, grid_n=256, seed=5, replication=0)
    c = fb.sample_path(hurst=0.7, t_max=1.0, grid_n=256, seed=5, replication=1)
    assert len(a) == 257
    assert a[0] == 0.0
    assert a == b
    assert a != c


def test_simulate_bridge_columns():
    sim = fb.simulate_bridge(
        hurst=0.7, alpha=0.3, horizon=1.0, t_max=0.9, grid_n=256, seed=7, replication=0
    )
    assert set(sim) == {"t", "b", "xi", "eta", "x"}
    n = len(sim["t"])
    assert n == 257
    assert all(len(sim[k]) == n for k in sim)
    # x_t = (T - t)^alpha * xi_t holds pointwise
    for i in (32, 128, 200):
        rem = 1.0 - sim["t"][i]
        assert sim["x"][i] == pytest.approx(rem**0.3 * sim["xi"][i], abs=1e-12)


def test_estimate_ladder_rows():
    rows = fb.estimate_ladder(
        hurst=0.7,
        alpha=0.3,
        horizon=1.0,
        grid_n=2048,
        epsilons=[0.1, 0.01],
        seed=3,
        replication=0,
    )
    assert [r["epsilon"] for r in rows] == [0.1, 0.01]
    for r in rows:
        assert r["error"] == pytest.approx(0.3 - r["alpha_hat_direct"], abs=1e-15)
        assert "R2_log_cauchy" in r["renormalized"]


def test_run_mc_summary():
    cfg = {
        "hurst": 0.7,
        "alpha": 0.3,
        "horizon": 1.0,
        "grid_n": 1024,
        "ladder_epsilons": [0.1, 0.01],
        "replications": 100,
        "seed": 19,
        "sampler": "davies_harte",
        "checks": ["median_decreasing"],
        "out_dir": "unused",
    }
    text = fb.run_mc(json.dumps(cfg))
    summary = json.loads(text)
    assert summary["schema_version"] == 1
    assert summary["regime"] == "R2_log_cauchy"
    assert summary["all_pass"] is True
    assert len(summary["ladder_stats"]) == 2
    # independent of the worker count
    assert fb.run_mc(json.dumps(cfg), threads=3) == text
