import csv
import math

import numpy as np
import pytest
from scipy import signal

from conftest import random_model
from scperf import (
    ArmaModel,
    DegenerateInputError,
    DomainError,
    InvalidInputError,
    MaPolicy,
    demand_mean,
    SimulationConfig,
    estimate_bullwhip,
    generate_demand,
    mmse_forecast,
    orders_via_prop1,
    psi_weights,
    run_out_policy,
)
from scperf.simulator import default_burn_in, forecast_path, replication_rng

GRID = [
    ArmaModel(),
    ArmaModel(phi=[0.5]),
    ArmaModel(phi=[-0.5]),
    ArmaModel(phi=[0.95], theta=[0.4]),
    ArmaModel(phi=[0.7, 0.2]),
    ArmaModel(phi=[-0.2, 0.7]),
]


def impulse_path(model, n, s):
    eps = np.zeros(n)
    eps[s] = 1.0
    d = demand_mean(model) + signal.lfilter(model.ma_poly(), model.ar_poly(), eps)
    return d, eps


def test_config_validation():
    m = ArmaModel(phi=[0.5])
    with pytest.raises(InvalidInputError):
        SimulationConfig(m, lead_time=0)
    with pytest.raises(InvalidInputError):
        SimulationConfig(m, replications=0)
    with pytest.raises(InvalidInputError):
        SimulationConfig(m, periods=1)
    with pytest.raises(ValueError):
        SimulationConfig(m, ma_policy="bogus")
    assert SimulationConfig(m, ma_policy="mmse").ma_policy is MaPolicy.MMSE


def test_default_burn_in():
    cfg = SimulationConfig(ArmaModel(phi=[0.5]))
    assert cfg.resolved_burn_in() == 2000
    slow = SimulationConfig(ArmaModel(phi=[0.999]))
    psi = slow.path_psi()
    assert slow.resolved_burn_in(psi) == default_burn_in(psi) == 10 * psi.truncation_index > 2000
    assert SimulationConfig(ArmaModel(), burn_in=7).resolved_burn_in() == 7


def test_generate_demand_deterministic():
    m = ArmaModel(mu=3, phi=[0.7, 0.2], theta=[0.3])
    d1, e1 = generate_demand(m, 5000, replication_rng(42, 3))
    d2, e2 = generate_demand(m, 5000, replication_rng(42, 3))
    assert np.array_equal(d1, d2) and np.array_equal(e1, e2)
    d3, _ = generate_demand(m, 5000, replication_rng(42, 4))
    assert not np.array_equal(d1, d3)
    with pytest.raises(InvalidInputError):
        generate_demand(m, 0, replication_rng(0, 0))


def test_generate_demand_recursion():
    m = ArmaModel(mu=2, phi=[0.5, -0.3], theta=[0.4, 0.1], sigma_eps=1.5)
    d, eps = generate_demand(m, 200, replication_rng(1, 0))
    mu_d = m.mu / (1 - 0.5 + 0.3)
    dev = d - mu_d
    for t in range(200):
        want = eps[t]
        for i, ph in enumerate(m.phi, 1):
            want += ph * dev[t - i] if t - i >= 0 else 0.0
        for j, th in enumerate(m.theta, 1):
            want += th * eps[t - j] if t - j >= 0 else 0.0
        assert dev[t] == pytest.approx(want, abs=1e-12)


def test_generate_demand_tiny_sigma():
    m = ArmaModel(mu=4, phi=[0.6], sigma_eps=1e-12)
    d, _ = generate_demand(m, 3000, replication_rng(0, 0))
    assert np.max(np.abs(d - 10.0)) < 1e-9


def test_ar1_sample_variance():
    m = ArmaModel(phi=[0.9])
    d, _ = generate_demand(m, 1_000_000, replication_rng(7, 0))
    d = d[2000:]
    target = 1 / (1 - 0.81)
    # long-run variance of the sample variance of an AR(1): 2 s^4 (1+phi^2)/(1-phi^2)
    se = math.sqrt(2 * target**2 * (1 + 0.81) / (1 - 0.81) / d.size)
    assert abs(d.var(ddof=1) - target) < 3 * se


@pytest.mark.parametrize("model", [ArmaModel(theta=[0.6]), ArmaModel(phi=[0.5], theta=[-0.8]), ArmaModel(phi=[0.7, 0.2])])
def test_lag1_autocovariance_sign(model):
    d, _ = generate_demand(model, 400_000, replication_rng(11, 0))
    x = d[2000:] - d[2000:].mean()
    w = psi_weights(model).weights
    target = model.sigma_eps**2 * float(np.sum(w[:-1] * w[1:]))
    # batch-means standard error of the lag-1 product series
    prod = x[:-1] * x[1:]
    batches = prod[: prod.size // 200 * 200].reshape(200, -1).mean(axis=1)
    se = batches.std(ddof=1) / math.sqrt(batches.size)
    assert abs(prod.mean() - target) < 3 * se


def test_forecast_path_matches_pointwise():
    m = ArmaModel(mu=1, phi=[0.6, 0.2], theta=[0.5])
    psi = psi_weights(m, rel_tol=1e-26)
    _, eps = generate_demand(m, 300, replication_rng(5, 0))
    mu_d = m.mu / (1 - 0.8)
    for tau in (1, 2, 5):
        path = forecast_path(mu_d, psi, eps, tau)
        for t in (0, 1, 17, 150, 299):
            assert path[t] == pytest.approx(mmse_forecast(m, psi, eps[t::-1], tau), abs=1e-12)


def test_white_noise_orders_equal_demand():
    m = ArmaModel(mu=5)
    cfg = SimulationConfig(m, lead_time=4)
    d, eps = generate_demand(m, 1000, replication_rng(0, 0))
    o, s = run_out_policy(cfg, d, eps)
    assert np.allclose(o, d, atol=1e-12)
    assert np.all(s == s[0])
    assert np.allclose(orders_via_prop1(cfg, eps), d, atol=1e-12)


def test_impulse_ar1():
    m = ArmaModel(mu=2, phi=[0.5])
    cfg = SimulationConfig(m, lead_time=1)
    d, eps = impulse_path(m, 50, 10)
    o, _ = run_out_policy(cfg, d, eps)
    o2 = orders_via_prop1(cfg, eps)
    mu_d = 4.0
    assert o[10] - mu_d == pytest.approx(1.5, abs=1e-12)
    assert o[11] - mu_d == pytest.approx(0.25, abs=1e-12)
    assert o2[10] - mu_d == pytest.approx(1.5, abs=1e-12)
    assert o2[11] - mu_d == pytest.approx(0.25, abs=1e-12)
    assert np.allclose(o[:10], mu_d, atol=1e-12)


def test_tiny_sigma_orders_constant():
    m = ArmaModel(mu=1, phi=[0.8], theta=[0.3], sigma_eps=1e-12)
    cfg = SimulationConfig(m, lead_time=3)
    d, eps = generate_demand(m, 3000, replication_rng(0, 0))
    o, _ = run_out_policy(cfg, d, eps)
    assert np.max(np.abs(o - 5.0)) < 1e-9


def test_run_out_policy_errors():
    cfg = SimulationConfig(ArmaModel(phi=[0.5]), lead_time=3, burn_in=10)
    with pytest.raises(InvalidInputError, match="too short"):
        run_out_policy(cfg, np.zeros(12), np.zeros(12))
    with pytest.raises(InvalidInputError, match="same length"):
        run_out_policy(cfg, np.zeros(20), np.zeros(21))


def test_service_level_only_shifts_levels():
    m = ArmaModel(phi=[0.7, 0.2])
    d, eps = generate_demand(m, 2000, replication_rng(3, 0))
    o1, s1 = run_out_policy(SimulationConfig(m, lead_time=3, service_level=0.6), d, eps)
    o2, s2 = run_out_policy(SimulationConfig(m, lead_time=3, service_level=0.99), d, eps)
    assert np.allclose(o1, o2, atol=1e-12)
    shift = s2 - s1
    assert np.allclose(shift, shift[0], atol=1e-12) and shift[0] > 0


def test_pathwise_identity_random_models(rng):
    for _ in range(30):
        m = random_model(rng)
        L = int(rng.integers(1, 8))
        cfg = SimulationConfig(m, lead_time=L)
        d, eps = generate_demand(m, 10_000, replication_rng(int(rng.integers(1 << 31)), 0))
        o, _ = run_out_policy(cfg, d, eps)
        assert np.max(np.abs(o - orders_via_prop1(cfg, eps))) < 1e-8


def test_pure_ma_policies():
    m = ArmaModel(mu=1, theta=[0.8])
    d, eps = generate_demand(m, 5000, replication_rng(0, 0))
    o, s = run_out_policy(SimulationConfig(m, lead_time=2), d, eps)
    assert np.array_equal(o, d) and np.all(s == s[0])
    cfg = SimulationConfig(m, lead_time=2, ma_policy="mmse")
    o, _ = run_out_policy(cfg, d, eps)
    assert np.max(np.abs(o - orders_via_prop1(cfg, eps))) < 1e-8
    assert not np.allclose(o, d)


def test_estimate_deterministic_and_thread_invariant():
    cfg = SimulationConfig(ArmaModel(phi=[0.7, 0.2]), lead_time=2, periods=20_000, replications=6, seed=9)
    a = estimate_bullwhip(cfg)
    b = estimate_bullwhip(cfg, workers=4)
    assert a.per_replication == b.per_replication
    assert a.empirical_m == b.empirical_m and a.half_width == b.half_width
    c = estimate_bullwhip(SimulationConfig(cfg.model, lead_time=2, periods=20_000, replications=6, seed=10))
    assert c.empirical_m != a.empirical_m


def test_estimate_fields():
    cfg = SimulationConfig(ArmaModel(phi=[0.5]), lead_time=1, periods=20_000, replications=8, seed=1)
    r = estimate_bullwhip(cfg, keep_trace=True)
    assert r.analytic_m == pytest.approx(1.75)
    ratios = [vo / vd for vd, vo in r.per_replication]
    assert r.empirical_m == pytest.approx(np.mean(ratios), rel=1e-14)
    assert r.half_width == pytest.approx(1.959963984540054 * np.std(ratios, ddof=1) / math.sqrt(8), rel=1e-12)
    assert r.empirical_m > 0 and r.half_width >= 0
    assert r.out_level_trace.shape == (20_000 - 2000,)
    assert set(r.to_dict()) == {"empirical_m", "analytic_m", "half_width", "per_replication"}


def test_single_replication_infinite_half_width():
    r = estimate_bullwhip(SimulationConfig(ArmaModel(phi=[0.5]), periods=5000, replications=1))
    assert r.half_width == math.inf and r.agrees()


def test_estimate_white_noise_exact():
    r = estimate_bullwhip(SimulationConfig(ArmaModel(mu=2), lead_time=3, periods=10_000, replications=5))
    assert r.analytic_m == 1.0
    assert r.empirical_m == pytest.approx(1.0, abs=1e-12)
    assert r.agrees()


def test_estimate_mmse_ma_policy():
    cfg = SimulationConfig(ArmaModel(theta=[0.5]), lead_time=1, periods=50_000, replications=10, ma_policy="mmse")
    r = estimate_bullwhip(cfg)
    assert r.analytic_m == pytest.approx(1.8)
    assert abs(r.empirical_m - 1.8) < 0.05


def test_estimate_errors(tmp_path):
    with pytest.raises(DegenerateInputError):
        estimate_bullwhip(SimulationConfig(ArmaModel(sigma_eps=1e-200), periods=3000, replications=2))
    with pytest.raises(InvalidInputError, match="must exceed"):
        estimate_bullwhip(SimulationConfig(ArmaModel(phi=[0.5]), periods=2000, replications=2))
    with pytest.raises(DomainError):
        estimate_bullwhip(SimulationConfig(ArmaModel(phi=[1.5]), periods=3000))


def test_trace_files(tmp_path):
    m = ArmaModel(mu=1, phi=[0.5])
    cfg = SimulationConfig(m, lead_time=2, periods=2100, burn_in=2000, replications=3, seed=4)
    estimate_bullwhip(cfg, trace_dir=tmp_path / "tr")
    files = sorted(p.name for p in (tmp_path / "tr").iterdir())
    assert files == ["rep_0000.csv", "rep_0001.csv", "rep_0002.csv"]
    raw = (tmp_path / "tr" / "rep_0001.csv").read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(raw.decode().splitlines()))
    assert rows[0] == ["t", "d", "O", "S", "eps"]
    assert len(rows) == 101 and rows[1][0] == "2000"
    d, eps = generate_demand(m, 2100, replication_rng(4, 1))
    o, s = run_out_policy(cfg, d, eps)
    for i, row in enumerate(rows[1:]):
        vals = [float(x) for x in row[1:]]
        assert vals == [d[2000 + i], o[2000 + i], s[2000 + i], eps[2000 + i]]
