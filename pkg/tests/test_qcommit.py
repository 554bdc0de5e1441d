import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import binom

from relcommit.qcommit import (
    BasisPair,
    DeviceModel,
    InfeasibleError,
    accept_rate,
    delayed_commit_run,
    epsilon_bound,
    feasibility,
    feasibility_sweep,
    honest_run,
    multiphoton_epsilon,
    multiphoton_probability,
    rows_to_csv,
)
from relcommit.qcommit.bounds import floor_mul, log_binomial_cdf

LAMBDA1 = (1 - 2 ** -0.5) / 2


def test_bb84_constants():
    pair = BasisPair.bb84()
    assert pair.overlap == pytest.approx(2 ** -0.5)
    assert pair.lambda1 == pytest.approx(LAMBDA1, abs=1e-15)
    assert round(pair.lambda1, 4) == 0.1464
    assert pair.lambda0 + pair.lambda1 == pytest.approx(1)


def test_basis_pair_probabilities():
    pair = BasisPair.bb84()
    for t in (0, 1):
        for x in (0, 1):
            assert pair.outcome_probability(t, x, t, x) == pytest.approx(1)
            assert pair.outcome_probability(t, x, 1 - t, 0) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        BasisPair((((1, 0), (1, 0)), ((1, 0), (0, 1))))
    with pytest.raises(ValueError):
        BasisPair.from_overlap(0.5)
    assert BasisPair.from_overlap(0.9).overlap == pytest.approx(0.9)


def test_epsilon_delta_zero():
    assert epsilon_bound(1, 0).epsilon == pytest.approx(0.853553, abs=1e-6)
    values = [epsilon_bound(n, 0).epsilon for n in range(1, 60)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert epsilon_bound(40, 0).epsilon == pytest.approx(((1 + 2 ** -0.5) / 2) ** 40, rel=1e-12)


def test_epsilon_example():
    b = epsilon_bound(100, 0.05)
    assert b.exact == pytest.approx(binom.cdf(5, 100, LAMBDA1), rel=1e-9)
    assert b.exact <= b.chernoff
    assert b.epsilon == b.chernoff


@pytest.mark.parametrize("delta", [0.01, 0.03, 0.05, 0.08, 0.1, 0.12, 0.14])
def test_exact_below_chernoff_grid(delta):
    for n in range(1, 201):
        b = epsilon_bound(n, delta)
        assert b.log_exact <= b.log_chernoff + 1e-12


@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 2000), p=st.floats(0.01, 0.99), k=st.integers(0, 2000))
def test_log_binomial_cdf_against_scipy(n, p, k):
    k = min(k, n)
    assert math.exp(log_binomial_cdf(k, n, p)) == pytest.approx(binom.cdf(k, n, p), rel=1e-8, abs=1e-300)


def test_large_n_is_finite():
    b = epsilon_bound(10 ** 6, 0.1)
    assert b.log_exact < b.log_chernoff < 0
    assert math.isfinite(b.log_exact)


def test_floor_mul_reads_decimal():
    assert floor_mul(0.3, 10) == 3
    assert floor_mul(0.05, 100) == 5


def test_delta_at_or_above_lambda1_rejected():
    with pytest.raises(InfeasibleError, match="lambda_1"):
        epsilon_bound(10, 0.2)
    with pytest.raises(InfeasibleError):
        epsilon_bound(10, LAMBDA1)
    with pytest.raises(ValueError):
        epsilon_bound(0, 0.01)


def test_multiphoton_probability():
    assert multiphoton_probability(0) == 0
    for mu in (1e-6, 0.1, 1, 5):
        assert multiphoton_probability(mu) == pytest.approx(1 - math.exp(-mu) * (1 + mu), rel=1e-9)


def test_multiphoton_monotone_in_mu():
    mus = list(np.logspace(-8, 1, 40))
    eps = [multiphoton_epsilon(1000, 0.3, 0.05, mu).epsilon for mu in mus]
    assert all(a <= b + 1e-15 for a, b in zip(eps, eps[1:]))


@pytest.mark.parametrize("n,gamma,delta", [(1000, 0.3, 0.05), (500, 0.5, 0.0), (200, 0.25, 0.1)])
def test_multiphoton_limit(n, gamma, delta):
    limit = epsilon_bound(math.ceil(gamma * n), delta).epsilon
    assert multiphoton_epsilon(n, gamma, delta, 0.0).epsilon == pytest.approx(limit, rel=1e-12)
    assert abs(multiphoton_epsilon(n, gamma, delta, 1e-12).epsilon - limit) < 1e-10


def test_multiphoton_saturates():
    assert multiphoton_epsilon(100, 0.3, 0.05, 50).epsilon == pytest.approx(1)


# -- feasibility ---------------------------------------------------------------

def test_feasibility_threshold_at_lambda1():
    grid = [round(0.1460 + i * 1e-4, 4) for i in range(11)]
    flags = [feasibility(DeviceModel(mu=0.5, eta=0.8, err=e)).achievable for e in grid]
    flip = [e for e, a, b in zip(grid[1:], flags, flags[1:]) if a != b]
    assert flip == [0.1465]
    assert flags[0] and not flags[-1]


def test_feasibility_margins():
    good = feasibility(DeviceModel(mu=0.001, eta=0.9, err=0.01, gamma=0.0005, delta=0.05))
    assert good.achievable and good.best_mu is not None and good.best_margin > 0
    assert good.combined
    bad = feasibility(DeviceModel(mu=8.0, eta=0.9, err=0.01, gamma=0.5, delta=0.05))
    assert not bad.combined and not bad.secure
    assert feasibility(DeviceModel(mu=0.5, eta=0.0, err=0.01)).achievable is False


def test_feasibility_sweep():
    base = DeviceModel(mu=0.5, eta=0.8)
    rows = feasibility_sweep({"err": [0.1]}, base)
    assert len(rows) == 1 and rows[0]["err"] == 0.1 and rows[0]["achievable"]
    rows = feasibility_sweep({"err": [0.1, 0.2], "mu": [0.1, 1.0]}, base)
    assert len(rows) == 4
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == "mu,eta,err,gamma,delta,correct,secure,combined,achievable"
    with pytest.raises(ValueError):
        feasibility_sweep({"err": []}, base)
    with pytest.raises(ValueError):
        feasibility_sweep({}, base)
    with pytest.raises(ValueError):
        feasibility_sweep({"n": [1]}, base)


def test_device_validation():
    with pytest.raises(ValueError):
        DeviceModel(mu=-1)
    with pytest.raises(ValueError):
        DeviceModel(mu=1, err=0.5)
    with pytest.raises(ValueError):
        DeviceModel(mu=1, eta0=0.5)
    dev = DeviceModel(mu=2.0, eta=0.5)
    assert sum(dev.p_r(r) for r in range(60)) == pytest.approx(1)
    assert dev.p_r(0) == pytest.approx(math.exp(-1))


# -- honest runs ---------------------------------------------------------------

def test_honest_run_accepts():
    dev = DeviceModel(mu=3.0, eta=0.9, err=0.05, gamma=0.5, delta=0.1)
    assert accept_rate(10 ** 4, None, dev, range(200)) == 1.0


def test_honest_run_aborts_on_low_click_rate():
    dev = DeviceModel(mu=0.1, eta=0.9, err=0.0, gamma=0.2, delta=0.1)
    runs = [honest_run(1000, None, dev, 0, s) for s in range(20)]
    assert all(r.aborted and not r.accepted for r in runs)


def test_honest_run_rejects_when_err_exceeds_delta():
    dev = DeviceModel(mu=3.0, eta=1.0, err=0.2, gamma=0.1, delta=0.05)
    assert accept_rate(2000, None, dev, range(20)) == 0.0


def test_honest_run_statistics():
    dev = DeviceModel(mu=1.0, eta=0.7, err=0.1, gamma=0.1, delta=0.14)
    run = honest_run(20000, None, dev, 1, 7)
    assert run.m / run.n == pytest.approx(1 - math.exp(-0.7), abs=0.02)
    assert run.error_fraction == pytest.approx(0.1, abs=0.02)
    # cross-basis rounds are uniformly random
    cross = run.clicks & (run.theta != 1)
    assert np.mean(run.y[cross] == run.x[cross]) == pytest.approx(0.5, abs=0.03)
    assert run.to_json()["valid_rounds"] == run.m


def test_honest_run_deterministic():
    dev = DeviceModel(mu=1.0, eta=0.7, err=0.1)
    a, b = honest_run(500, None, dev, 0, 11), honest_run(500, None, dev, 0, 11)
    assert np.array_equal(a.y, b.y) and np.array_equal(a.clicks, b.clicks)


def test_valid_set_size_does_not_depend_on_d():
    dev = DeviceModel(mu=0.5, eta=0.6, eta0=0.6, eta1=0.9)
    sizes = {d: np.array([honest_run(2000, None, dev, d, s).m for s in range(60)]) for d in (0, 1)}
    assert sizes[0].mean() == pytest.approx(sizes[1].mean(), rel=0.03)
    raw = {d: np.array([honest_run(2000, None, dev, d, s, equalise=False).m for s in range(60)]) for d in (0, 1)}
    assert raw[1].mean() > 1.2 * raw[0].mean()


def test_delayed_commitment():
    dev = DeviceModel(mu=3.0, eta=0.9, err=0.02, gamma=0.5, delta=0.1)
    rs = set()
    for seed in range(20):
        for d in (0, 1):
            dc = delayed_commit_run(2000, None, dev, d, seed)
            assert dc.unveiled == d and dc.accepted
            rs.add(dc.r)
    assert rs == {0, 1}
    with pytest.raises(ValueError):
        delayed_commit_run(10, None, dev, 2, 0)
