"""Estimators vs from-definition oracles on small random instances.

Each instance draws fresh data (continuous, tied-integer, near-discordant,
or block-tied) and compares the vectorized estimators against the plain
loop-and-sorted reimplementations in _naive to 1e-12 absolute error.
"""
from __future__ import annotations

import numpy as np
import pytest

from _naive import naive_hill, naive_hillish, naive_pickandsish, naive_qhat
from hrvlab.core import DomainError
from hrvlab.diagnostics import hill_series, hillish, pickandsish, qhat_series

N_INSTANCES = 200
Q_CHOICES = (0.3, 0.5, 0.8)


def _instance(rng, case):
    n = int(rng.integers(5, 51))
    style = case % 4
    if style == 0:  # continuous, no ties
        xi = rng.uniform(0.1, 10.0, n)
        eta = rng.uniform(-5.0, 5.0, n)
    elif style == 1:  # heavily tied integer data
        xi = rng.integers(1, 7, n).astype(float)
        eta = rng.integers(-3, 4, n).astype(float)
    elif style == 2:  # near-discordant with jitter
        xi = rng.pareto(1.0, n) + 1.0
        eta = -xi + rng.normal(0.0, 0.1, n)
    else:  # blocks of tied concomitants
        xi = rng.uniform(0.1, 10.0, n)
        eta = np.repeat(rng.uniform(-2.0, 2.0, n), 3)[:n]
    return n, xi, eta


def _cases():
    rng = np.random.default_rng(20260816)
    out = []
    for case in range(N_INSTANCES):
        n, xi, eta = _instance(rng, case)
        k_hill = int(rng.integers(2, n))  # k < n
        k_hillish = int(rng.integers(2, n + 1))
        k_pick = int(rng.integers(4, n + 1))
        k_qhat = int(rng.integers(2, n + 1))
        q = float(rng.choice(Q_CHOICES))
        out.append((case, n, xi, eta, k_hill, k_hillish, k_pick, k_qhat, q))
    return out


CASES = _cases()


def test_hill_matches_naive():
    for case, n, xi, _eta, k_hill, *_ in CASES:
        series = hill_series(xi, np.array([k_hill]))
        try:
            want = naive_hill(xi.tolist(), k_hill)
        except ZeroDivisionError:
            # all of the top k+1 values tie: no finite index, point omitted
            assert len(series) == 0, f"case {case}: hill k={k_hill}"
            continue
        got = series.value_at(k_hill)
        assert abs(got - want) <= 1e-12, f"case {case}: hill k={k_hill}"


def test_hillish_matches_naive():
    for case, n, xi, eta, _kh, k_hillish, *_ in CASES:
        for sgn in (1.0, -1.0):
            got = hillish(xi, sgn * eta, k_hillish)
            want = naive_hillish(xi.tolist(), (sgn * eta).tolist(), k_hillish)
            assert abs(got - want) <= 1e-12, f"case {case}: hillish k={k_hillish} sgn={sgn}"


def test_pickandsish_matches_naive():
    degenerate = 0
    for case, n, xi, eta, _kh, _ki, k_pick, _kq, q in CASES:
        try:
            want = naive_pickandsish(xi.tolist(), eta.tolist(), k_pick, q)
        except ZeroDivisionError:
            degenerate += 1
            with pytest.raises(DomainError):
                pickandsish(xi, eta, k_pick, q)
            continue
        got = pickandsish(xi, eta, k_pick, q)
        assert abs(got - want) <= 1e-12, f"case {case}: pickandsish k={k_pick} q={q}"
    # the tied styles should produce some degenerate denominators, but
    # the comparison must not be vacuous
    assert degenerate < N_INSTANCES // 2


def test_qhat_matches_naive():
    for case, n, xi, eta, *_rest, k_qhat, _q in CASES:
        z2 = np.abs(eta) + 0.5
        got = qhat_series(xi, z2, np.array([k_qhat])).value_at(k_qhat)
        want = naive_qhat(xi.tolist(), z2.tolist(), k_qhat)
        assert abs(got - want) <= 1e-12, f"case {case}: qhat k={k_qhat}"
