import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from qzeta.qarith import EPS, CertifiedValue, QParam, q_int, q_int_array, q_int_limit_check


def test_q_int_examples():
    assert q_int(1, 0.5) == 1.0
    assert q_int(3, 0.5) == 1.75
    assert q_int(-2, 0.5) == -6.0
    assert q_int(3, QParam(0.5)) == 1.75


def test_q_int_zero_rejected():
    with pytest.raises(ValueError):
        q_int(0, 0.5)


def test_q_int_large_k_closed_form():
    q = 0.97
    assert q_int(200, q) == pytest.approx((1 - q ** 200) / (1 - q), rel=1e-14)


def test_q_int_array_matches_scalar():
    k = np.arange(1, 100)
    for q in (0.2, 0.9, 0.999):
        ref = np.array([q_int(int(j), q) for j in k])
        np.testing.assert_allclose(q_int_array(k, q), ref, rtol=1e-13)


@pytest.mark.parametrize(
    "q,bad", [(0.0, True), (1.0, True), (-0.1, True), (1.5, True), (0.5, False)]
)
def test_qparam_range(q, bad):
    if bad:
        with pytest.raises(ValueError):
            QParam(q)
    else:
        QParam(q)


def test_qparam_tol_and_budget_validated():
    with pytest.raises(ValueError):
        QParam(0.5, tol=0)
    with pytest.raises(ValueError):
        QParam(0.5, max_terms=0)


def test_certified_value_rejects_negative_bound():
    with pytest.raises(ValueError):
        CertifiedValue(1.0, -1e-3, 1)


def test_limit_check_examples():
    devs = q_int_limit_check(3, [0.9, 0.99, 0.999])
    assert devs[0] > devs[1] > devs[2]
    assert q_int_limit_check(1, [0.3, 0.7]) == [0.0, 0.0]
    # [5]_0.99 = 4.90099501 by direct polynomial evaluation
    assert q_int_limit_check(5, [0.99])[0] == pytest.approx(0.09900499, abs=1e-9)


def test_limit_check_requires_increasing():
    with pytest.raises(ValueError):
        q_int_limit_check(3, [0.9, 0.5])


qs = st.floats(min_value=0.01, max_value=0.99)
ks = st.integers(min_value=1, max_value=200)


@given(ks, qs)
def test_q_int_bounds_and_monotone(k, q):
    # strictness is only observable while q**k is above double resolution
    assume(q ** (k + 1) > 1e-12)
    v = q_int(k, q)
    assert 1 <= v < 1 / (1 - q)
    assert q_int(k + 1, q) > v


@given(ks, qs)
def test_q_int_reflection(k, q):
    assume(k * -math.log(q) < 700)  # q**-k representable
    assert math.isclose(q_int(-k, q), -(q ** -k) * q_int(k, q), rel_tol=4 * EPS)


@given(st.integers(min_value=1, max_value=64), qs)
def test_q_int_defining_relation(k, q):
    assert abs(q_int(k, q) * (1 - q) + q ** k - 1) <= 4 * EPS
