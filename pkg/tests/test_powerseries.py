import numpy as np
import pytest

from oracles import exp_coeffs_1d
from qzeta.powerseries import (
    TruncSeries,
    newton_power_sums,
    ps_add,
    ps_exp,
    ps_log,
    ps_mul,
    ps_scale,
    ps_substitute,
)


def xyz(cap, nvars=3):
    return [TruncSeries.var(i, nvars, cap) for i in range(nvars)]


def random_series(rng, nvars, cap, const=0.0, scale=0.3):
    s = TruncSeries(nvars, cap, rng.normal(size=(cap + 1,) * nvars) * scale)
    s.coeffs[(0,) * nvars] = const
    return s


def test_basic_products():
    (x,) = xyz(2, 1)
    assert ((1 + x) * (1 - x)).terms() == {(0,): 1, (2,): -1}
    x, y = xyz(1, 2)
    assert ((x + y) * (x + y)).terms() == {}
    x, y = xyz(2, 2)
    got = ((1 + x + y) ** 2).terms()
    assert got == {(0, 0): 1, (1, 0): 2, (0, 1): 2, (2, 0): 1, (1, 1): 2, (0, 2): 1}


def test_mismatch_rejected():
    with pytest.raises(ValueError):
        ps_add(TruncSeries(2, 3), TruncSeries(2, 4))
    with pytest.raises(ValueError):
        ps_mul(TruncSeries(2, 3), TruncSeries(3, 3))


def test_cap_closure():
    rng = np.random.default_rng(0)
    a, b = random_series(rng, 3, 5, 1.0), random_series(rng, 3, 5, 2.0)
    deg = np.indices(a.coeffs.shape).sum(axis=0)
    assert np.all((a * b).coeffs[deg > 5] == 0)


def test_exp_examples():
    (x,) = xyz(3, 1)
    assert ps_exp(TruncSeries(1, 3)).terms() == {(0,): 1}
    e = ps_exp(x)
    ref = exp_coeffs_1d(3)
    assert all(abs(e[(k,)] - float(ref[k])) < 1e-15 for k in range(4))


def test_exp_log_preconditions():
    with pytest.raises(ValueError):
        ps_exp(TruncSeries.const(2, 3, 0.5))
    with pytest.raises(ValueError):
        ps_log(TruncSeries.const(2, 3, 2.0))


def test_log_exp_round_trip():
    rng = np.random.default_rng(3)
    a = random_series(rng, 3, 6)
    back = ps_log(ps_exp(a))
    assert np.abs(back.coeffs - a.coeffs).max() < 1e-12
    f = random_series(rng, 3, 6, 1.0)
    assert np.abs(ps_exp(ps_log(f)).coeffs - f.coeffs).max() < 1e-12


def test_ring_axioms():
    rng = np.random.default_rng(5)
    a, b, c = (random_series(rng, 3, 6, k) for k in (1.0, -0.5, 2.0))
    assert np.abs(((a * b) * c).coeffs - (a * (b * c)).coeffs).max() < 1e-12
    assert np.abs((a * b).coeffs - (b * a).coeffs).max() < 1e-12
    assert np.abs((a * (b + c)).coeffs - (a * b + a * c).coeffs).max() < 1e-12
    assert np.abs(ps_scale(a, 2).coeffs - (a + a).coeffs).max() == 0


def test_exp_is_homomorphism():
    rng = np.random.default_rng(9)
    a, b = random_series(rng, 3, 7), random_series(rng, 3, 7)
    assert np.abs(ps_exp(a + b).coeffs - (ps_exp(a) * ps_exp(b)).coeffs).max() < 1e-12


def test_newton_power_sums():
    x, y, z = xyz(8)
    e1 = x + y + (z - x * y) * (0.7 - 1)
    p = newton_power_sums(e1, z, 10)
    assert np.array_equal(p[0].coeffs, e1.coeffs)
    assert np.abs(p[1].coeffs - (e1 * e1 - 2 * z).coeffs).max() < 1e-15
    for k in range(3, 11):
        resid = p[k - 1] - e1 * p[k - 2] + z * p[k - 3]
        assert np.abs(resid.coeffs).max() < 1e-13


def test_power_sums_on_diagonal():
    x, y = xyz(8, 2)
    p = newton_power_sums(x + y, x * y, 6)
    for k in range(1, 7):
        assert np.abs(p[k - 1].coeffs - (x ** k + y ** k).coeffs).max() < 1e-12


def test_substitute_diagonal():
    x, y, z = xyz(4)
    f = 1 + x + 2 * z + z * z
    x2, y2 = xyz(4, 2)
    g = ps_substitute(f, [x2, y2, x2 * y2])
    assert g.terms() == {(0, 0): 1, (1, 0): 1, (1, 1): 2, (2, 2): 1}
