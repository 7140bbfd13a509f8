"""Certified evaluation of the nested series: q-MZVs, shifted q-MZVs,
classical MZVs, both sides of the generating-function identity, and the
A/B building blocks with their product forms.

Every r-fold sum over ``k1 > k2 > ... > kr`` is evaluated level by level:
inner sums over the finite range below the outer variable are exact partial
sums (exclusive cumulative sums), so the only truncation is on the outermost
variable.  Its tail is bounded by

    sum_{k > K} |outer(k)| * e_{r-1}(|inner|)  <=  sum_{j >= 1} C rho**(K+j) (a + b j)**d / d!

where ``|outer(k)| <= C rho**k`` and ``|inner(i)| <= b`` beyond the cutoff,
``a`` covers the inner mass below the cutoff, and ``d = r - 1`` (the
elementary symmetric function of nonnegative numbers is at most the d-th power
of their sum over d!).  The series in j is bounded by its first term times a
geometric series in the (decreasing) term ratio.
"""
from __future__ import annotations

import math
import warnings
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .indices import MultiIndex, shift, validate
from .qarith import (
    BudgetExceeded,
    CertifiedValue,
    DivergentSeries,
    PoleProximity,
    QParam,
    q_int,
    q_int_array,
)

_K0 = 64
_CHUNK = 1 << 20
Z_SWEEP_LIMIT = 10.0


def pole_delta(z) -> float:
    return 1e-6 * (1.0 + abs(z))


# ---------------------------------------------------------------- engine


def _nested_partial(fns: Sequence[Callable], lo: int, hi: int, dtype=float, chunk: int = _CHUNK):
    """Sum over hi >= k1 > k2 > ... > kr > lo of prod fns[j](k_{j+1}).

    ``fns[0]`` is the outermost summand, ``fns[-1]`` the innermost.  Processed
    in chunks with running carries so memory stays flat.
    """
    depth = len(fns)
    carries = [dtype(0)] * depth  # carries[j]: sum of level-j terms seen so far
    total = dtype(0)
    start = lo + 1
    while start <= hi:
        stop = min(hi, start + chunk - 1)
        k = np.arange(start, stop + 1, dtype=float)
        below = None  # P_{j+1}(i): weighted count of deeper chains under i
        for j in range(depth - 1, 0, -1):
            t = fns[j](k)
            if below is not None:
                t = t * below
            excl = np.cumsum(t) - t
            below = carries[j] + excl
            carries[j] = carries[j] + t.sum()
        t0 = fns[0](k)
        if below is not None:
            t0 = t0 * below
        total = total + t0.sum()
        start = stop + 1
    return total


def _poly_geometric_tail(C: float, rho: float, K: int, a: float, b: float, d: int) -> float:
    """Bound for sum_{j>=1} C rho**(K+j) (a + b j)**d / d!."""
    if C == 0.0 or rho == 0.0:
        return 0.0
    if d == 0:
        return C * rho ** (K + 1) / (1.0 - rho)
    a = max(a, 0.0)
    first = C * rho ** (K + 1) * (a + b) ** d / math.factorial(d)
    ratio = rho * ((a + 2 * b) / (a + b)) ** d
    if ratio >= 1.0:
        return math.inf
    return first / (1.0 - ratio)


def _certify(fns, lo, bound_at, qp: QParam, dtype=float, guard=None, what="series"):
    """Grow the outer cutoff K until the tail bound drops below qp.tol.

    ``bound_at(K, k_arr)`` returns the tail bound at cutoff K (``inf`` when
    the majorant does not yet apply).  ``guard(k_arr)`` may raise before any
    summation happens.
    """
    n = min(_K0, qp.max_terms)
    while True:
        K = lo + n
        k = np.arange(lo + 1, K + 1, dtype=float)
        if guard is not None:
            guard(k)
        value = _nested_partial(fns, lo, K, dtype=dtype)
        tail = bound_at(K, k)
        value = complex(value) if dtype is complex else float(value)
        if tail <= qp.tol:
            return CertifiedValue(value, float(tail), n)
        if n >= qp.max_terms:
            partial = CertifiedValue(value, float(tail), n) if math.isfinite(tail) else None
            raise BudgetExceeded(
                f"{what}: tail bound {tail:.3g} above tol {qp.tol:.3g} after {n} terms", partial
            )
        n = min(2 * n, qp.max_terms)


def _inner_mass(inner_fns, k: np.ndarray) -> float:
    """sum over the cutoff range of max_j |inner_j(i)|."""
    if not inner_fns:
        return 0.0
    m = np.max(np.abs(np.vstack([f(k) for f in inner_fns])), axis=0)
    return float(m.sum())


# ---------------------------------------------------------------- q-MZVs


def _qmzv_term(n: int, q: float):
    lq = math.log(q)

    def f(k):
        return np.exp((n - 1) * lq * k) / q_int_array(k, q) ** n

    return f


def _qmzv_uncached(idx: MultiIndex, q: float, tol: float, max_terms: int) -> CertifiedValue:
    qp = QParam(q, tol, max_terms)
    fns = [_qmzv_term(n, q) for n in idx]
    n1, d = idx[0], len(idx) - 1
    rho = q ** (n1 - 1)

    def bound_at(K, k):
        qK = q_int(K + 1, q)
        # each inner summand decreases in its variable, so beyond K it is at most its value at K+1
        b = max((float(f(np.array([K + 1.0]))[0]) for f in fns[1:]), default=0.0)
        return _poly_geometric_tail(1.0 / qK ** n1, rho, K, _inner_mass(fns[1:], k) - b, b, d)

    return _certify(fns, 0, bound_at, qp, what=f"zeta{list(idx)}")


_qmzv_cached = lru_cache(maxsize=65536)(_qmzv_uncached)


def eval_qmzv(idx, qp: QParam, cache: bool = True) -> CertifiedValue:
    """Certified value of the multiple q-zeta value zeta[idx].

    >>> round(eval_qmzv((3,), QParam(0.5)).value, 6)
    0.272203
    """
    idx = validate(idx)
    if idx[0] < 2:
        raise DivergentSeries("divergent: leading exponent must exceed 1")
    fn = _qmzv_cached if cache else _qmzv_uncached
    return fn(idx, float(qp.q), float(qp.tol), int(qp.max_terms))


def eval_qmzv_star(idx, qp: QParam, cache: bool = True) -> CertifiedValue:
    """Shifted value zeta*[n1, ..., nr] = zeta[n1 + 1, n2, ..., nr]."""
    return eval_qmzv(shift(validate(idx)), qp, cache=cache)


def clear_cache() -> None:
    _qmzv_cached.cache_clear()


# ---------------------------------------------------------------- classical MZVs


def _mzv_integral_tail(K: int, s: int, d: int) -> float:
    """int_K^oo x**-s (1 + ln x)**d / d! dx, in closed form."""
    L = math.log(K)
    a = s - 1
    tot = 0.0
    for i in range(d + 1):
        tot += (L + 1) ** (d - i) / math.factorial(d - i) / a ** (i + 1)
    return math.exp(-a * L) * tot


def eval_mzv(idx, tol: float = 1e-6, max_terms: int = 50_000_000) -> CertifiedValue:
    """Classical multiple zeta value by direct summation.

    Inner harmonic sums obey H_{k-1} <= 1 + ln k, so the remainder after K
    outer terms is bounded by an elementary integral.  Tails decay only
    polynomially; use for low-accuracy consistency checks.
    """
    idx = validate(idx)
    if idx[0] < 2:
        raise DivergentSeries("divergent: leading exponent must exceed 1")
    s, d = idx[0], len(idx) - 1
    K = max(_K0, math.ceil(math.exp(d)))  # majorant decreasing from here on
    while _mzv_integral_tail(K, s, d) > tol:
        if K >= max_terms:
            raise BudgetExceeded(f"classical zeta{list(idx)}: needs more than {max_terms} terms")
        K = min(2 * K, max_terms)
    # shrink back toward the smallest admissible cutoff
    lo, hi = K // 2, K
    while hi - lo > max(1, hi // 64) and lo >= math.exp(d):
        mid = (lo + hi) // 2
        if _mzv_integral_tail(mid, s, d) <= tol:
            hi = mid
        else:
            lo = mid
    K = hi
    fns = [(lambda k, n=n: k ** (-float(n))) for n in idx]
    value = float(_nested_partial(fns, 0, K))
    return CertifiedValue(value, _mzv_integral_tail(K, s, d), K)


# ---------------------------------------------------------------- generating-function sides


def _check_z(z) -> complex:
    z = complex(z)
    if abs(z) > Z_SWEEP_LIMIT:
        warnings.warn(f"|z| = {abs(z):.3g} exceeds {Z_SWEEP_LIMIT}; convergence there is untested", stacklevel=3)
    return z


def _pole_guard(z: complex, q: float):
    delta = pole_delta(z)
    lq = math.log(q)

    def guard(k):
        den = q_int_array(k, q) - z * np.exp(lq * k)
        bad = np.abs(den) < delta
        if bad.any():
            m = int(k[np.argmax(bad)])
            raise PoleProximity(f"|[m]_q - z q^m| < {delta:.3g} at m={m} (z={z}, q={q})")

    return guard


def _far_denominator(K: int, z: complex, q: float) -> float:
    """Lower bound for |[k]_q - z q^k| over all k > K (0 if not yet valid)."""
    Dk = q_int(K + 1, q) - abs(z) * q ** (K + 1)
    return Dk if Dk >= pole_delta(z) else 0.0


def eval_Lr(r: int, z, qp: QParam) -> CertifiedValue:
    """Nested side: sum over k1 > ... > kr of q^k1/[k1] prod 1/([kj] - z q^kj)."""
    if r < 1:
        raise ValueError("r must be a positive integer")
    z = _check_z(z)
    q = qp.q
    lq = math.log(q)

    def g(k):
        return 1.0 / (q_int_array(k, q) - z * np.exp(lq * k))

    def outer(k):
        return np.exp(lq * k) / q_int_array(k, q) * g(k)

    fns = [outer] + [g] * (r - 1)

    def bound_at(K, k):
        Dk = _far_denominator(K, z, q)
        if Dk == 0.0:
            return math.inf
        qK = q_int(K + 1, q)
        a = float(np.abs(g(k)).sum()) - 1.0 / Dk if r > 1 else 0.0
        return _poly_geometric_tail(1.0 / (qK * Dk), q, K, a, 1.0 / Dk, r - 1)

    return _certify(fns, 0, bound_at, qp, dtype=complex, guard=_pole_guard(z, q), what=f"L_{r}")


def eval_Rr(r: int, z, qp: QParam) -> CertifiedValue:
    """Single-sum side: sum_m q^(rm) / ([m]^r ([m] - z q^m))."""
    if r < 1:
        raise ValueError("r must be a positive integer")
    z = _check_z(z)
    q = qp.q
    lq = math.log(q)

    def term(k):
        qk = q_int_array(k, q)
        return np.exp(r * lq * k) / (qk ** r * (qk - z * np.exp(lq * k)))

    def bound_at(K, k):
        Dk = _far_denominator(K, z, q)
        if Dk == 0.0:
            return math.inf
        return _poly_geometric_tail(1.0 / (q_int(K + 1, q) ** r * Dk), q ** r, K, 0.0, 0.0, 0)

    return _certify([term], 0, bound_at, qp, dtype=complex, guard=_pole_guard(z, q), what=f"R_{r}")


# ---------------------------------------------------------------- A and B blocks


def _recip_qint(q):
    def f(k):
        return 1.0 / q_int_array(k, q)

    return f


def _A_outer(m, q):
    lq = math.log(q)

    def f(b):
        return np.exp(lq * (m + b)) / (q_int_array(m + b, q) * q_int_array(b, q))

    return f


def eval_A(m: int, n: int, k: int, qp: QParam) -> CertifiedValue:
    """A(m, n, k) = sum_{b1 > ... > bn > k} q^(m+b1)/[m+b1] prod_j 1/[bj]."""
    if m < 1 or n < 0 or k < 0:
        raise ValueError("need m >= 1, n >= 0, k >= 0")
    q = qp.q
    if n == 0:
        return CertifiedValue(q ** m / q_int(m, q), 0.0, 0)
    inner = _recip_qint(q)
    fns = [_A_outer(m, q)] + [inner] * (n - 1)

    def bound_at(K, b):
        qK = q_int(K + 1, q)
        a = float(inner(b).sum()) - 1.0 / qK
        return _poly_geometric_tail(q ** m / (q_int(m + K + 1, q) * qK), q, K, a, 1.0 / qK, n - 1)

    return _certify(fns, k, bound_at, qp, what=f"A({m},{n},{k})")


def eval_A_table(m: int, n_max: int, qp: QParam) -> list[CertifiedValue]:
    """[A(m, 0), ..., A(m, n_max)] sharing one pass over the inner chains."""
    q = qp.q
    out = [CertifiedValue(q ** m / q_int(m, q), 0.0, 0)]
    if n_max < 1:
        return out
    outer, inner = _A_outer(m, q), _recip_qint(q)
    n = min(_K0, qp.max_terms)
    while True:
        b = np.arange(1, n + 1, dtype=float)
        ib, ob = inner(b), outer(b)
        qK = q_int(n + 1, q)
        a = float(ib.sum()) - 1.0 / qK
        C = q ** m / (q_int(m + n + 1, q) * qK)
        tails = [_poly_geometric_tail(C, q, n, a, 1.0 / qK, d) for d in range(n_max)]
        if max(tails) <= qp.tol or n >= qp.max_terms:
            break
        n = min(2 * n, qp.max_terms)
    if max(tails) > qp.tol:
        raise BudgetExceeded(f"A({m}, n<={n_max}): budget exhausted at {n} terms")
    below = np.ones_like(b)
    for depth in range(1, n_max + 1):
        out.append(CertifiedValue(float((ob * below).sum()), float(tails[depth - 1]), n))
        t = ib * below
        below = np.cumsum(t) - t
    return out


def eval_B(m: int, n: int, qp) -> float:
    """B(m, n): sum over m > k1 > ... > kn > 0 of prod 1/[ki - m]_q (finite)."""
    if m < 1 or n < 0:
        raise ValueError("need m >= 1, n >= 0")
    if n > m - 1:
        return 0.0
    q = qp.q if isinstance(qp, QParam) else float(qp)
    e = [1.0] + [0.0] * n  # elementary symmetric functions, built up term by term
    for kk in range(1, m):
        v = 1.0 / q_int(kk - m, q)
        for j in range(min(n, kk), 0, -1):
            e[j] += v * e[j - 1]
    return e[n]


def closed_Am(m: int, x, qp: QParam) -> complex:
    """Product form (q^m/[m]) prod_{c=1}^m (1 - x q^c/[c])^-1."""
    q = qp.q
    delta = pole_delta(x)
    out = complex(q ** m / q_int(m, q))
    for c in range(1, m + 1):
        f = 1 - x * q ** c / q_int(c, q)
        if abs(f) < delta:
            raise PoleProximity(f"factor c={c} of A_{m}(x) vanishes at x={x}")
        out /= f
    return out


def closed_Bm(m: int, x, qp: QParam) -> complex:
    """Product form prod_{b=1}^{m-1} (1 - x q^b/[b])."""
    q = qp.q
    out = complex(1.0)
    for b in range(1, m):
        out *= 1 - x * q ** b / q_int(b, q)
    return out
