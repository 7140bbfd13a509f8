"""Truncated power series in up to three variables.

Coefficients live in a dense complex array of shape ``(cap+1,) * nvars``;
entries of total degree above ``cap`` are always zero.  Truncation is by total
degree, so every product and every composite function closes over the cap.
"""
from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np


class TruncSeries:
    __slots__ = ("nvars", "cap", "coeffs")

    def __init__(self, nvars: int, cap: int, coeffs=None):
        if not 1 <= nvars <= 3:
            raise ValueError("nvars must be 1, 2 or 3")
        if cap < 0:
            raise ValueError("cap must be nonnegative")
        self.nvars = nvars
        self.cap = cap
        shape = (cap + 1,) * nvars
        if coeffs is None:
            c = np.zeros(shape, dtype=complex)
        else:
            c = np.array(coeffs, dtype=complex)
            if c.shape != shape:
                raise ValueError(f"coefficient array must have shape {shape}")
        c[_degree(nvars, cap) > cap] = 0
        self.coeffs = c

    # -- construction -------------------------------------------------------

    @classmethod
    def const(cls, nvars: int, cap: int, value=1.0) -> "TruncSeries":
        s = cls(nvars, cap)
        s.coeffs[(0,) * nvars] = value
        return s

    @classmethod
    def var(cls, i: int, nvars: int, cap: int) -> "TruncSeries":
        s = cls(nvars, cap)
        if cap >= 1:
            e = [0] * nvars
            e[i] = 1
            s.coeffs[tuple(e)] = 1.0
        return s

    @classmethod
    def from_terms(cls, nvars: int, cap: int, terms: dict) -> "TruncSeries":
        s = cls(nvars, cap)
        for e, c in terms.items():
            if sum(e) <= cap:
                s.coeffs[tuple(e)] += c
        return s

    def _like(self, coeffs) -> "TruncSeries":
        return TruncSeries(self.nvars, self.cap, coeffs)

    def _check(self, other: "TruncSeries"):
        if not isinstance(other, TruncSeries):
            raise TypeError("expected a TruncSeries")
        if other.nvars != self.nvars or other.cap != self.cap:
            raise ValueError(
                f"shape mismatch: ({self.nvars} vars, cap {self.cap}) vs ({other.nvars} vars, cap {other.cap})"
            )

    # -- access -------------------------------------------------------------

    def __getitem__(self, exponent) -> complex:
        if isinstance(exponent, int):
            exponent = (exponent,)
        if len(exponent) != self.nvars or sum(exponent) > self.cap:
            return 0j
        return complex(self.coeffs[tuple(exponent)])

    def monomials(self):
        """Exponent tuples of total degree <= cap, graded then lexicographic."""
        return _monomials(self.nvars, self.cap)

    def terms(self) -> dict:
        return {e: complex(self.coeffs[e]) for e in self.monomials() if self.coeffs[e] != 0}

    def homogeneous(self, d: int) -> "TruncSeries":
        c = np.where(_degree(self.nvars, self.cap) == d, self.coeffs, 0)
        return self._like(c)

    def constant(self) -> complex:
        return complex(self.coeffs[(0,) * self.nvars])

    def abs(self) -> "TruncSeries":
        """Coefficient-wise absolute values (a majorant series)."""
        return self._like(np.abs(self.coeffs))

    def max_abs(self) -> float:
        return float(np.abs(self.coeffs).max())

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            return self._like(self.coeffs + other.coeffs)
        return self + TruncSeries.const(self.nvars, self.cap, other)

    __radd__ = __add__

    def __neg__(self):
        return self._like(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self._like(self.coeffs * other)
        self._check(other)
        out = np.zeros_like(self.coeffs)
        cap = self.cap
        for e in zip(*np.nonzero(self.coeffs)):
            room = cap - sum(e)
            tgt = tuple(slice(ei, ei + room + 1) for ei in e)
            src = tuple(slice(0, room + 1) for _ in e)
            out[tgt] += self.coeffs[e] * other.coeffs[src]
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = TruncSeries.const(self.nvars, self.cap)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def allclose(self, other: "TruncSeries", atol: float) -> bool:
        self._check(other)
        return bool(np.all(np.abs(self.coeffs - other.coeffs) <= atol))

    def __repr__(self):
        body = ", ".join(f"{e}: {c:.6g}" for e, c in self.terms().items())
        return f"TruncSeries(nvars={self.nvars}, cap={self.cap}, {{{body}}})"


def _degree(nvars: int, cap: int) -> np.ndarray:
    grids = np.indices((cap + 1,) * nvars)
    return grids.sum(axis=0)


def _monomials(nvars: int, cap: int):
    out = [e for e in itertools.product(range(cap + 1), repeat=nvars) if sum(e) <= cap]
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out


def ps_add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    a._check(b)
    return a + b


def ps_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    a._check(b)
    return a * b


def ps_scale(a: TruncSeries, c) -> TruncSeries:
    return a * complex(c)


def ps_exp(a: TruncSeries) -> TruncSeries:
    """exp(a) for a with zero constant term.

    Uses the degree-grading: with f = exp(a), d f_d = sum_j j a_j f_{d-j}.
    """
    if abs(a.constant()) != 0:
        raise ValueError("ps_exp needs a zero constant term")
    parts = [a.homogeneous(j) for j in range(a.cap + 1)]
    f = [TruncSeries.const(a.nvars, a.cap)]
    for d in range(1, a.cap + 1):
        acc = TruncSeries(a.nvars, a.cap)
        for j in range(1, d + 1):
            acc = acc + (parts[j] * f[d - j]) * j
        f.append(acc.homogeneous(d) * (1.0 / d))
    out = f[0]
    for fd in f[1:]:
        out = out + fd
    return out


def ps_log(a: TruncSeries) -> TruncSeries:
    """log(a) for a with constant term 1: d g_d = d a_d - sum_{j<d} j g_j a_{d-j}."""
    if abs(a.constant() - 1) > 1e-14:
        raise ValueError("ps_log needs constant term 1")
    parts = [a.homogeneous(j) for j in range(a.cap + 1)]
    g = [TruncSeries(a.nvars, a.cap)]
    for d in range(1, a.cap + 1):
        acc = parts[d] * d
        for j in range(1, d):
            acc = acc - (g[j] * parts[d - j]) * j
        g.append(acc.homogeneous(d) * (1.0 / d))
    out = g[0]
    for gd in g[1:]:
        out = out + gd
    return out


def newton_power_sums(e1: TruncSeries, e2: TruncSeries, kmax: int) -> list:
    """[p_1, ..., p_kmax] with p_k = alpha^k + beta^k, where alpha + beta = e1
    and alpha * beta = e2, via p_k = e1 p_{k-1} - e2 p_{k-2}."""
    e1._check(e2)
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    p = [TruncSeries.const(e1.nvars, e1.cap, 2.0), e1]
    for k in range(2, kmax + 1):
        p.append(e1 * p[k - 1] - e2 * p[k - 2])
    return p[1:]


def ps_substitute(a: TruncSeries, images: Sequence[TruncSeries]) -> TruncSeries:
    """Compose: replace variable i of ``a`` by ``images[i]`` (series with zero
    constant term in a common target ring)."""
    if len(images) != a.nvars:
        raise ValueError("need one image per variable")
    ref = images[0]
    for im in images[1:]:
        ref._check(im)
    if any(abs(im.constant()) != 0 for im in images):
        raise ValueError("images must have zero constant term")
    powers = [[TruncSeries.const(ref.nvars, ref.cap)] for _ in images]
    for i, im in enumerate(images):
        for _ in range(a.cap):
            powers[i].append(powers[i][-1] * im)
    out = TruncSeries(ref.nvars, ref.cap)
    for e, c in a.terms().items():
        term = powers[0][e[0]]
        for i in range(1, a.nvars):
            term = term * powers[i][e[i]]
        out = out + term * c
    return out


def exp_perturbation_bound(abs_arg: TruncSeries, abs_delta: TruncSeries) -> TruncSeries:
    """Majorant for coefficient errors of exp(arg) when arg carries a
    coefficient-wise error at most ``abs_delta``: exp(|arg| + d) - exp(|arg|)."""
    hi = ps_exp(abs_arg + abs_delta)
    lo = ps_exp(abs_arg)
    return (hi - lo).abs()

