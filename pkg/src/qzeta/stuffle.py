"""Formal q-stuffle algebra.

Expressions are integer linear combinations of multi-indices whose
coefficients are polynomials in ``eps = 1 - q``.  The product rule rests on
the summand identity

    q^((a-1)k)/[k]^a * q^((b-1)k)/[k]^b
        = q^((a+b-1)k)/[k]^(a+b) + (1-q) q^((a+b-2)k)/[k]^(a+b-1),

so a diagonal collision of exponents a and b produces ``a+b`` plus ``eps``
times ``a+b-1``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .indices import MultiIndex, compositions, shift, validate
from .qarith import CertifiedValue, NonAdmissibleKey, QParam
from .series import eval_qmzv

EpsPoly = tuple  # tuple of ints, entry i multiplies eps**i, no trailing zeros


def eps_trim(c: Iterable[int]) -> EpsPoly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def eps_add(a: EpsPoly, b: EpsPoly) -> EpsPoly:
    n = max(len(a), len(b))
    return eps_trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def eps_mul(a: EpsPoly, b: EpsPoly) -> EpsPoly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return eps_trim(out)


def eps_eval(a: EpsPoly, eps: float) -> float:
    v = 0.0
    for c in reversed(a):
        v = v * eps + c
    return v


def eps_abs_eval(a: EpsPoly, eps: float) -> float:
    return sum(abs(c) * abs(eps) ** i for i, c in enumerate(a))


@dataclass(frozen=True)
class StuffleExpr:
    """Immutable formal combination; ``terms`` is kept canonical
    (lexicographically descending keys, no zero coefficients)."""

    terms: tuple = field(default=())

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "StuffleExpr":
        acc: dict = {}
        for key, poly in mapping.items():
            key = validate(key)
            if isinstance(poly, int):
                poly = (poly,)
            acc[key] = eps_add(acc.get(key, ()), eps_trim(poly))
        items = [(k, p) for k, p in acc.items() if p]
        items.sort(key=lambda kp: kp[0], reverse=True)
        return cls(tuple(items))

    @classmethod
    def single(cls, idx, coeff=1) -> "StuffleExpr":
        return cls.from_mapping({tuple(idx): coeff})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "StuffleExpr") -> "StuffleExpr":
        acc = self.as_dict()
        for k, p in other.terms:
            acc[k] = eps_add(acc.get(k, ()), p)
        return StuffleExpr.from_mapping(acc)

    def __neg__(self) -> "StuffleExpr":
        return StuffleExpr(tuple((k, tuple(-c for c in p)) for k, p in self.terms))

    def __sub__(self, other: "StuffleExpr") -> "StuffleExpr":
        return self + (-other)

    def scale(self, poly) -> "StuffleExpr":
        """Multiply every coefficient by an integer or an EpsPoly."""
        if isinstance(poly, int):
            poly = (poly,)
        return StuffleExpr.from_mapping({k: eps_mul(p, tuple(poly)) for k, p in self.terms})

    def at_eps(self, eps: float) -> dict:
        """Coefficients with eps substituted (eps=0 is the classical limit)."""
        return {k: eps_eval(p, eps) for k, p in self.terms}

    def keys(self):
        return [k for k, _ in self.terms]

    def to_json(self) -> str:
        return json.dumps({"terms": [{"index": list(k), "eps": list(p)} for k, p in self.terms]})

    @classmethod
    def from_json(cls, text: str) -> "StuffleExpr":
        data = json.loads(text)
        return cls.from_mapping({tuple(t["index"]): tuple(t["eps"]) for t in data["terms"]})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, p in self.terms:
            coeff = " + ".join(
                (f"{c}" if i == 0 else f"{c}*eps" if i == 1 else f"{c}*eps^{i}") for i, c in enumerate(p) if c
            )
            parts.append(f"({coeff})*zeta{list(k)}")
        return " + ".join(parts)


def _prepend(head: int, d: dict, coeff: EpsPoly, out: dict):
    for k, p in d.items():
        key = (head,) + k
        out[key] = eps_add(out.get(key, ()), eps_mul(coeff, p))


@lru_cache(maxsize=None)
def _stuffle_words(a: MultiIndex, b: MultiIndex) -> tuple:
    if not a:
        return ((b, (1,)),)
    if not b:
        return ((a, (1,)),)
    out: dict = {}
    _prepend(a[0], dict(_stuffle_words(a[1:], b)), (1,), out)
    _prepend(b[0], dict(_stuffle_words(a, b[1:])), (1,), out)
    both = dict(_stuffle_words(a[1:], b[1:]))
    _prepend(a[0] + b[0], both, (1,), out)
    _prepend(a[0] + b[0] - 1, both, (0, 1), out)
    return tuple((k, p) for k, p in out.items() if p)


def qstuffle(a, b) -> StuffleExpr:
    """Formal expansion of zeta[a] * zeta[b] as a combination of q-MZVs."""
    a, b = validate(a), validate(b)
    return StuffleExpr.from_mapping(dict(_stuffle_words(a, b)))


def sum_formula_expr(N: int, r: int) -> StuffleExpr:
    """sum over compositions of N into r parts of zeta*[..] minus zeta*[N]."""
    lhs = StuffleExpr.from_mapping({shift(c): 1 for c in compositions(N, r)})
    return lhs - StuffleExpr.single(shift((N,)))


@dataclass(frozen=True)
class EulerReduction:
    """2 zeta[m,1] = m zeta[m+1] + eps (m-2) zeta[m] - sum_k zeta[m-k] zeta[k+1]."""

    m: int
    lhs: StuffleExpr
    linear: StuffleExpr
    products: tuple  # ((m-k,), (k+1,)) for k = 1..m-2, each entering with sign -1

    def expanded_rhs(self) -> StuffleExpr:
        rhs = self.linear
        for a, b in self.products:
            rhs = rhs - qstuffle(a, b)
        return rhs

    def defect(self) -> StuffleExpr:
        """lhs minus the stuffle-expanded rhs; equals twice the depth-2 sum formula."""
        return self.lhs - self.expanded_rhs()


def reduce_zeta_m1(m: int) -> EulerReduction:
    if m < 2:
        raise ValueError("reduction of zeta[m,1] needs m >= 2")
    linear = StuffleExpr.from_mapping({(m + 1,): m, (m,): (0, m - 2)})
    products = tuple(((m - k,), (k + 1,)) for k in range(1, m - 1))
    return EulerReduction(m, StuffleExpr.single((m, 1), 2), linear, products)


def eval_expr_detail(e: StuffleExpr, qp: QParam):
    """Value, truncation bound, rounding slack and max terms for an expression."""
    eps = 1.0 - qp.q
    value = tail = slack = 0.0
    terms = 0
    for key, poly in e.terms:
        if key[0] < 2:
            raise NonAdmissibleKey(f"zeta{list(key)} has leading exponent 1")
        cv = eval_qmzv(key, qp)
        c = eps_eval(poly, eps)
        w = eps_abs_eval(poly, eps)
        value += c * cv.value
        tail += w * cv.tail_bound
        slack += w * cv.rounding_slack
        terms = max(terms, cv.terms_used)
    return value, tail, slack, terms


def eval_expr(e: StuffleExpr, qp: QParam) -> CertifiedValue:
    value, tail, _, terms = eval_expr_detail(e, qp)
    return CertifiedValue(value, tail, terms)
