"""q-integer arithmetic and the numeric precision contract.

All evaluators in this package work in IEEE double precision.  A
:class:`CertifiedValue` carries the value together with a rigorous bound on
the omitted tail of the series that produced it; floating point rounding is
accounted for separately through :meth:`CertifiedValue.rounding_slack`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

EPS = np.finfo(float).eps

Number = Union[float, complex]


class QZetaError(Exception):
    """Base class for evaluation errors."""


class DivergentSeries(QZetaError):
    """Raised for non-admissible indices (leading exponent 1)."""


class BudgetExceeded(QZetaError):
    """The truncation budget ran out before the tail bound met the tolerance.

    The best partial result is kept on ``partial``.
    """

    def __init__(self, message: str, partial: "CertifiedValue | None" = None):
        super().__init__(message)
        self.partial = partial


class PoleProximity(QZetaError):
    """A denominator came within the pole guard distance of zero."""


class NonAdmissibleKey(QZetaError):
    """A formal expression holds an index that cannot be evaluated."""


@dataclass(frozen=True)
class QParam:
    q: float
    tol: float = 1e-12
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"q must lie strictly between 0 and 1, got {self.q!r}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms!r}")

    def with_tol(self, tol: float) -> "QParam":
        return QParam(self.q, tol, self.max_terms)


@dataclass(frozen=True)
class CertifiedValue:
    value: Number
    tail_bound: float
    terms_used: int

    def __post_init__(self):
        if not self.tail_bound >= 0:
            raise ValueError("tail_bound must be nonnegative")

    @property
    def rounding_slack(self) -> float:
        """Floating point budget: ``terms_used * 8 eps * |value|``."""
        return max(self.terms_used, 1) * 8 * EPS * abs(self.value)

    @property
    def error_bound(self) -> float:
        return self.tail_bound + self.rounding_slack

    def __float__(self):
        return float(self.value.real if isinstance(self.value, complex) else self.value)

    def as_dict(self) -> dict:
        v = self.value
        if isinstance(v, complex):
            val = [v.real, v.imag]
        else:
            val = float(v)
        return {"value": val, "tail_bound": self.tail_bound, "terms_used": self.terms_used}


def _qvalue(q) -> float:
    return q.q if isinstance(q, QParam) else float(q)


def q_int(k: int, q) -> float:
    """The q-integer ``[k]_q = (1 - q**k) / (1 - q)``.

    ``q`` may be a float or a :class:`QParam`.  For ``1 <= k <= 64`` the
    finite geometric sum is added exactly (``math.fsum``); for large ``k`` the
    closed form is used.  Negative ``k`` goes through the reflection
    ``[-k]_q = -q**(-k) [k]_q``.
    """
    q = _qvalue(q)
    k = int(k)
    if k == 0:
        raise ValueError("[0]_q = 0 is never a valid denominator")
    if k < 0:
        return -(q ** k) * q_int(-k, q)
    if k <= 64:
        return math.fsum(q ** j for j in range(k))
    return -math.expm1(k * math.log(q)) / -math.expm1(math.log(q))


def q_int_array(k: np.ndarray, q: float) -> np.ndarray:
    """Vectorised ``[k]_q`` for positive integer arrays."""
    lq = math.log(q)
    k = np.asarray(k, dtype=float)
    return np.expm1(k * lq) / math.expm1(lq)


def q_int_limit_check(k: int, q_seq: Sequence) -> list[float]:
    """Deviations ``|[k]_q - k|`` along a sequence of q values tending to 1."""
    qs = [_qvalue(q) for q in q_seq]
    if any(b <= a for a, b in zip(qs, qs[1:])):
        raise ValueError("q values must be strictly increasing")
    return [abs(q_int(k, q) - k) for q in qs]
