"""Multi-indices: compositions, weight/depth/height and the sets I0(n, r, s)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Tuple

MultiIndex = Tuple[int, ...]


@dataclass(frozen=True)
class IndexClass:
    weight: int
    depth: int
    height: int


def validate(idx) -> MultiIndex:
    idx = tuple(int(n) for n in idx)
    if not idx:
        raise ValueError("a multi-index needs at least one part")
    if any(n < 1 for n in idx):
        raise ValueError(f"parts must be positive integers: {idx}")
    return idx


def admissible(idx: MultiIndex) -> bool:
    return len(idx) > 0 and idx[0] >= 2


def shift(idx: MultiIndex) -> MultiIndex:
    """``(n1, n2, ...) -> (n1 + 1, n2, ...)``, the index behind zeta*."""
    return (idx[0] + 1,) + tuple(idx[1:])


def compositions(N: int, r: int) -> Iterator[MultiIndex]:
    """Ordered r-tuples of positive integers summing to N.

    Lexicographically descending, so ``compositions(4, 2)`` yields
    (3, 1), (2, 2), (1, 3).
    """
    if r < 1 or N < r:
        return
    if r == 1:
        yield (N,)
        return
    for first in range(N - r + 1, 0, -1):
        for rest in compositions(N - first, r - 1):
            yield (first,) + rest


def classify(idx: MultiIndex) -> IndexClass:
    return IndexClass(weight=sum(idx), depth=len(idx), height=sum(1 for n in idx if n > 1))


def enumerate_I0(n: int, r: int, s: int) -> Iterator[MultiIndex]:
    """Indices of weight n, depth r, height s with leading part > 1."""
    if r < 1 or s < 1 or s > r or n < r + s:
        return
    for idx in compositions(n, r):
        if idx[0] < 2:
            # descending order: every later composition also starts with 1
            return
        if sum(1 for p in idx if p > 1) == s:
            yield idx


def ones_padded(m: int, n: int) -> MultiIndex:
    """``(m + 2, 1, ..., 1)`` with n trailing ones."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    return (m + 2,) + (1,) * n
