from math import comb

import pytest

from qzeta.indices import (
    IndexClass,
    admissible,
    classify,
    compositions,
    enumerate_I0,
    ones_padded,
    shift,
    validate,
)


def test_compositions_examples():
    assert list(compositions(4, 2)) == [(3, 1), (2, 2), (1, 3)]
    assert list(compositions(7, 1)) == [(7,)]
    assert len(list(compositions(5, 3))) == 6
    assert list(compositions(2, 3)) == []


@pytest.mark.parametrize("N", range(1, 13))
def test_composition_counts_exhaustive(N):
    for r in range(1, N + 1):
        got = list(compositions(N, r))
        assert len(got) == comb(N - 1, r - 1)
        assert len(set(got)) == len(got)
        assert all(sum(c) == N and len(c) == r and min(c) >= 1 for c in got)
        assert got == sorted(got, reverse=True)


def test_compositions_is_lazy():
    gen = compositions(20, 10)
    assert next(gen) == (11,) + (1,) * 9


def test_classify_examples():
    assert classify((3, 1)) == IndexClass(4, 2, 1)
    assert classify((2, 2)) == IndexClass(4, 2, 2)
    m, n = 3, 4
    assert classify(ones_padded(m, n)) == IndexClass(m + n + 2, n + 1, 1)


def test_enumerate_I0_examples():
    assert list(enumerate_I0(4, 2, 1)) == [(3, 1)]
    assert list(enumerate_I0(3, 1, 1)) == [(3,)]
    assert list(enumerate_I0(4, 2, 2)) == [(2, 2)]
    assert list(enumerate_I0(3, 2, 2)) == []
    assert list(enumerate_I0(5, 2, 0)) == []


@pytest.mark.parametrize("n", range(1, 11))
def test_I0_strata_partition_admissible_compositions(n):
    for r in range(1, n + 1):
        admissible_count = sum(1 for c in compositions(n, r) if c[0] >= 2)
        strata = sum(len(list(enumerate_I0(n, r, s))) for s in range(0, r + 1))
        assert strata == admissible_count
        for s in range(1, r + 1):
            for idx in enumerate_I0(n, r, s):
                cl = classify(idx)
                assert (cl.weight, cl.depth, cl.height) == (n, r, s) and idx[0] > 1


def test_ones_padded():
    assert ones_padded(0, 0) == (2,)
    assert ones_padded(1, 2) == (3, 1, 1)
    assert ones_padded(0, 1) == (2, 1)


def test_classify_consistency():
    for N in range(1, 9):
        for r in range(1, N + 1):
            for c in compositions(N, r):
                cl = classify(c)
                assert cl.height <= cl.depth <= cl.weight


def test_validate_and_helpers():
    with pytest.raises(ValueError):
        validate(())
    with pytest.raises(ValueError):
        validate((2, 0))
    assert admissible((2, 1)) and not admissible((1, 2))
    assert shift((1, 1)) == (2, 1)
