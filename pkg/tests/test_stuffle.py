import itertools
import json
import random

import pytest

from oracles import classical_stuffle
from qzeta.indices import classify
from qzeta.qarith import NonAdmissibleKey, QParam
from qzeta.series import eval_qmzv
from qzeta.stuffle import (
    StuffleExpr,
    eps_add,
    eps_eval,
    eps_mul,
    eval_expr,
    eval_expr_detail,
    qstuffle,
    reduce_zeta_m1,
    sum_formula_expr,
)


def E(mapping):
    return StuffleExpr.from_mapping(mapping)


def test_eps_poly_arithmetic():
    assert eps_add((1, 2), (0, -2)) == (1,)
    assert eps_add((1,), (-1,)) == ()
    assert eps_mul((1, 1), (1, -1)) == (1, 0, -1)
    assert eps_eval((1, 2, 3), 0.5) == 1 + 1 + 0.75


def test_depth_one_rule():
    assert qstuffle((2,), (2,)) == E({(4,): 1, (3,): (0, 1), (2, 2): 2})
    assert qstuffle((2,), (3,)) == E({(5,): 1, (4,): (0, 1), (2, 3): 1, (3, 2): 1})


@pytest.mark.parametrize("m", range(3, 9))
def test_reduction_product_shape(m):
    for k in range(1, m - 1):
        expected = E({(m + 1,): 1, (m,): (0, 1)}) + E({(m - k, k + 1): 1}) + E({(k + 1, m - k): 1})
        assert qstuffle((m - k,), (k + 1,)) == expected


def test_canonical_order_and_json_roundtrip():
    e = qstuffle((2, 1), (2,))
    keys = e.keys()
    assert keys == sorted(keys, reverse=True)
    data = json.loads(e.to_json())
    assert list(data) == ["terms"]
    assert all(list(t) == ["index", "eps"] for t in data["terms"])
    assert StuffleExpr.from_json(e.to_json()) == e
    assert e.to_json() == qstuffle((2,), (2, 1)).to_json()


def words(max_depth, max_part):
    for d in range(1, max_depth + 1):
        yield from itertools.product(range(1, max_part + 1), repeat=d)


def test_commutativity_exhaustive():
    ws = list(words(3, 4))
    for a in ws:
        for b in ws:
            assert qstuffle(a, b) == qstuffle(b, a)


def test_weight_grading():
    ws = list(words(3, 3))
    for a in ws[::3]:
        for b in ws[::2]:
            target = sum(a) + sum(b)
            for key, poly in qstuffle(a, b).terms:
                for deg, c in enumerate(poly):
                    if c:
                        assert classify(key).weight + deg == target


def test_eps_zero_gives_classical_stuffle():
    for a in words(2, 3):
        for b in words(2, 3):
            limit = {k: v for k, v in qstuffle(a, b).at_eps(0.0).items() if v}
            assert limit == {k: float(v) for k, v in classical_stuffle(a, b).items()}


def test_general_depth_numeric():
    qp = QParam(0.5, 1e-12)
    e = qstuffle((2, 1), (2,))
    value, tail, slack, _ = eval_expr_detail(e, qp)
    a, b = eval_qmzv((2, 1), qp), eval_qmzv((2,), qp)
    prod = a.value * b.value
    budget = tail + slack + abs(a.value) * b.error_bound + abs(b.value) * a.error_bound + 1e-12
    assert abs(value - prod) <= budget
    assert abs(value - prod) < 1e-10


def test_numeric_soundness_random_pairs():
    rng = random.Random(1)
    for _ in range(25):
        a = (rng.randint(2, 4),) + tuple(rng.randint(1, 4) for _ in range(rng.randint(0, 1)))
        b = (rng.randint(2, 4),) + tuple(rng.randint(1, 4) for _ in range(rng.randint(0, 1)))
        for q in (0.3, 0.7):
            qp = QParam(q, 1e-12)
            value, tail, slack, _ = eval_expr_detail(qstuffle(a, b), qp)
            za, zb = eval_qmzv(a, qp), eval_qmzv(b, qp)
            budget = tail + slack + za.value * zb.error_bound + zb.value * za.error_bound + za.error_bound * zb.error_bound
            assert abs(value - za.value * zb.value) <= budget + 1e-12


def test_eval_expr_examples():
    qp = QParam(0.5, 1e-12)
    assert round(eval_expr(E({(3,): 1}), qp).value, 6) == 0.272203
    empty = eval_expr(StuffleExpr(), qp)
    assert empty.value == 0 and empty.tail_bound == 0
    z2 = eval_qmzv((2,), qp)
    got = eval_expr(qstuffle((2,), (2,)), qp)
    assert abs(got.value - z2.value ** 2) <= got.error_bound + 2 * z2.value * z2.error_bound
    with pytest.raises(NonAdmissibleKey):
        eval_expr(E({(1, 2): 1}), qp)


def test_non_admissible_keys_allowed_symbolically():
    e = qstuffle((1,), (1,))
    assert (1, 1) in e.as_dict() and (1,) in e.as_dict()


def test_reduce_m2_is_zeta21_eq_zeta3():
    red = reduce_zeta_m1(2)
    assert red.products == ()
    assert red.linear == E({(3,): 2})
    assert red.lhs == E({(2, 1): 2})


def test_reduce_m3_shape():
    red = reduce_zeta_m1(3)
    assert red.linear == E({(4,): 3, (3,): (0, 1)})
    assert red.products == (((2,), (2,)),)


@pytest.mark.parametrize("m", range(2, 10))
def test_reduction_defect_is_twice_sum_formula(m):
    assert reduce_zeta_m1(m).defect() == sum_formula_expr(m, 2).scale(2)


def test_reduction_m4_numeric():
    qp = QParam(0.5, 1e-12)
    red = reduce_zeta_m1(4)
    lhs = eval_expr(red.lhs, qp)
    rhs = eval_expr(red.expanded_rhs(), qp)
    assert abs(lhs.value - rhs.value) < 1e-9


def test_reduce_rejects_small_m():
    with pytest.raises(ValueError):
        reduce_zeta_m1(1)


def test_eps_zero_linear_part_is_classical_euler():
    for m in range(2, 9):
        lin = reduce_zeta_m1(m).linear.at_eps(0.0)
        assert {k: v for k, v in lin.items() if v} == {(m + 1,): float(m)}
