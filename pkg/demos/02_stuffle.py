"""
The q-stuffle product
=====================

Products of q-zeta values expand into sums of q-zeta values.  Every diagonal
collision brings an extra term weighted by eps = 1 - q.
"""

from qzeta import QParam, eval_expr, eval_qmzv, qstuffle, reduce_zeta_m1

expr = qstuffle((2,), (3,))
print("zeta[2] * zeta[3] =", expr)

# Check the expansion numerically.
qp = QParam(0.7, 1e-12)
lhs = eval_qmzv((2,), qp).value * eval_qmzv((3,), qp).value
print("product:", lhs, " expansion:", eval_expr(expr, qp).value)

# Setting eps = 0 recovers the classical stuffle coefficients.
print("classical limit:", {k: v for k, v in expr.at_eps(0.0).items() if v})

# Expressions serialize to JSON and back.
assert type(expr).from_json(expr.to_json()) == expr

# zeta[m,1] reduces to depth one plus products of single values.
red = reduce_zeta_m1(4)
print("2 zeta[4,1] =", red.linear, " minus products", red.products)
print("symbolic defect:", red.defect())
