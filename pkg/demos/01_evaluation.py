"""
Evaluating multiple q-zeta values
=================================

A walk through the basic evaluator, its certificates and the q -> 1 limit.
"""

# The evaluator returns a value together with a bound on the omitted tail.
import numpy as np

from qzeta import QParam, eval_mzv, eval_qmzv, q_int

qp = QParam(0.5, tol=1e-12)
z3 = eval_qmzv((3,), qp)
print("zeta[3] at q=0.5:", z3.value, "tail <=", z3.tail_bound, "terms:", z3.terms_used)

# Depth two already shows a relation: zeta[2,1] and zeta[3] agree.
z21 = eval_qmzv((2, 1), qp)
print("zeta[2,1] - zeta[3] =", z21.value - z3.value, "allowed:", z21.error_bound + z3.error_bound)

# q-integers interpolate the ordinary integers.
k = np.arange(1, 6)
for q in (0.5, 0.9, 0.999):
    print(f"[k]_q at q={q}:", np.round([q_int(int(i), q) for i in k], 4))

# As q approaches 1 the q-analogue drifts toward the classical value.
classical = eval_mzv((3,), tol=1e-6)
print("classical zeta(3) ~", classical.value)
for q in (0.9, 0.99, 0.999):
    v = eval_qmzv((3,), QParam(q, 1e-9))
    print(f"  q={q}: zeta_q[3] = {v.value:.8f}, gap = {abs(v.value - classical.value):.2e}")
