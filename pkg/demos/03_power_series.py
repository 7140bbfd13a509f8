"""
Generating series with truncated power series
=============================================

Coefficient tables of two- and three-variable generating functions, built
with the small dense power-series type that ships with the package.
"""

import numpy as np

from qzeta import QParam
from qzeta.powerseries import TruncSeries, ps_exp, ps_log
from qzeta.verify import drin_rhs, drin_table, g0_table

# exp and log are mutually inverse on series with the right constant terms.
x, y = TruncSeries.var(0, 2, 6), TruncSeries.var(1, 2, 6)
f = x + 0.5 * y + x * y
print("log(exp(f)) == f:", ps_log(ps_exp(f)).allclose(f, 1e-14))

# The table zeta[m+2, {1}^n] against the closed exponential form.
qp = QParam(0.5, 1e-12)
D = 6
table = drin_table(qp, D)
rhs, err = drin_rhs(qp, D)
lhs = np.zeros((D - 1, D - 1))
closed = np.zeros_like(lhs)
for (m, n), cv in table.items():
    lhs[m, n] = cv.value
    closed[m, n] = rhs[(m + 1, n + 1)].real
print("zeta[m+2,{1}^n] table:\n", np.round(lhs, 6))
print("max |table - closed form| =", np.abs(lhs - closed).max())
print("table is symmetric:", np.allclose(lhs, lhs.T, atol=1e-12))

# Sums over indices of fixed weight, depth and height.
for (n, r, s), (value, _) in sorted(g0_table(qp, 4).items()):
    print(f"G0[{n},{r},{s}] = {value:.10f}")
