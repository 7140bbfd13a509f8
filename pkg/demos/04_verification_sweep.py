"""
Running identity sweeps
=======================

Each check returns a report whose residual is compared with a budget built
from certified tail bounds and rounding slack.
"""

import json

from qzeta import QParam
from qzeta.verify import Q_GRID, verify_gf_identity, verify_height_relation, verify_sum_formula

reports = [verify_sum_formula(N, r, QParam(q)) for q in Q_GRID for N in range(1, 7) for r in range(1, N + 1)]
print(f"sum formula: {sum(r.passed for r in reports)}/{len(reports)} pass")
worst = max(reports, key=lambda r: r.residual / r.budget)
print("tightest point:", worst.to_tap(1))

# The generating-function check works for complex z away from poles.
rep = verify_gf_identity(3, 0.5 + 0.5j, QParam(0.8))
print(json.dumps(rep.as_dict(), indent=1)[:400], "...")

# Three-variable relation, coefficient by coefficient.
h = verify_height_relation(QParam(0.5), 5)
print("height relation:", "pass" if h.passed else "FAIL", f"residual={h.residual:.2e} budget={h.budget:.2e}")

# The same sweeps are available from the shell:
#   qzeta verify all --q 0.5
#   qzeta verify gf --q 0.8 --z 0.5+0.5i,-3i --format json
