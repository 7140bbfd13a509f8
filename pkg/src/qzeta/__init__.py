"""Certified multiple q-zeta values, q-stuffle algebra and identity checks."""
from .indices import classify, compositions, enumerate_I0, ones_padded
from .qarith import (
    BudgetExceeded,
    CertifiedValue,
    DivergentSeries,
    NonAdmissibleKey,
    PoleProximity,
    QParam,
    q_int,
)
from .series import (
    closed_Am,
    closed_Bm,
    eval_A,
    eval_B,
    eval_Lr,
    eval_mzv,
    eval_qmzv,
    eval_qmzv_star,
    eval_Rr,
)
from .stuffle import StuffleExpr, eval_expr, qstuffle, reduce_zeta_m1

__version__ = "0.1.0"
