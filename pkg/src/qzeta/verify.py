"""Identity certifiers.

Each check evaluates both sides of an identity with independent code paths
and compares the residual against a budget assembled from the certified tail
bounds, the per-value rounding slack, and ``OP_SLACK`` per combining
operation.  ``pass`` holds exactly when ``residual <= budget``.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import numpy as np

from .indices import compositions, enumerate_I0, ones_padded
from .powerseries import TruncSeries, exp_perturbation_bound, newton_power_sums, ps_exp, ps_substitute
from .qarith import EPS, CertifiedValue, QParam, q_int
from .series import (
    closed_Am,
    closed_Bm,
    eval_A_table,
    eval_B,
    eval_Lr,
    eval_qmzv,
    eval_qmzv_star,
    eval_Rr,
)
from .stuffle import reduce_zeta_m1, sum_formula_expr

OP_SLACK = 1e-12

Q_GRID = (0.2, 0.5, 0.8, 0.95)
Z_GRID = (0, 0.3, -0.7, 0.5 + 0.5j, 2.5, -3j, -2, 1 + 1j, -1.5 - 0.5j, 0.8j, -5, 0.1 - 0.2j)
X_GRID = (0.3, 0.5 + 0.2j)


@dataclass
class VerifyReport:
    identity_name: str
    parameters: dict
    lhs: Any
    rhs: Any
    residual: float
    budget: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.budget)

    def as_dict(self) -> dict:
        return {
            "identity": self.identity_name,
            "parameters": _jsonable(self.parameters),
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "residual": float(self.residual),
            "budget": float(self.budget),
            "pass": self.passed,
            "details": _jsonable(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    def to_tap(self, number: int) -> str:
        params = " ".join(f"{k}={_fmt(v)}" for k, v in self.parameters.items())
        status = "ok" if self.passed else "not ok"
        return f"{status} {number} - {self.identity_name} {params} residual={self.residual:.3e} budget={self.budget:.3e}"


def _fmt(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:g}{v.imag:+g}i"
    return f"{v:g}" if isinstance(v, float) else str(v)


def _jsonable(obj):
    if isinstance(obj, CertifiedValue):
        return obj.as_dict()
    if isinstance(obj, complex):
        return [obj.real, obj.imag] if obj.imag != 0 else obj.real
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _err(cv: CertifiedValue) -> float:
    return cv.tail_bound + cv.rounding_slack


# ---------------------------------------------------------------- sum formula


def sum_formula_sides(N: int, r: int, qp: QParam):
    """(lhs value, lhs error, number of terms, rhs CertifiedValue)."""
    vals = [eval_qmzv_star(c, qp) for c in compositions(N, r)]
    lhs = math.fsum(v.value for v in vals)
    return lhs, float(sum(_err(v) for v in vals)), len(vals), eval_qmzv_star((N,), qp)


def verify_sum_formula(N: int, r: int, qp: QParam) -> VerifyReport:
    if not N >= r >= 1:
        raise ValueError("need N >= r >= 1")
    lhs, lhs_err, nterms, rhs = sum_formula_sides(N, r, qp)
    residual = abs(lhs - rhs.value)
    budget = lhs_err + _err(rhs) + OP_SLACK * nterms
    return VerifyReport(
        "sum",
        {"q": qp.q, "N": N, "r": r},
        CertifiedValue(lhs, lhs_err, nterms),
        rhs,
        residual,
        budget,
        {"compositions": nterms},
    )


# ---------------------------------------------------------------- generating function


def verify_gf_identity(r: int, z, qp: QParam) -> VerifyReport:
    L = eval_Lr(r, z, qp)
    R = eval_Rr(r, z, qp)
    residual = abs(L.value - R.value)
    budget = _err(L) + _err(R) + 2 * OP_SLACK
    return VerifyReport("gf", {"q": qp.q, "r": r, "z": complex(z)}, L, R, residual, budget)


def verify_gf_coefficients(r: int, qp: QParam, p_max: int = 3, points: int = 32) -> VerifyReport:
    """Extract the z^p coefficients (p <= p_max) of both sides by the
    trapezoidal Cauchy formula on a small circle and compare them with the
    sum-formula values they must equal."""
    q = qp.q
    radius = 0.25
    R_big = 0.5 / q  # strictly inside the first pole 1/q
    Lbig, Rbig = eval_Lr(r, R_big, qp), eval_Rr(r, R_big, qp)
    zs = [radius * cmath.exp(2j * math.pi * j / points) for j in range(points)]
    Lv = [eval_Lr(r, z, qp) for z in zs]
    Rv = [eval_Rr(r, z, qp) for z in zs]
    alias_ratio = (radius / R_big) ** points
    rows = []
    residual = budget = 0.0
    for p in range(p_max + 1):
        w = [cmath.exp(-2j * math.pi * j * p / points) for j in range(points)]
        cL = sum(v.value * wj for v, wj in zip(Lv, w)) / points / radius ** p
        cR = sum(v.value * wj for v, wj in zip(Rv, w)) / points / radius ** p
        direct, d_err, nterms, star = sum_formula_sides(p + r, r, qp)
        # coefficients are nonnegative with sum c_n R^n = side(R)
        alias_L = abs(Lbig.value) * (1 + _err(Lbig)) / R_big ** p * alias_ratio / (1 - alias_ratio)
        alias_R = abs(Rbig.value) * (1 + _err(Rbig)) / R_big ** p * alias_ratio / (1 - alias_ratio)
        sample_L = max(_err(v) for v in Lv) / radius ** p
        sample_R = max(_err(v) for v in Rv) / radius ** p
        round_L = points * 4 * EPS * max(abs(v.value) for v in Lv) / radius ** p / points
        round_R = points * 4 * EPS * max(abs(v.value) for v in Rv) / radius ** p / points
        res = max(abs(cL - direct), abs(cR - star.value))
        bud = min(
            alias_L + sample_L + round_L + d_err + OP_SLACK * (points + nterms),
            alias_R + sample_R + round_R + _err(star) + OP_SLACK * points,
        )
        rows.append({"p": p, "lhs_coeff": cL, "rhs_coeff": cR, "sum_formula": direct, "zeta_star": star.value,
                     "residual": res, "budget": bud})
        residual = max(residual, res)
        budget = max(budget, bud)
    return VerifyReport(
        "gf-coeffs",
        {"q": qp.q, "r": r, "p_max": p_max},
        [row["lhs_coeff"] for row in rows],
        [row["rhs_coeff"] for row in rows],
        residual,
        budget,
        {"orders": rows, "radius": radius, "points": points},
    )


# ---------------------------------------------------------------- A/B representations


@lru_cache(maxsize=256)
def _A_table_cached(m: int, n_max: int, q: float, tol: float, max_terms: int):
    return tuple(eval_A_table(m, n_max, QParam(q, tol, max_terms)))


def _hn_majorant_tail(m: int, absx: float, n_max: int, q: float) -> float:
    """Bound on sum_{n > n_max} |x|^n A(m, n) from A(m, n) = (q^m/[m]) h_n(u),
    u_c = q^c/[c]: for |x| < t < 1/max u, the tail is at most
    (|x|/t)^(n_max+1) (q^m/[m]) prod (1 - t u_c)^-1."""
    u = [q ** c / q_int(c, q) for c in range(1, m + 1)]
    umax = max(u)
    if absx == 0:
        return 0.0
    if absx * umax >= 1:
        return math.inf
    pref = q ** m / q_int(m, q)
    best = math.inf
    for frac in np.linspace(0.02, 0.98, 49):
        t = absx + frac * (1 / umax - absx)
        gen = pref * math.prod(1 / (1 - t * uc) for uc in u)
        best = min(best, (absx / t) ** (n_max + 1) * gen)
    return best


def verify_ab_representations(m: int, x, n_max: int, qp: QParam) -> VerifyReport:
    x = complex(x)
    A = _A_table_cached(m, n_max, qp.q, qp.tol, qp.max_terms)
    seriesA = sum(x ** n * a.value for n, a in enumerate(A))
    prodA = closed_Am(m, x, qp)
    resA = abs(seriesA - prodA)
    x_tail = _hn_majorant_tail(m, abs(x), n_max, qp.q)
    budA = sum(abs(x) ** n * _err(a) for n, a in enumerate(A)) + x_tail + OP_SLACK * (n_max + m)

    Bs = [eval_B(m, n, qp) for n in range(m)]
    seriesB = sum(x ** n * b for n, b in enumerate(Bs))
    prodB = closed_Bm(m, x, qp)
    resB = abs(seriesB - prodB)
    budB = OP_SLACK * max(m, 1)
    return VerifyReport(
        "abreps",
        {"q": qp.q, "m": m, "x": x, "n_max": n_max},
        {"A_series": seriesA, "B_series": seriesB},
        {"A_product": prodA, "B_product": prodB},
        max(resA, resB),
        max(budA, budB),
        {"A_residual": resA, "A_budget": budA, "A_x_tail": x_tail, "B_residual": resB, "B_budget": budB,
         "parts_within_own_budget": resA <= budA and resB <= budB},
    )


# ---------------------------------------------------------------- q-Euler reduction


def verify_euler_reduction(m: int, qp: QParam) -> VerifyReport:
    red = reduce_zeta_m1(m)
    eps = 1.0 - qp.q
    zm1 = eval_qmzv((m, 1), qp)
    zp = eval_qmzv((m + 1,), qp)
    zm = eval_qmzv((m,), qp)
    lhs = 2 * zm1.value
    prods = []
    prod_sum = prod_err = 0.0
    for (a,), (b,) in red.products:
        za, zb = eval_qmzv((a,), qp), eval_qmzv((b,), qp)
        prod_sum += za.value * zb.value
        ea, eb = _err(za), _err(zb)
        prod_err += abs(za.value) * eb + abs(zb.value) * ea + ea * eb
        prods.append((a, b))
    rhs = m * zp.value + eps * (m - 2) * zm.value - prod_sum
    residual = abs(lhs - rhs)
    budget = 2 * _err(zm1) + m * _err(zp) + eps * (m - 2) * _err(zm) + prod_err + OP_SLACK * (4 + len(prods))
    # symbolic side: after stuffle expansion the defect is twice the depth-2 sum formula
    symbolic_ok = red.defect() == sum_formula_expr(m, 2).scale(2)
    classical = red.linear.at_eps(0.0)
    return VerifyReport(
        "euler",
        {"q": qp.q, "m": m},
        CertifiedValue(lhs, 2 * zm1.tail_bound, zm1.terms_used),
        rhs,
        residual,
        budget,
        {
            "symbolic_defect_is_sum_formula": symbolic_ok,
            "classical_linear_part": {str(list(k)): v for k, v in classical.items() if v != 0},
            "products": prods,
        },
    )


# ---------------------------------------------------------------- double generating function


def _zeta_singles(D: int, qp: QParam) -> dict:
    return {j: eval_qmzv((j,), qp) for j in range(2, D + 1)}


def _exp_argument_weights(kmax: int, q: float, singles: dict):
    """c_k = (1/k) sum_{j=2}^k (q-1)^(k-j) zeta[j] and error bounds on c_k."""
    c, dc = {}, {}
    for k in range(2, kmax + 1):
        c[k] = sum((q - 1) ** (k - j) * singles[j].value for j in range(2, k + 1)) / k
        dc[k] = sum(abs(q - 1) ** (k - j) * _err(singles[j]) for j in range(2, k + 1)) / k
    return c, dc


def _series_residual(lhs: TruncSeries, rhs: TruncSeries, lhs_err: TruncSeries, rhs_err: TruncSeries):
    dev = np.abs(lhs.coeffs - rhs.coeffs)
    bud = lhs_err.coeffs.real + rhs_err.coeffs.real + OP_SLACK * (1 + np.abs(rhs.coeffs))
    return float(dev.max()), float(bud.max()), bool(np.all(dev <= bud))


def drin_rhs(qp: QParam, D: int, singles: dict | None = None):
    """1 - exp(sum_k {x^k + y^k - (x+y+(1-q)xy)^k} c_k) and its error majorant."""
    q = qp.q
    singles = singles or _zeta_singles(D, qp)
    x, y = TruncSeries.var(0, 2, D), TruncSeries.var(1, 2, D)
    base = x + y + x * y * (1 - q)
    c, dc = _exp_argument_weights(D, q, singles)
    arg = TruncSeries(2, D)
    absarg = TruncSeries(2, D)
    darg = TruncSeries(2, D)
    bk = base
    for k in range(2, D + 1):
        bk = bk * base
        poly = x ** k + y ** k - bk
        arg = arg + poly * c[k]
        absarg = absarg + poly.abs() * abs(c[k])
        darg = darg + poly.abs() * dc[k]
    rhs = 1 - ps_exp(arg)
    return rhs, exp_perturbation_bound(absarg, darg)


def drin_table(qp: QParam, D: int) -> dict:
    """(m, n) -> zeta[m+2, {1}^n] for m + n + 2 <= D."""
    return {(m, n): eval_qmzv(ones_padded(m, n), qp) for m in range(D - 1) for n in range(D - 1 - m)}


def verify_drin(qp: QParam, D: int) -> VerifyReport:
    if D < 2:
        raise ValueError("degree cap must be >= 2")
    table = drin_table(qp, D)
    lhs = TruncSeries.from_terms(2, D, {(m + 1, n + 1): v.value for (m, n), v in table.items()})
    lhs_err = TruncSeries.from_terms(2, D, {(m + 1, n + 1): _err(v) for (m, n), v in table.items()})
    rhs, rhs_err = drin_rhs(qp, D)
    residual, budget, each_ok = _series_residual(lhs, rhs, lhs_err, rhs_err)
    sym = max(
        (abs(table[(m, n)].value - table[(n, m)].value) for (m, n) in table),
        default=0.0,
    )
    sym_bud = max(
        (_err(table[(m, n)]) + _err(table[(n, m)]) + OP_SLACK for (m, n) in table),
        default=OP_SLACK,
    )
    return VerifyReport(
        "drin",
        {"q": qp.q, "D": D},
        {f"{m},{n}": v.value for (m, n), v in table.items()},
        {f"{m},{n}": rhs[(m + 1, n + 1)].real for (m, n) in table},
        max(residual, sym),
        max(budget, sym_bud),
        {"coefficient_residual": residual, "coefficient_budget": budget, "coefficients_within_own_budget": each_ok,
         "symmetry_residual": sym, "symmetry_budget": sym_bud},
    )


# ---------------------------------------------------------------- height relation


def g0_table(qp: QParam, D: int) -> dict:
    """(n, r, s) -> (G0 value, error) for every Phi0 monomial of total degree
    <= D - 1, i.e. x^(n-r-s) y^(r-s) z^(s-1) with n - s - 1 <= D - 1."""
    out = {}
    for s in range(1, D + 1):
        for r in range(s, D + s):
            for n in range(r + s, D + s + 1):
                vals = [eval_qmzv(idx, qp) for idx in enumerate_I0(n, r, s)]
                out[(n, r, s)] = (math.fsum(v.value for v in vals), sum(_err(v) for v in vals) + OP_SLACK * len(vals))
    return out


def phi0_series(qp: QParam, cap: int, table: dict | None = None):
    table = table or g0_table(qp, cap + 1)
    terms, errs = {}, {}
    for (n, r, s), (v, e) in table.items():
        mono = (n - r - s, r - s, s - 1)
        if sum(mono) <= cap:
            terms[mono] = v
            errs[mono] = e
    return TruncSeries.from_terms(3, cap, terms), TruncSeries.from_terms(3, cap, errs)


def height_rhs(qp: QParam, D: int, singles: dict | None = None):
    """exp(sum_k (x^k + y^k - p_k) c_k) with p_k the power sums of the roots
    of T^2 - e1 T + e2, e1 = x + y + (q-1)(z - xy), e2 = z.

    p_k has terms of degree ceil(k/2), so k runs to 2D to fill the cap."""
    q = qp.q
    kmax = 2 * D
    singles = singles or _zeta_singles(kmax, qp)
    x, y, z = (TruncSeries.var(i, 3, D) for i in range(3))
    e1 = x + y + (z - x * y) * (q - 1)
    p = newton_power_sums(e1, z, kmax)
    c, dc = _exp_argument_weights(kmax, q, singles)
    arg = TruncSeries(3, D)
    absarg = TruncSeries(3, D)
    darg = TruncSeries(3, D)
    for k in range(2, kmax + 1):
        poly = x ** k + y ** k - p[k - 1]
        arg = arg + poly * c[k]
        absarg = absarg + poly.abs() * abs(c[k])
        darg = darg + poly.abs() * dc[k]
    return ps_exp(arg), exp_perturbation_bound(absarg, darg)


def verify_height_relation(qp: QParam, D: int) -> VerifyReport:
    if D < 2:
        raise ValueError("degree cap must be >= 2")
    table = g0_table(qp, D)
    phi, phi_err = phi0_series(qp, D, table)
    x, y, z = (TruncSeries.var(i, 3, D) for i in range(3))
    lhs = 1 + (z - x * y) * phi
    lhs_err = (z + x * y) * phi_err
    rhs, rhs_err = height_rhs(qp, D)
    residual, budget, each_ok = _series_residual(lhs, rhs, lhs_err, rhs_err)
    return VerifyReport(
        "height",
        {"q": qp.q, "D": D},
        {f"{n},{r},{s}": v for (n, r, s), (v, _) in sorted(table.items())},
        {"max_abs_coeff": rhs.max_abs()},
        residual,
        budget,
        {"height_strata": "s >= 1 only; Phi0 has no s = 0 terms", "indices_weight_max": max(n for n, _, _ in table),
         "coefficients_within_own_budget": each_ok},
    )


def verify_phi_diagonal(qp: QParam, D: int) -> VerifyReport:
    """G0[n, r] = sum_s G0[n, r, s] equals zeta[n] for 2 <= n <= D, r < n,
    read off Phi0[x, y, xy] after substituting z = xy."""
    if D < 2:
        raise ValueError("degree cap must be >= 2")
    cap = D - 2
    table = g0_table(qp, cap + 1)
    phi, phi_err = phi0_series(qp, cap, table)
    x2, y2 = TruncSeries.var(0, 2, cap), TruncSeries.var(1, 2, cap)
    images = [x2, y2, x2 * y2]
    collapsed = ps_substitute(phi, images)
    collapsed_err = ps_substitute(phi_err, images)
    rows = {}
    residual = budget = 0.0
    for n in range(2, D + 1):
        zn = eval_qmzv((n,), qp)
        for r in range(1, n):
            g = collapsed[(n - r - 1, r - 1)].real
            res = abs(g - zn.value)
            bud = collapsed_err[(n - r - 1, r - 1)].real + _err(zn) + OP_SLACK * n
            rows[f"{n},{r}"] = {"G0": g, "zeta": zn.value, "residual": res, "budget": bud}
            residual = max(residual, res)
            budget = max(budget, bud)
    return VerifyReport(
        "diagonal",
        {"q": qp.q, "D": D},
        {k: v["G0"] for k, v in rows.items()},
        {k: v["zeta"] for k, v in rows.items()},
        residual,
        budget,
        {"rows": rows},
    )
