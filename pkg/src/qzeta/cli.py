"""Command line front end: ``qzeta eval | verify | table``.

Exit codes: 0 success, 1 some identity failed, 2 bad input, 3 divergent
index, 4 evaluation/infrastructure error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

from . import verify as V
from .indices import compositions, enumerate_I0, ones_padded, shift
from .qarith import DivergentSeries, QParam, QZetaError
from .series import eval_qmzv

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DIVERGENT, EXIT_INFRA = 0, 1, 2, 3, 4

IDENTITIES = ("sum", "gf", "abreps", "euler", "drin", "height", "diagonal")
DEFAULT_CAPS = {"drin": 8, "height": 6, "diagonal": 8}
MAX_CAP = 10


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    q_list: tuple
    tol: float = 1e-12
    max_terms: int = 1_000_000
    degree_cap: Optional[int] = None
    output_format: str = "text"
    output_path: Optional[str] = None
    max_weight: int = 8
    depth: int = 4
    z_list: Optional[tuple] = None
    weight: int = 4

    def __post_init__(self):
        for q in self.q_list:
            if not 0 < q < 1:
                raise ParseError(f"q must lie in (0, 1), got {q}")
        if not self.tol > 0:
            raise ParseError("tol must be positive")
        if self.degree_cap is not None and not 2 <= self.degree_cap <= MAX_CAP:
            raise ParseError(f"--cap must lie in [2, {MAX_CAP}]")

    def qparams(self):
        return [QParam(q, self.tol, self.max_terms) for q in self.q_list]


# ---------------------------------------------------------------- parsing

_EXPR = re.compile(r"^\s*(zeta\*|zeta|ζ\*|ζ)?\s*\[(.*)\]\s*$")
_REPEAT = re.compile(r"^(\d+)\s*\*\s*(\d+)$")
_BRACE = re.compile(r"^\{\s*(\d+)\s*\}\s*\^\s*(\d+)$")


def parse_index(text: str):
    """Parse ``[3,1,1]``, ``[3,1*2]``, ``[3,{1}^2]`` or ``zeta*[2,1]``.

    Returns ``(index, starred)``.
    """
    m = _EXPR.match(text)
    if not m:
        raise ParseError(f"cannot parse index literal {text!r}")
    starred = (m.group(1) or "").endswith("*")
    parts = []
    for tok in m.group(2).split(","):
        tok = tok.strip()
        rep = _REPEAT.match(tok) or _BRACE.match(tok)
        if rep:
            parts.extend([int(rep.group(1))] * int(rep.group(2)))
        elif tok.isdigit():
            parts.append(int(tok))
        else:
            raise ParseError(f"bad index entry {tok!r} in {text!r}")
    if not parts or any(p < 1 for p in parts):
        raise ParseError(f"index parts must be positive integers: {text!r}")
    return tuple(parts), starred


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise ParseError(f"cannot parse complex literal {text!r}") from None


def _float_list(text: str):
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ParseError(f"cannot parse number list {text!r}") from None


# ---------------------------------------------------------------- output


def _workers() -> int:
    env = os.environ.get("QMZV_THREADS")
    n = os.cpu_count() or 1
    if env:
        try:
            n = min(n, max(1, int(env)))
        except ValueError:
            pass
    return n


def _fan_out(tasks: list[Callable]):
    """Run thunks, results in task order whatever the completion order."""
    n = _workers()
    if n == 1 or len(tasks) < 2:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(lambda t: t(), tasks))


def _emit(text: str, cfg: RunConfig):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_out(rows: list[dict], cfg: RunConfig) -> str:
    if cfg.output_format == "json":
        return json.dumps(rows, indent=1) + "\n"
    if cfg.output_format == "csv":
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            for row in rows:
                w.writerow({k: (repr(v) if isinstance(v, float) else json.dumps(v) if isinstance(v, list) else v)
                            for k, v in row.items()})
        return buf.getvalue()
    lines = []
    for row in rows:
        lines.append("  ".join(f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}" for k, v in row.items()))
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------- commands


def cmd_eval(expr: str, cfg: RunConfig) -> int:
    try:
        idx, starred = parse_index(expr)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    key = shift(idx) if starred else idx
    rows = []
    try:
        for qp in cfg.qparams():
            cv = eval_qmzv(key, qp)
            rows.append({"expr": expr.strip(), "index": list(key), "q": qp.q, "value": cv.value,
                         "tail_bound": cv.tail_bound, "terms_used": cv.terms_used})
    except DivergentSeries as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except QZetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFRA
    _emit(_rows_out(rows, cfg), cfg)
    return EXIT_OK


def sweep_tasks(identity: str, cfg: RunConfig) -> list[Callable]:
    """Parameter points of one identity sweep, in deterministic order."""
    tasks: list[Callable] = []
    cap = cfg.degree_cap
    for qp in cfg.qparams():
        if identity == "sum":
            for N in range(1, cfg.max_weight + 1):
                for r in range(1, N + 1):
                    tasks.append(lambda N=N, r=r, qp=qp: V.verify_sum_formula(N, r, qp))
        elif identity == "gf":
            for r in range(1, cfg.depth + 1):
                for z in cfg.z_list or V.Z_GRID:
                    tasks.append(lambda r=r, z=z, qp=qp: V.verify_gf_identity(r, z, qp))
                tasks.append(lambda r=r, qp=qp: V.verify_gf_coefficients(r, qp))
        elif identity == "abreps":
            for m in range(1, 21):
                for x in V.X_GRID:
                    tasks.append(lambda m=m, x=x, qp=qp: V.verify_ab_representations(m, x, 40, qp))
        elif identity == "euler":
            for m in range(2, cfg.max_weight + 1):
                tasks.append(lambda m=m, qp=qp: V.verify_euler_reduction(m, qp))
        elif identity == "drin":
            tasks.append(lambda qp=qp: V.verify_drin(qp, cap or DEFAULT_CAPS["drin"]))
        elif identity == "height":
            tasks.append(lambda qp=qp: V.verify_height_relation(qp, cap or DEFAULT_CAPS["height"]))
        elif identity == "diagonal":
            tasks.append(lambda qp=qp: V.verify_phi_diagonal(qp, cap or DEFAULT_CAPS["diagonal"]))
        else:
            raise ParseError(f"unknown identity {identity!r}")
    return tasks


def cmd_verify(identity: str, cfg: RunConfig) -> int:
    names = IDENTITIES if identity == "all" else (identity,)
    try:
        tasks = [t for name in names for t in sweep_tasks(name, cfg)]
        reports = _fan_out(tasks)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # evaluation failure inside a sweep point
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INFRA
    npass = sum(r.passed for r in reports)
    summary = f"# identities={len(reports)} pass={npass} fail={len(reports) - npass}"
    if cfg.output_format == "json":
        text = json.dumps([r.as_dict() for r in reports], indent=1) + "\n"
    elif cfg.output_format == "csv":
        rows = [{"identity": r.identity_name, "parameters": json.dumps(V._jsonable(r.parameters)),
                 "residual": r.residual, "budget": r.budget, "pass": r.passed} for r in reports]
        text = _rows_out(rows, cfg)
    else:
        lines = ["TAP version 13", f"1..{len(reports)}"]
        lines += [r.to_tap(i) for i, r in enumerate(reports, 1)]
        lines.append(summary)
        text = "\n".join(lines) + "\n"
    _emit(text, cfg)
    if cfg.output_format != "text" or cfg.output_path:
        print(summary, file=sys.stderr)
    return EXIT_OK if npass == len(reports) else EXIT_FAIL


def table_rows(kind: str, cfg: RunConfig) -> list[dict]:
    rows = []
    for qp in cfg.qparams():
        if kind == "zeta":
            for w in range(2, cfg.max_weight + 1):
                for r in range(1, w):
                    for idx in compositions(w, r):
                        if idx[0] < 2:
                            break
                        cv = eval_qmzv(idx, qp)
                        rows.append({"index": list(idx), "q": qp.q, "value": cv.value,
                                     "tail_bound": cv.tail_bound, "terms_used": cv.terms_used})
        elif kind == "G0":
            n = cfg.weight
            for r in range(1, n):
                for s in range(1, min(r, n - r) + 1):
                    members = list(enumerate_I0(n, r, s))
                    vals = [eval_qmzv(i, qp) for i in members]
                    rows.append({"n": n, "r": r, "s": s, "q": qp.q, "count": len(members),
                                 "value": sum(v.value for v in vals), "tail_bound": sum(v.tail_bound for v in vals)})
        elif kind == "drin-coeffs":
            D = cfg.degree_cap or DEFAULT_CAPS["drin"]
            for m in range(D - 1):
                for n in range(D - 1 - m):
                    cv = eval_qmzv(ones_padded(m, n), qp)
                    rows.append({"m": m, "n": n, "q": qp.q, "value": cv.value, "tail_bound": cv.tail_bound})
        else:
            raise ParseError(f"unknown table kind {kind!r}")
    return rows


def cmd_table(kind: str, cfg: RunConfig) -> int:
    try:
        rows = table_rows(kind, cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except QZetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFRA
    _emit(_rows_out(rows, cfg), cfg)
    return EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", default=None, help="comma separated q values in (0,1)")
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--max-terms", type=int, default=1_000_000)
    common.add_argument("--max-weight", type=int, default=None)
    common.add_argument("--weight", type=int, default=4)
    common.add_argument("--depth", type=int, default=4)
    common.add_argument("--cap", type=int, default=None)
    common.add_argument("--z", default=None, help="comma separated complex values, e.g. 0.5+0.5i,-3i")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", default=None)

    p = argparse.ArgumentParser(prog="qzeta", description="Multiple q-zeta values: evaluation and identity checks.")
    sub = p.add_subparsers(dest="command", required=True)
    pe = sub.add_parser("eval", parents=[common], help="evaluate zeta[...] or zeta*[...]")
    pe.add_argument("expr")
    pv = sub.add_parser("verify", parents=[common], help="run identity sweeps")
    pv.add_argument("identity", choices=IDENTITIES + ("all",))
    pt = sub.add_parser("table", parents=[common], help="emit value tables")
    pt.add_argument("kind", choices=("zeta", "G0", "drin-coeffs"))
    return p


def _config(args) -> RunConfig:
    default_q = {"eval": (0.5,), "table": (0.5,), "verify": V.Q_GRID}[args.command]
    q_list = _float_list(args.q) if args.q else default_q
    z_list = tuple(parse_complex(t) for t in args.z.split(",")) if args.z else None
    default_w = 5 if args.command == "table" else 8
    return RunConfig(
        command=args.command,
        q_list=q_list,
        tol=args.tol,
        max_terms=args.max_terms,
        degree_cap=args.cap,
        output_format=args.format,
        output_path=args.out,
        max_weight=args.max_weight or default_w,
        depth=args.depth,
        z_list=z_list,
        weight=args.weight,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.command == "eval":
        return cmd_eval(args.expr, cfg)
    if args.command == "verify":
        return cmd_verify(args.identity, cfg)
    return cmd_table(args.kind, cfg)


if __name__ == "__main__":
    sys.exit(main())
