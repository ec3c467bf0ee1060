"""``abclab`` command line: sweeps and reports as CSV or JSON.

Exit codes: 0 clean, 1 a checked inequality failed, 2 bad usage or input,
3 numeric failure in the Nevanlinna routines.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from . import kernels, sweep
from .complements import pell_solve, square_ratio
from .arith import largest_square_factor
from .errors import DomainError, NumericError, UsageError
from .function_field import mason_stothers_check, parse_coeffs, random_coprime_triple, format_coeffs
from .nevanlinna import NEV_COLUMNS, RatFuncC, check_residuals, geometric_radii

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

TRIPLES_COLS = ("a", "b", "c", "h", "log_rad", "quality", "margin")
VERIFY_COLS = ("a", "b", "c", "n", "lemma35_ok", "lemma35_slack", "cor36_ok", "lemma311_ok", "eq34_ok", "equations_ok")
POWER_COLS = ("a", "b", "c", "m", "h_abc", "h_uvw", "h_xyz", "n_abc", "chain1_ok", "chain2_ok", "eps_emp")
PELL_COLS = ("d", "x", "y", "rhs", "s_x", "s_y", "ratio")
MS_COLS = ("a", "b", "c", "maxdeg", "degrad", "ok")


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


class RowWriter:
    """Stream rows with a fixed column schema as CSV, or as a JSON array holding one object per line."""

    def __init__(self, fh, columns: Sequence[str], fmt: str):
        self.fh, self.columns, self.fmt = fh, tuple(columns), fmt
        self.count = 0
        if fmt == "csv":
            self._csv = csv.writer(fh, lineterminator="\n")
            self._csv.writerow(self.columns)
        else:
            fh.write("[")

    def write(self, values: Sequence) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} fields, schema has {len(self.columns)}")
        if self.fmt == "csv":
            self._csv.writerow([_cell(v) for v in values])
        else:
            obj = {k: _json_value(v) for k, v in zip(self.columns, values)}
            self.fh.write(("\n" if self.count == 0 else ",\n") + json.dumps(obj))
        self.count += 1

    def close(self) -> None:
        if self.fmt == "json":
            self.fh.write("\n]\n" if self.count else "]\n")


@contextmanager
def _open_out(path: str) -> Iterator:
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


@contextmanager
def _writer(args, columns) -> Iterator[RowWriter]:
    with _open_out(args.out) as fh:
        w = RowWriter(fh, columns, args.format)
        yield w
        w.close()


def _summary(obj: dict) -> None:
    print(json.dumps(obj, default=_json_default), file=sys.stderr)


def _json_default(o):
    if hasattr(o, "tolist"):
        return o.tolist()
    if isinstance(o, complex):
        return str(o)
    raise TypeError(type(o).__name__)


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _bound(text: str) -> int:
    v = int(float(text)) if "e" in text.lower() else int(text)
    if v < 2:
        raise argparse.ArgumentTypeError(f"bound must be >= 2, got {text}")
    return v


def _complex_list(text: str) -> list[complex]:
    text = text.strip().replace("−", "-")
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    out = []
    for tok in text.split(","):
        tok = tok.strip().replace(" ", "")
        try:
            out.append(complex(Fraction(tok)))
        except (ValueError, ZeroDivisionError):
            try:
                out.append(complex(tok))
            except ValueError:
                raise UsageError(f"bad coefficient {tok!r}") from None
    return out


# ---------------------------------------------------------------- subcommands


def run_triples(args) -> int:
    t0 = time.perf_counter()
    tab = sweep.triple_table(args.bound, args.eps, args.min_quality, args.jobs)
    with _writer(args, TRIPLES_COLS) as w:
        for a, b, h, lr, q, mg in zip(
            tab["a"].tolist(), tab["b"].tolist(), tab["h"].tolist(), tab["log_rad"].tolist(),
            tab["quality"].tolist(), tab["margin"].tolist(),
        ):
            w.write((a, b, -(a + b), h, lr, q, mg))
    best = int(tab["quality"].argmax()) if len(tab["a"]) else None
    _summary({
        "command": "triples",
        "bound": args.bound,
        "rows": w.count,
        "max_quality": float(tab["quality"][best]) if best is not None else None,
        "max_quality_triple": [int(tab["a"][best]), int(tab["b"][best])] if best is not None else None,
        "seconds": round(time.perf_counter() - t0, 3),
        "backend": kernels.BACKEND,
    })
    return EXIT_OK


def run_verify(args) -> int:
    t0 = time.perf_counter()
    mode = 1 if args.violations_only else 2
    per_n = {}
    bad = 0
    with _writer(args, VERIFY_COLS) as w:
        for n in args.n:
            res = sweep.gamma_sweep(args.bound, n, args.jobs, mode, args.inject_fault)
            rows = res.rows
            if rows is not None:
                cols = [rows[k].tolist() for k in kernels.GAMMA_COLS]
                for a, b, l35, s35, c36, l311, e34, eqs in zip(*cols):
                    w.write((a, b, -(a + b), n, bool(l35), s35, bool(c36), bool(l311), bool(e34), bool(eqs)))
            per_n[n] = {**res.stats, "violations": res.violations}
            bad += res.violations
    _summary({
        "command": "verify",
        "bound": args.bound,
        "n": args.n,
        "per_n": per_n,
        "total_violations": bad,
        "fault_injected": args.inject_fault,
        "seconds": round(time.perf_counter() - t0, 3),
        "backend": kernels.BACKEND,
    })
    return EXIT_VIOLATION if bad else EXIT_OK


def run_power(args) -> int:
    t0 = time.perf_counter()
    mode = 1 if args.violations_only else 2
    per_m = {}
    bad = 0
    with _writer(args, POWER_COLS) as w:
        for m in args.m:
            if m < 2:
                raise UsageError("m must be >= 2")
            res = sweep.power_sweep(args.bound, m, args.jobs, mode)
            rows = res.rows
            if rows is not None:
                cols = [rows[k].tolist() for k in kernels.POWER_COLS]
                for a, b, h_abc, h_uvw, h_xyz, n_abc, c1, c2, eps in zip(*cols):
                    w.write((a, b, -(a + b), m, h_abc, h_uvw, h_xyz, n_abc, bool(c1), bool(c2), eps))
            per_m[m] = {
                "chain1_violations": res.stats["chain1_violations"],
                "chain2_violations": res.stats["chain2_violations"],
                "powerfree_violations": res.stats["powerfree_violations"],
                "eps_emp": res.eps_summary(),
            }
            bad += res.violations
    _summary({
        "command": "power",
        "bound": args.bound,
        "per_m": per_m,
        "total_violations": bad,
        "seconds": round(time.perf_counter() - t0, 3),
    })
    return EXIT_VIOLATION if bad else EXIT_OK


def run_pell(args) -> int:
    ratios = []
    with _writer(args, PELL_COLS) as w:
        for d in args.d:
            for sol in pell_solve(d, args.count, method=args.method, y_max=args.y_max):
                s_x, s_y = largest_square_factor(sol.x), largest_square_factor(sol.y)
                r = square_ratio(sol.x, sol.y, s_x, s_y)
                ratios.append(r)
                w.write((d, sol.x, sol.y, sol.rhs, s_x, s_y, r))
    _summary({"command": "pell", "rows": w.count, "max_ratio": max(ratios), "mean_ratio": sum(ratios) / len(ratios)})
    return EXIT_OK


def _ms_cases(args) -> Iterable[tuple]:
    if args.a is not None:
        if args.b is None:
            raise UsageError("--a needs --b")
        a, b = parse_coeffs(args.a), parse_coeffs(args.b)
        yield a, b, -(a + b)
    if args.random:
        rng = random.Random(args.seed)
        for _ in range(args.random):
            yield random_coprime_triple(rng, args.maxdeg)


def run_ms(args) -> int:
    if args.a is None and not args.random:
        raise UsageError("give --a/--b or --random COUNT")
    bad = 0
    with _writer(args, MS_COLS) as w:
        for a, b, c in _ms_cases(args):
            res = mason_stothers_check(a, b, c)
            bad += not res.ok
            w.write((format_coeffs(a), format_coeffs(b), format_coeffs(c), res.maxdeg, res.degrad, res.ok))
    _summary({"command": "ms", "cases": w.count, "violations": bad})
    return EXIT_VIOLATION if bad else EXIT_OK


def run_nev(args) -> int:
    if args.f is not None:
        parts = args.f.replace(" ", "").split(")/(")
        if len(parts) == 1:
            num, den = parts[0], "1"
        elif len(parts) == 2:
            num, den = parts[0] + ")", "(" + parts[1]
        else:
            raise UsageError(f"cannot parse --f {args.f!r}; expected '(c0,...)/(d0,...)'")
    else:
        if args.num is None:
            raise UsageError("give --num (and optionally --den) or --f")
        num, den = args.num, args.den
    f = RatFuncC(_complex_list(num), _complex_list(den))
    if f.is_constant():
        raise UsageError("f is constant")
    radii = geometric_radii(args.rmin, args.rmax, args.points)
    rep = check_residuals(f, radii, args.nodes, logderiv_tol=args.logderiv_tol,
                          exceptional_fraction=args.exceptional_fraction)
    with _writer(args, NEV_COLUMNS) as w:
        for row in rep.table.rows():
            w.write(tuple(row[k] for k in NEV_COLUMNS))
    summary = {
        "command": "nev",
        "degree": f.degree,
        "verdicts": rep.verdicts,
        "C_needed": rep.C_needed,
        "fmt_spread": {str(k): v for k, v in rep.fmt_spread.items()},
        "fmt_bound": {str(k): v for k, v in rep.fmt_bounds.items()},
        "min_residual": float(rep.residual.min()),
    }
    if len(radii) >= 2:
        summary["T_slope"] = rep.table.slope()
    _summary(summary)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


# ---------------------------------------------------------------- parser


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default="-", help="output file ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="abclab", description="abc triples, Vojta-type height checks and their analogues")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("triples", help="enumerate coprime triples a + b + c = 0 with a + b <= bound")
    p.add_argument("--bound", type=_bound, required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--min-quality", type=float, default=0.0)
    p.add_argument("--jobs", type=_positive_int, default=1)
    _add_output(p)
    p.set_defaults(func=run_triples)

    p = sub.add_parser("verify", help="check the exact inequalities on the points of Gamma_n")
    p.add_argument("--bound", type=_bound, required=True)
    p.add_argument("--n", type=_int_list, default=[2, 3, 5])
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--violations-only", action="store_true", help="emit only failing rows")
    p.add_argument("--inject-fault", action="store_true", help="self-test: corrupt one sign per point")
    _add_output(p)
    p.set_defaults(func=run_verify)

    p = sub.add_parser("power", help="m-th power decomposition chain checks")
    p.add_argument("--bound", type=_bound, required=True)
    p.add_argument("--m", type=_int_list, default=[5])
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--violations-only", action="store_true")
    _add_output(p)
    p.set_defaults(func=run_power)

    p = sub.add_parser("pell", help="solutions of x^2 - d y^2 = +-4 and their square parts")
    p.add_argument("--d", type=_int_list, required=True)
    p.add_argument("--count", type=_positive_int, default=5)
    p.add_argument("--method", choices=("cf", "search"), default="cf")
    p.add_argument("--y-max", type=_positive_int, default=10**6)
    _add_output(p)
    p.set_defaults(func=run_pell)

    p = sub.add_parser("ms", help="Mason-Stothers check for polynomial triples")
    p.add_argument("--a", help="coefficients of a, constant term first")
    p.add_argument("--b", help="coefficients of b; c = -a - b")
    p.add_argument("--random", type=int, default=0, metavar="COUNT")
    p.add_argument("--maxdeg", type=_positive_int, default=20)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(func=run_ms)

    p = sub.add_parser("nev", help="Nevanlinna table for a rational function")
    p.add_argument("--num", help="numerator coefficients, constant term first")
    p.add_argument("--den", default="1", help="denominator coefficients")
    p.add_argument("--f", help="shorthand '(c0,c1,...)/(d0,d1,...)'")
    p.add_argument("--rmin", type=float, default=100.0)
    p.add_argument("--rmax", type=float, default=1e4)
    p.add_argument("--points", type=_positive_int, default=9)
    p.add_argument("--nodes", type=_positive_int, default=2048)
    p.add_argument("--logderiv-tol", type=float, default=0.05)
    p.add_argument("--exceptional-fraction", type=float, default=0.0)
    _add_output(p)
    p.set_defaults(func=run_nev)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericError as exc:
        print(f"abclab: numeric failure: {exc} (best residual {exc.best_residual})", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, DomainError) as exc:
        print(f"abclab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
