"""Command-line front end: ``ovalg <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import macaulay
from .errors import BudgetExceeded, IdentityViolation, OvalgError
from .ffield import FieldSpec
from .invariants import analyze, top_system
from .macaulay import first_fall_degree
from .series import (TruncatedSeries, bracket, expand, format_series, predict_oil_ring, predict_ov_hfg, predict_ov_semiregular,
                     predict_semiregular_char0, predict_semiregular_fq)
from .sysgen import gen_full, gen_mixed, gen_ov, is_ov, load_system, save_system

EXIT_OK, EXIT_USAGE, EXIT_IDENTITY, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def default_seed() -> int:
    env = os.environ.get("OVALG_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise UsageError(f"OVALG_SEED must be an integer, got {env!r}") from exc


# ---------------------------------------------------------------- output

def _flatten(data, prefix=""):
    if isinstance(data, dict):
        for k, v in data.items():
            yield from _flatten(v, f"{prefix}{k}.")
        return
    yield prefix.rstrip("."), data


def emit(data: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
        return
    rows = [(k, json.dumps(v) if isinstance(v, (list, tuple)) else v) for k, v in _flatten(data)]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        out.write(buf.getvalue())
        return
    width = max((len(k) for k, _ in rows), default=0)
    for k, v in rows:
        out.write(f"{k.ljust(width)}  {v}\n")


def emit_series(name: str, coeffs, fmt: str, extra: dict | None = None, out=None) -> None:
    out = out or sys.stdout
    coeffs = list(coeffs.coeffs) if isinstance(coeffs, TruncatedSeries) else list(coeffs)
    if fmt == "csv":
        out.write("d,value\n")
        for d, c in enumerate(coeffs):
            out.write(f"{d},{c}\n")
        return
    data = {name: coeffs}
    data.update(extra or {})
    if fmt == "json":
        emit(data, fmt, out)
        return
    out.write(f"{name}: {format_series(TruncatedSeries(coeffs))}\n")
    for k, v in (extra or {}).items():
        out.write(f"{k}: {v}\n")


# ---------------------------------------------------------------- subcommands

def _field(args) -> FieldSpec:
    if args.char0:
        if args.field_equations:
            raise UsageError("--char0 cannot be combined with --field-equations")
        return FieldSpec.char0(args.q) if args.q else FieldSpec.char0()
    if not args.q:
        raise UsageError("give --q or --char0")
    return FieldSpec(args.q, args.field_equations)


def cmd_gen(args) -> int:
    F = _field(args)
    seed = args.seed if args.seed is not None else default_seed()
    hom = args.homogeneous
    if args.kind == "ov":
        _need(args, "n", "v", "m")
        S = gen_ov(args.n, args.v, args.m, F, hom, seed)
    elif args.kind == "mixed":
        _need(args, "n", "v", "e", "u")
        if args.m is not None and args.m != args.e + args.u:
            raise UsageError("for mixed systems m must equal e + u")
        S = gen_mixed(args.n, args.v, args.e, args.u, F, hom, seed)
    else:
        _need(args, "n", "m")
        S = gen_full(args.n, args.m, F, hom, seed)
    if args.out:
        save_system(S, args.out, "json" if args.out.endswith(".json") else "text")
        target = sys.stdout
    else:
        sys.stdout.write(S.to_text())
        target = sys.stderr
    v = is_ov(S) if S.homogeneous else None
    emit({"kind": S.kind_label(), "n": S.n, "m": S.m, "field": F.describe(), "quotient": S.ring.quotient,
          "homogeneous": S.homogeneous, "seed": seed, "ov_prefix": v}, args.format, target)
    return EXIT_OK


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")


def cmd_analyze(args) -> int:
    S = load_system(args.infile)
    checks = [c for item in (args.check or []) for c in item.split(",") if c]
    bad = set(checks) - {"ov", "mixed", "hfq", "chain", "trv2", "delta"}
    if bad:
        raise UsageError(f"unknown checks {sorted(bad)}")
    rep = analyze(S, args.max_degree, args.d_max, checks)
    data = rep.to_dict()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")
    emit(data, args.format)
    return EXIT_IDENTITY if rep.failed else EXIT_OK


def cmd_hilbert(args) -> int:
    S = load_system(args.infile)
    tops = top_system(S)
    if tops:
        h = macaulay.empirical_hilbert(tops, args.max_degree, method=args.method)
    else:
        ring = S.ring.with_quotient("graded") if S.ring.quotient == "affine" else S.ring
        h = [ring.component_dim(d) for d in range(args.max_degree + 1)]
    emit_series("hilbert", h, args.format)
    return EXIT_OK


def cmd_predict(args) -> int:
    D = args.max_degree
    extra = {}
    if args.what == "semiregular":
        _need(args, "n", "m")
        if args.q and not args.char0:
            gf = predict_semiregular_fq(args.n, args.m, args.q)
        else:
            gf = predict_semiregular_char0(args.n, args.m)
        s = expand(gf, D)
        if args.bracket:
            s = bracket(s)
        extra["generating_function"] = gf.label
    elif args.what == "ov":
        _need(args, "n", "v", "m")
        s, branch = predict_ov_semiregular(args.n, args.v, args.m, D)
        extra["branch"] = branch
    elif args.what == "hfg":
        _need(args, "n", "v", "m")
        s = predict_ov_hfg(args.n, args.v, args.m, D)
    else:
        _need(args, "n", "v")
        F = FieldSpec(args.q, True) if args.q and not args.char0 else None
        s = expand(predict_oil_ring(args.n, args.v, F), D)
    emit_series(args.what, s, args.format, extra)
    return EXIT_OK


def cmd_macaulay(args) -> int:
    S = load_system(args.infile)
    M = macaulay.build_macaulay(S, args.degree, args.mode)
    if args.dump_matrix:
        M.write_csv(args.dump_matrix)
    emit({"mode": args.mode, "degree": args.degree, "rows": M.shape[0], "columns": M.shape[1],
          "rank": M.rank()}, args.format)
    return EXIT_OK


def cmd_solve_degree(args) -> int:
    S = load_system(args.infile)
    data = {"solving_degree": macaulay.solving_degree(S, args.d_max)}
    if args.fall:
        data["first_fall_degree"] = first_fall_degree(S, args.d_max)
    emit(data, args.format)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .reproduce import run_all
    which = [int(x) for item in (args.only or []) for x in item.split(",") if x] or None
    rows = run_all(which, quick=args.quick, jobs=args.jobs)
    if args.format == "json":
        emit({"rows": [r.to_dict() for r in rows], "passed": all(r.passed for r in rows)}, "json")
    elif args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["criterion", "claim", "expected", "computed", "verdict", "note"])
        for r in rows:
            w.writerow([r.criterion, r.claim, r.expected, r.computed, "PASS" if r.passed else "FAIL", r.note])
    else:
        for r in rows:
            print(r.line())
        print(f"{sum(r.passed for r in rows)}/{len(rows)} rows pass")
    return EXIT_OK if all(r.passed for r in rows) else EXIT_IDENTITY


# ---------------------------------------------------------------- parser

def _globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("json", "csv", "text"), default=d if suppress else "text")
    p.add_argument("--jobs", type=int, default=d if suppress else 1, help="parallel workers")
    p.add_argument("--max-entries", type=int, default=d, help="matrix budget (rows x columns)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ovalg", description="Hilbert series and regularity invariants of quadratic systems.")
    _globals(parser, False)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        _globals(p, True)
        p.set_defaults(func=fn)
        return p

    def field_args(p):
        p.add_argument("--q", type=int, help="prime field size")
        p.add_argument("--char0", action="store_true", help="simulate characteristic 0 modulo a large prime")
        p.add_argument("--field-equations", action="store_true", help="impose x^q = x")

    g = add("gen", cmd_gen, "generate a random system")
    g.add_argument("--kind", choices=("ov", "mixed", "full"), required=True)
    for name in ("n", "v", "m", "e", "u"):
        g.add_argument(f"--{name}", type=int)
    field_args(g)
    hom = g.add_mutually_exclusive_group()
    hom.add_argument("--homogeneous", dest="homogeneous", action="store_true", default=True)
    hom.add_argument("--affine", dest="homogeneous", action="store_false", help="add linear and constant terms")
    g.add_argument("--seed", type=int)
    g.add_argument("--out")

    for name, help_ in (("analyze", "full invariant report"), ("invariants", "invariant report with checks")):
        a = add(name, cmd_analyze, help_)
        a.add_argument("--in", dest="infile", required=True)
        a.add_argument("--max-degree", type=int, default=None)
        a.add_argument("--d-max", type=int, default=6)
        a.add_argument("--check", action="append", help="ov, mixed, hfq, chain, trv2, delta (repeatable)")
        a.add_argument("--report", help="write the JSON report here")

    h = add("hilbert", cmd_hilbert, "empirical Hilbert series")
    h.add_argument("--in", dest="infile", required=True)
    h.add_argument("--max-degree", type=int, default=8)
    h.add_argument("--method", choices=("auto", "macaulay", "extension"), default="auto")

    p = add("predict", cmd_predict, "closed-form series")
    p.add_argument("what", choices=("semiregular", "ov", "hfg", "oil"))
    for name in ("n", "v", "m"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--char0", action="store_true")
    p.add_argument("--bracket", action="store_true", help="truncate at the first non-positive coefficient")
    p.add_argument("--max-degree", type=int, default=10)

    mm = add("macaulay", cmd_macaulay, "build a Macaulay matrix")
    mm.add_argument("--in", dest="infile", required=True)
    mm.add_argument("--degree", type=int, required=True)
    mm.add_argument("--mode", choices=("hom", "aff"), default="hom")
    mm.add_argument("--dump-matrix", help="CSV output path")

    s = add("solve-degree", cmd_solve_degree, "solving degree by Macaulay elimination")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--d-max", type=int, default=6)
    s.add_argument("--fall", action="store_true", help="also report the first fall degree")

    r = add("reproduce-paper", cmd_reproduce, "run every worked example and claim")
    r.add_argument("--quick", action="store_true", help="fewer seeds")
    r.add_argument("--only", action="append", help="criterion numbers, comma separated")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max_entries", None):
        macaulay.set_max_entries(args.max_entries)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ovalg: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"ovalg: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except IdentityViolation as exc:
        print(f"ovalg: identity failed: {exc}", file=sys.stderr)
        return EXIT_IDENTITY
    except (OvalgError, OSError) as exc:
        print(f"ovalg: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
