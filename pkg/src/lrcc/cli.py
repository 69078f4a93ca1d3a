"""Command-line interface: gen, profile, encode, corrupt, repair, simulate, verify."""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import serialize as ser
from .budget import BudgetExceeded, resolve_budget
from .convcode import (
    ConvCode,
    L_parameter,
    SumRankLayout,
    column_distance_rank,
    distance_profile,
    encode_stream,
    is_j_MDS,
    is_j_MSRD,
    singleton_column_bound,
)
from .lrcc import (
    LrccCode,
    attainment_check,
    build_construction1,
    lrcc_bound,
    partial_L,
    partial_mds_verdict,
    verify_locality,
)
from .msrd import MsrdParams, all_layouts, build_msrd_outer, empirical_min_m
from .polymat import invariant_factors
from .repair import (
    RepairError,
    RepairStall,
    WindowPolicy,
    adaptive_repair,
    inject_erasures,
    tail_biting_encode,
    tail_biting_repair,
    clean_anchors,
)
from .serialize import SchemaError

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_INPUT = 0, 2, 3, 4


class InputError(Exception):
    pass


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _load(path: str):
    try:
        return ser.load_code(path)
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _code(C) -> ConvCode:
    return C.code if isinstance(C, LrccCode) else C


# --- gen -------------------------------------------------------------------------

def cmd_gen(args) -> int:
    N = args.g * args.r
    m = args.m
    if args.empirical_m is not None:
        m = empirical_min_m(N, args.k, args.delta, args.q, args.empirical_m, budget=args.budget)
        if m is None:
            print(f"no m <= {args.empirical_m} passed verification", file=sys.stderr)
            return EXIT_FAIL
    if m is None:
        raise InputError("--m or --empirical-m is required")
    P = MsrdParams(N, args.k, args.delta, args.q, m)
    outer, manifest = build_msrd_outer(P, override_m=args.override_m or args.empirical_m is not None)
    manifest["verified_up_to_j"] = P.L if args.empirical_m is not None else None
    C = outer if args.pd == 1 else build_construction1(outer, args.r, args.pd, args.g)
    _write(args.out, ser.dumps(ser.code_to_json(C, manifest)))
    return EXIT_OK


# --- profile ---------------------------------------------------------------------

def cmd_profile(args) -> int:
    if args.bounds_only:
        n, k, r, pd = args.n, args.k, args.r, args.pd
        if None in (n, k, r, pd):
            raise InputError("--bounds-only needs --n --k --r --pd")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "bound_classical", "bound_locality", "correctable"])
        for j in range(args.j_max + 1):
            b = lrcc_bound(n, k, r, pd, j, "ceiling")
            w.writerow([j, singleton_column_bound(n, k, j), b, b - 1])
        _write(args.out, buf.getvalue())
        return EXIT_OK
    if not args.spec:
        raise InputError("a code spec is required unless --bounds-only")
    C, _ = _load(args.spec)
    prof = distance_profile(_code(C), args.j_max, args.method, args.budget)
    loc = None
    if isinstance(C, LrccCode):
        loc = {"r": C.structure.r, "pd": C.structure.pd}
    _write(args.out, prof.to_csv(loc))
    return EXIT_OK if prof.is_exact else EXIT_BUDGET


# --- encode / corrupt / repair ---------------------------------------------------

def cmd_encode(args) -> int:
    C, _ = _load(args.spec)
    code = _code(C)
    if args.messages:
        u = ser.stream_from_text(_read(args.messages), code.k, code.field.order)
    else:
        rng = random.Random(args.seed)
        u = [[rng.randrange(code.field.order) for _ in range(code.k)] for _ in range(args.T)]
    try:
        v = tail_biting_encode(code, u) if args.tail_biting else encode_stream(code, u)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _write(args.out, ser.stream_to_text(v))
    return EXIT_OK


def cmd_corrupt(args) -> int:
    blocks = ser.stream_from_text(_read(args.stream))
    if args.pattern:
        pattern = ser.pattern_from_json(_read(args.pattern))
    else:
        rng = random.Random(args.seed)
        pattern = [(t, c) for t, b in enumerate(blocks) for c in range(len(b))
                   if rng.random() < args.rate]
    try:
        s = inject_erasures(blocks, pattern)
    except IndexError as exc:
        raise InputError(str(exc)) from exc
    _write(args.out, ser.stream_to_text(s.blocks))
    if args.pattern_out:
        _write(args.pattern_out, ser.pattern_to_json(pattern))
    return EXIT_OK


def cmd_repair(args) -> int:
    C, _ = _load(args.spec)
    code = _code(C)
    blocks = ser.stream_from_text(_read(args.stream), code.n, code.field.order)
    s = inject_erasures(blocks, [])
    policy = WindowPolicy(j_max=args.j_max, stall=args.stall, view=args.view)
    try:
        if args.tail_biting:
            anchor = args.anchor
            if anchor is None:
                anchors = clean_anchors(code, s)
                if not anchors:
                    print("no erasure-free anchor run", file=sys.stderr)
                    return EXIT_FAIL
                anchor = anchors[0]
            out, rep = tail_biting_repair(C, s, anchor, policy)
        else:
            out, rep = adaptive_repair(C, s, policy)
    except RepairStall as exc:
        print(f"repair stalled: first stalled t={exc.t}; {exc}", file=sys.stderr)
        return EXIT_FAIL
    except RepairError as exc:
        print(f"repair failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(args.out, ser.stream_to_text(out.blocks))
    if args.report:
        _write(args.report, ser.dumps(rep.to_json()))
    if args.report_csv:
        _write(args.report_csv, rep.to_csv())
    if rep.unrecovered:
        print(f"{len(rep.unrecovered)} symbols unrecovered; first at t={rep.unrecovered[0][0]}",
              file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# --- simulate --------------------------------------------------------------------

def _trial(job) -> list:
    spec_json, rate, trial, seed, T, j_max = job
    C = ser.code_from_json(spec_json)
    code = _code(C)
    rng = random.Random(f"{seed}:{trial}:{rate}")
    u = [[rng.randrange(code.field.order) for _ in range(code.k)] for _ in range(T)]
    v = encode_stream(code, u)
    pattern = [(t, c) for t in range(T) for c in range(code.n) if rng.random() < rate]
    s = inject_erasures(v, pattern)
    out, rep = adaptive_repair(C, s, WindowPolicy(j_max=j_max, stall="skip"))
    recovered = sum(1 for t, c in pattern if out.blocks[t][c] == v[t][c])
    frac = recovered / len(pattern) if pattern else 1.0
    tot = rep.totals
    return [trial, rate, len(pattern), f"{frac:.6f}", tot["local_repairs"], tot["window_repairs"],
            tot["downloaded_symbols"], str(recovered == len(pattern)).lower()]


def cmd_simulate(args) -> int:
    _, spec_json = _load(args.spec)
    jobs = [(spec_json, rate, t, args.seed, args.T, args.j_max)
            for rate in args.rate for t in range(args.trials)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_trial, jobs, chunksize=max(1, len(jobs) // (4 * args.jobs))))
    else:
        rows = [_trial(j) for j in jobs]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["trial", "rate", "erasures", "repaired_fraction", "local_repairs",
                "window_repairs", "symbols_read", "success"])
    w.writerows(rows)
    _write(args.out, buf.getvalue())
    return EXIT_OK


# --- verify ----------------------------------------------------------------------

def _verify(C, level: str, j: int | None, budget) -> dict:
    code = _code(C)
    if not code.basic:
        return {"predicate": "non-catastrophic", "result": False,
                "witness": {"invariant_factors": [list(f) for f in invariant_factors(code.G)]}}
    if level == "locality":
        if not isinstance(C, LrccCode):
            raise InputError("spec has no local structure")
        return {"predicate": "locality", "result": verify_locality(code, C.structure)}
    if level == "mds":
        jj = j if j is not None else L_parameter(code.degree, code.k, code.n - code.k)
        d, supp = column_distance_rank(code, jj, budget, witness=True)
        ok = d == singleton_column_bound(code.n, code.k, jj)
        out = {"predicate": "j-MDS", "result": ok, "details": {"j": jj, "distance": d}}
        if not ok:
            out["witness"] = {"j": jj, "pattern": [[s // code.n, s % code.n] for s in supp]}
        return out
    if level == "msrd":
        jj = j if j is not None else L_parameter(code.degree, code.k, code.n - code.k)
        res = {f"{lay.g}x{lay.r}": is_j_MSRD(code, jj, lay, budget=budget)
               for lay in all_layouts(code.n)}
        return {"predicate": "j-MSRD", "result": all(res.values()),
                "details": {"j": jj, "layouts": res}}
    if level in ("partial-mds", "partial-mdp"):
        if not isinstance(C, LrccCode):
            raise InputError("spec has no local structure")
        jj = partial_L(C) if (level == "partial-mdp" or j is None) else j
        return partial_mds_verdict(C, jj, budget, all_windows=True).to_json()
    if level == "attainment":
        if not isinstance(C, LrccCode):
            raise InputError("spec has no local structure")
        jj = partial_L(C) if j is None else j
        res = {h: attainment_check(C, h, budget=budget) for h in range(jj + 1)}
        return {"predicate": "attainment", "result": all(res.values()),
                "details": {str(h): v for h, v in res.items()}}
    raise InputError(f"unknown level {level!r}")


def cmd_verify(args) -> int:
    C, _ = _load(args.spec)
    try:
        rep = _verify(C, args.level, args.j, args.budget)
    except BudgetExceeded as exc:
        rep = {"predicate": args.level, "result": None, "inconclusive": str(exc)}
        _write(args.out, ser.dumps({"v": 1, **rep}))
        return EXIT_BUDGET
    _write(args.out, ser.dumps({"v": 1, **rep}))
    return EXIT_OK if rep["result"] else EXIT_FAIL


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lrcc", description=__doc__)
    p.add_argument("--budget", type=int, default=None,
                   help="work budget for exhaustive oracles (default: $LRCC_BUDGET)")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="build an outer MSRD code and the local layer")
    g.add_argument("--g", type=int, required=True)
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--pd", type=int, required=True, help="local distance")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--delta", type=int, required=True)
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--empirical-m", type=int, metavar="M_MAX")
    g.add_argument("--override-m", action="store_true", help="allow m below the guaranteed bound")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    pr = sub.add_parser("profile", help="column distance table with bounds")
    pr.add_argument("spec", nargs="?")
    pr.add_argument("--j-max", type=int, default=2)
    pr.add_argument("--method", choices=["auto", "rank-pattern", "brute-force"], default="auto")
    pr.add_argument("--bounds-only", action="store_true")
    for name in ("n", "k", "r", "pd"):
        pr.add_argument(f"--{name}", type=int)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_profile)

    e = sub.add_parser("encode", help="encode messages into a block stream")
    e.add_argument("spec")
    e.add_argument("--messages")
    e.add_argument("--T", type=int, default=8)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--tail-biting", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_encode)

    c = sub.add_parser("corrupt", help="mark erasures in a stream")
    c.add_argument("stream")
    c.add_argument("--pattern")
    c.add_argument("--rate", type=float, default=0.0)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--pattern-out")
    c.add_argument("--out")
    c.set_defaults(func=cmd_corrupt)

    r = sub.add_parser("repair", help="local + sliding-window repair")
    r.add_argument("spec")
    r.add_argument("stream")
    r.add_argument("--j-max", type=int, default=2)
    r.add_argument("--stall", choices=["error", "skip"], default="error")
    r.add_argument("--view", choices=["full", "restricted"], default="full")
    r.add_argument("--tail-biting", action="store_true")
    r.add_argument("--anchor", type=int)
    r.add_argument("--report")
    r.add_argument("--report-csv")
    r.add_argument("--out")
    r.set_defaults(func=cmd_repair)

    s = sub.add_parser("simulate", help="Monte-Carlo erasure trials")
    s.add_argument("spec")
    s.add_argument("--rate", type=float, nargs="+", default=[0.1])
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--T", type=int, default=16)
    s.add_argument("--j-max", type=int, default=2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="check a distance predicate")
    v.add_argument("spec")
    v.add_argument("--level", default="partial-mdp",
                   choices=["locality", "mds", "msrd", "partial-mds", "partial-mdp", "attainment"])
    v.add_argument("--j", type=int)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors are input errors, not verification failures
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    args.budget = resolve_budget(args.budget)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, SchemaError, json.JSONDecodeError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
