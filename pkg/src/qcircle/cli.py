"""qcircle command line.

Exit codes: 0 success, 2 counterexample found, 3 precondition violated, 4 I/O
or corrupted checkpoint.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, InvalidOperation
from pathlib import Path

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 2
EXIT_PRECONDITION = 3
EXIT_IO = 4
SCHEMA = 1
CHECKPOINT_ENV = "QCIRCLE_CHECKPOINT_DIR"
DEFAULT_CHECKPOINT_NAME = "nonneg-ledger.json"
COMPARE_MAX_N = 200_000

COLUMN_HELP = """\
CSV columns
  coeffs:   n,g_n
  compare:  n,g_exact,g_asym,rel_err,g1_rel_err,main1_log,main2_log,e_g1_log,e_g2_log,g3_log
  nearpole: pole,X,Y,approx_re,approx_im,truth_re,truth_im,abs_err,bound
  farey:    h,k
"""


class Precondition(Exception):
    pass


def positive_int(text: str) -> int:
    """Integer argument that also accepts forms like 2.4e14."""
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value != value.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


# ---- output helpers


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(payload: dict) -> str:
    return json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=False) + "\n"


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row[c] for c in columns])
    return buf.getvalue()


def _emit_rows(args, columns, rows, extra=None) -> None:
    if args.format == "csv":
        _emit(args, _csv_text(columns, rows))
    else:
        _emit(args, _json_text({**(extra or {}), "rows": rows}))


# ---- subcommands


def cmd_coeffs(args) -> int:
    from .series import g_series

    if args.N < 0:
        raise Precondition(f"N must be >= 0, got {args.N}")
    series = g_series(args.N)
    if args.format == "qser1":
        if not args.out:
            raise Precondition("--format qser1 needs --out")
        with open(args.out, "wb") as fh:
            fh.write(series.to_bytes())
    elif args.format == "csv":
        _emit(args, series.to_csv())
    else:
        _emit(args, _json_text({"N": args.N, "coefficients": list(series)}))
    return EXIT_OK


def checkpoint_path(args):
    """--checkpoint, relocated into $QCIRCLE_CHECKPOINT_DIR when that is set."""
    env_dir = os.environ.get(CHECKPOINT_ENV)
    if env_dir:
        name = Path(args.checkpoint).name if args.checkpoint else DEFAULT_CHECKPOINT_NAME
        return Path(env_dir) / name
    return Path(args.checkpoint) if args.checkpoint else None


def cmd_verify_nonneg(args) -> int:
    from .sweep import verify_nonneg

    if args.N < 0:
        raise Precondition(f"N must be >= 0, got {args.N}")
    ledger = verify_nonneg(args.N, checkpoint=checkpoint_path(args), resume=args.resume, window=args.window)
    payload = ledger.to_json()
    if args.format == "csv":
        rows = [{"upto": e["upto"], "min": e["min"], "argmin": e["argmin"], "digest": e["digest"]} for e in ledger.entries]
        _emit(args, _csv_text(["upto", "min", "argmin", "digest"], rows))
    else:
        payload.pop("schema")
        _emit(args, _json_text(payload))
    return EXIT_COUNTEREXAMPLE if ledger.counterexample is not None else EXIT_OK


def compare_rows(ns) -> list[dict]:
    from .asymptotic import error_budget, g1_main, g2_main
    from .series import g_array

    exact = g_array(max(ns))
    rows = []
    for n in ns:
        g = int(exact[n])
        g1 = float(g1_main(n))
        asym = g1 + float(g2_main(n).value)
        budget = error_budget(n).as_dict()
        rows.append(
            {
                "n": n,
                "g_exact": g,
                "g_asym": asym,
                "rel_err": abs(asym / g - 1) if g else None,
                "g1_rel_err": abs(g1 / g - 1) if g else None,
                **{k: budget[k] for k in ("main1_log", "main2_log", "e_g1_log", "e_g2_log", "g3_log")},
            }
        )
    return rows


def cmd_compare(args) -> int:
    ns = args.n
    if any(n < 1 for n in ns):
        raise Precondition("every n must be >= 1")
    if max(ns) > args.max_n:
        raise Precondition(f"n = {max(ns)} exceeds the exact-computation budget {args.max_n}")
    rows = compare_rows(ns)
    columns = ["n", "g_exact", "g_asym", "rel_err", "g1_rel_err", "main1_log", "main2_log", "e_g1_log", "e_g2_log", "g3_log"]
    _emit_rows(args, columns, rows)
    return EXIT_OK


def cmd_certify(args) -> int:
    from .asymptotic import find_certified_threshold, positivity_certificate, x_of_n

    if args.n < 1:
        raise Precondition(f"n must be >= 1, got {args.n}")
    cert = positivity_certificate(args.n)
    payload = cert.budget.as_dict()
    payload["X"] = x_of_n(args.n)
    if not cert:
        payload["reason"] = cert.reason
    if args.threshold:
        lo, hi = args.threshold
        try:
            payload["threshold"] = find_certified_threshold(lo, hi)
        except ValueError as exc:
            raise Precondition(str(exc))
    _emit(args, _json_text(payload))
    return EXIT_OK


def cmd_mainterm(args) -> int:
    from .farey import make_tau
    from .mainterm import ArcParams, case_classify, error_bound_G, main_term, main_term_G, re_mainterm_upper_bound

    try:
        arc = ArcParams(args.h, args.k)
        tau = make_tau(args.X, args.Y, arc)
        single = main_term(args.a, args.M, arc, tau)
    except ValueError as exc:
        raise Precondition(str(exc))
    combined = main_term_G(arc, tau)
    case = case_classify(args.k)
    payload = {
        "a": args.a,
        "M": args.M,
        "h": args.h,
        "k": args.k,
        "X": args.X,
        "Y": args.Y,
        "N": tau.N,
        "main_term": {"re": single.real, "im": single.imag},
        "main_term_G": {"re": combined.real, "im": combined.imag},
        "case": int(case),
        "re_main_term_G_upper_bound": re_mainterm_upper_bound(case, args.k, args.X),
        "error_bound_G": error_bound_G(case, args.X),
    }
    _emit(args, _json_text(payload))
    return EXIT_OK


def cmd_farey(args) -> int:
    from .farey import covering_check, farey_sequence

    if args.order < 1:
        raise Precondition(f"order must be >= 1, got {args.order}")
    fs = farey_sequence(args.order)
    report = covering_check(args.order)
    rows = [{"h": a.h, "k": a.k} for a in fs]
    if args.format == "csv":
        _emit(args, _csv_text(["h", "k"], rows))
    else:
        payload = {
            "order": args.order,
            "count": len(fs),
            "fractions": [f"{a.h}/{a.k}" for a in fs],
            "covered": report.covered,
            "mediant_bounds_ok": report.mediant_bounds_ok,
        }
        _emit(args, _json_text(payload))
    return EXIT_OK


def _nearpole_task(task):
    from .nearpole import near_pole_row

    X, Y, minus, tol = task
    return near_pole_row(X, Y, minus, tol)


def _map(fn, tasks, jobs):
    if jobs <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def cmd_nearpole(args) -> int:
    tasks = []
    for X in args.x_grid:
        if X < 16:
            raise Precondition(f"X must be >= 16, got {X}")
        for frac in args.y_fractions:
            if abs(frac) > 1:
                raise Precondition(f"Y fraction must lie in [-1, 1], got {frac}")
            for minus in (False, True):
                tasks.append((X, frac / (2 * math.pi * X), minus, args.tol))
    rows = _map(_nearpole_task, tasks, args.jobs)
    columns = ["pole", "X", "Y", "approx_re", "approx_im", "truth_re", "truth_im", "abs_err", "bound"]
    _emit_rows(args, columns, rows)
    return EXIT_OK if all(r["abs_err"] <= r["bound"] for r in rows) else EXIT_COUNTEREXAMPLE


def cmd_identities(args) -> int:
    from .identities import run_suite

    result = run_suite(k_max=args.k_max, mult_k_max=args.mult_k_max, tol=args.tol)
    _emit(args, _json_text(result))
    return EXIT_OK if result["passed"] else EXIT_COUNTEREXAMPLE


# ---- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10, help="numerical tolerance (default 1e-10)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", dest="format_given", choices=["csv", "json", "qser1"], default=None)
    common.add_argument("--checkpoint", help=f"ledger path (${CHECKPOINT_ENV} relocates it)")
    common.add_argument("--resume", action="store_true", help="continue from --checkpoint")

    parser = argparse.ArgumentParser(
        prog="qcircle",
        description="Exact coefficients and circle-method bounds for 1/(q, -q^3; q^4)_inf.",
        epilog=COLUMN_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(
            name, parents=[common], help=help_text, epilog=COLUMN_HELP,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        p.set_defaults(func=fn)
        return p

    p = add("coeffs", cmd_coeffs, "write g(0..N)")
    p.add_argument("N", type=positive_int)
    p = add("verify-nonneg", cmd_verify_nonneg, "check g(0..N) >= 0 with checkpoints")
    p.add_argument("N", type=positive_int)
    p.add_argument("--window", type=int, default=10_000, help="checkpoint interval (default 10000)")
    p = add("compare", cmd_compare, "exact g(n) against the two Bessel terms")
    p.add_argument("n", type=positive_int, nargs="+")
    p.add_argument("--max-n", type=positive_int, default=COMPARE_MAX_N)
    p = add("certify", cmd_certify, "positivity certificate for one n")
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--threshold", type=positive_int, nargs=2, metavar=("LO", "HI"),
                   help="also bisect for the smallest certified n in [LO, HI]")
    p = add("mainterm", cmd_mainterm, "main terms at h/k for tau = 1/X + 2 pi i Y")
    for name in ("a", "M", "h", "k"):
        p.add_argument(name, type=int)
    p.add_argument("X", type=float)
    p.add_argument("Y", type=float)
    p = add("farey", cmd_farey, "Farey fractions of order N and the covering check")
    p.add_argument("--order", type=int, required=True)
    p = add("nearpole", cmd_nearpole, "expansions at q = +-1 against the exact log G")
    p.add_argument("--x-grid", type=float_list, default=[16, 50, 100, 500, 1000])
    p.add_argument("--y-fractions", type=float_list, default=[0, 0.5, -0.5, 1, -1],
                   help="Y as multiples of 1/(2 pi X)")
    p = add("identities", cmd_identities, "Hurwitz zeta / digamma finite-sum identity suite")
    p.add_argument("--k-max", type=int, default=100)
    p.add_argument("--mult-k-max", type=int, default=60)
    return parser


def main(argv=None) -> int:
    from .series import PrecisionError
    from .sweep import CorruptCheckpoint

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PRECONDITION
    defaults = {"coeffs": "csv", "compare": "csv", "nearpole": "csv"}
    args.format = args.format_given or defaults.get(args.command, "json")
    if args.format == "qser1" and args.command != "coeffs":
        parser.print_usage(sys.stderr)
        print("qcircle: --format qser1 only applies to coeffs", file=sys.stderr)
        return EXIT_PRECONDITION
    if args.tol <= 0 or args.jobs < 1:
        print("qcircle: --tol must be positive and --jobs >= 1", file=sys.stderr)
        return EXIT_PRECONDITION
    try:
        return args.func(args)
    except (Precondition, PrecisionError) as exc:
        print(f"qcircle: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CorruptCheckpoint as exc:
        print(f"qcircle: corrupted checkpoint: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"qcircle: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
