"""Command-line front end.

Every subcommand writes CSV (default) or JSON to stdout or ``--out``.  CSV
output has the column names on the first line and ends with ``#`` comment
lines carrying the schema id, library version and the full parameter echo.
Exit codes: 0 success, 1 invariant failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__, checks
from .chain import angle_histogram, radius_histogram, simulate, uniform_word_law
from .disk import angle, radius
from .estimates import (
    bound_scan,
    dsloc_from_rho,
    png_on_circle,
    rho_cesaro_all,
    rho_direct,
    rho_shifted,
)
from .gasket import (
    DepthError,
    cell_mass,
    cell_ratio,
    masses_at_depth,
    parse_word,
    ratios_at_depth,
    word_str,
    words_at_depth,
)

MEASURE_CAP = 12
RHO_CAP = 18
BOUNDS_CAP = 8
SIG_DIGITS = 7


class UsageError(Exception):
    pass


def _fmt(x, full: bool) -> str:
    if isinstance(x, (int, np.integer)) or isinstance(x, str):
        return str(x)
    x = float(x)
    if full:
        return repr(x)
    return format(x, f"#.{SIG_DIGITS}g")


def _json_value(x, full: bool):
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, str):
        return x
    x = float(x)
    return x if full else float(format(x, f".{SIG_DIGITS}g"))


def emit(schema: str, params: dict, columns: list[str], rows: list[list], fmt: str, full: bool, out) -> None:
    if fmt == "json":
        doc = {
            "schema": schema,
            "version": __version__,
            "params": params,
            "columns": columns,
            "rows": [{c: _json_value(v, full) for c, v in zip(columns, row)} for row in rows],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v, full) for v in row])
    buf.write(f"# schema={schema} version={__version__}\n")
    buf.write("# params=" + json.dumps(params, sort_keys=True) + "\n")
    out.write(buf.getvalue())


def _params(args: argparse.Namespace) -> dict:
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# subcommands -----------------------------------------------------------------

def cmd_measure(args) -> tuple[str, list[str], list[list], int]:
    cols = ["word", "mass", "c1", "c2", "c3", "r", "theta"]
    if args.word is not None:
        try:
            w = parse_word(args.word)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        c = cell_ratio(w)
        rows = [[word_str(w) or "-", cell_mass(w), *c, radius(c), angle(c)]]
    else:
        m = args.depth
        if m < 0 or m > MEASURE_CAP:
            raise UsageError(f"--depth must lie in [0, {MEASURE_CAP}]")
        masses = masses_at_depth(m)
        ratios = ratios_at_depth(m)
        r, th = np.atleast_1d(radius(ratios)), np.atleast_1d(angle(ratios))
        rows = [[word_str(w) or "-", masses[i], *ratios[i], r[i], th[i]] for i, w in enumerate(words_at_depth(m))]
    total = math.fsum(row[1] for row in rows)
    rows.append(["total", total, "", "", "", "", ""])
    return "kusuoka.measure/1", cols, rows, 0


def cmd_rho(args):
    if args.m < 1 or args.m > RHO_CAP:
        raise UsageError(f"--m must lie in [1, {RHO_CAP}]")
    ms = range(1, args.m + 1)
    rows = []
    if args.method == "direct":
        cols = ["m", "rho", "d"]
        for m in ms:
            v = rho_direct(m).value
            rows.append([m, v, dsloc_from_rho(v)])
    elif args.method == "cesaro":
        cols = ["m", "rho", "d"]
        rows = [[e.m, e.value, dsloc_from_rho(e.value)] for e in rho_cesaro_all(args.m)]
    else:
        cols = ["m", "rho_direct", "rho_cesaro", "discrepancy", "d"]
        ces = rho_cesaro_all(args.m)
        for m, e in zip(ms, ces):
            v = rho_direct(m).value
            rows.append([m, v, e.value, abs(v - e.value), dsloc_from_rho(v)])
    if args.shifted:
        cols = cols + ["rho_shifted", "d_shifted"]
        for row in rows:
            s = rho_shifted(row[0]).value
            row.extend([s, dsloc_from_rho(s)])
    return "kusuoka.rho/1", cols, rows, 0


def cmd_bounds(args):
    if args.n < 0 or args.n > BOUNDS_CAP:
        raise UsageError(f"--n must lie in [0, {BOUNDS_CAP}]")
    if args.grid < 64 or args.tol <= 0:
        raise UsageError("--grid must be >= 64 and --tol positive")
    cols = ["n", "rho_lower", "rho_upper", "d_lower", "d_upper", "theta_min", "theta_max"]
    rows = []
    for n in range(args.n + 1):
        b = bound_scan(n, args.grid, args.tol)
        rows.append([n, b.g_min, b.g_max, b.d_lower, b.d_upper, b.theta_min, b.theta_max])
    return "kusuoka.bounds/1", cols, rows, 0


def cmd_curve(args):
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    if args.n < 0 or args.n > BOUNDS_CAP:
        raise UsageError(f"--n must lie in [0, {BOUNDS_CAP}]")
    k = np.arange(1, args.samples + 1)
    theta = -math.pi + 2.0 * math.pi * k / args.samples
    theta[-1] = math.pi
    vals = png_on_circle(args.n, theta)
    return "kusuoka.curve/1", ["theta", "value"], [[t, v] for t, v in zip(theta, vals)], 0


def cmd_simulate(args):
    if args.steps < 0 or args.paths < 0:
        raise UsageError("--steps and --paths must be nonnegative")
    if args.law == "nu":
        _, snaps = simulate(args.steps, args.paths, args.seed, checkpoints=[args.steps])
        pts = snaps[args.steps]
        r, th = np.atleast_1d(radius(pts)), np.atleast_1d(angle(pts))
    else:
        try:
            r, th = uniform_word_law(args.steps, args.mode, args.paths, args.seed)
        except DepthError as exc:
            raise UsageError(str(exc)) from None
    if args.hist_bins:
        cols = ["quantity", "bin_lo", "bin_hi", "count"]
        rows = []
        for name, (edges, counts) in (("r", radius_histogram(r, args.hist_bins)),
                                      ("theta", angle_histogram(th, args.hist_bins))):
            rows.extend([name, edges[i], edges[i + 1], int(counts[i])] for i in range(len(counts)))
        return "kusuoka.simulate.hist/1", cols, rows, 0
    cols = ["path", "m", "r", "theta"]
    return "kusuoka.simulate/1", cols, [[p, args.steps, r[p], th[p]] for p in range(len(r))], 0


def cmd_verify(args):
    results = checks.run_all()
    cols = ["suite", "check", "status", "detail"]
    rows = [[c.suite, c.name, "pass" if c.passed else "FAIL", c.detail] for c in results]
    suites: dict[str, list[int]] = {}
    for c in results:
        tally = suites.setdefault(c.suite, [0, 0])
        tally[0 if c.passed else 1] += 1
    for s, (ok, bad) in suites.items():
        rows.append([s, "total", "pass" if not bad else "FAIL", f"{ok} passed, {bad} failed"])
    failed = any(not c.passed for c in results)
    return "kusuoka.verify/1", cols, rows, 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--full-precision", action="store_true", help="emit shortest round-trip binary64 digits")
    common.add_argument("--out", default=None, help="write to FILE instead of stdout")

    parser = argparse.ArgumentParser(prog="kusuoka", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", parents=[common], help="cell masses and ratio vectors")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--depth", type=int)
    g.add_argument("--word", type=str)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("rho", parents=[common], help="rho_m and the derived dimension for m = 1..M")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--method", choices=["direct", "cesaro", "both"], default="direct")
    p.add_argument("--shifted", action="store_true", help="add the decreasing log(2)-shifted sequence")
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("bounds", parents=[common], help="min/max of P^n g on the circle, n = 0..N")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("curve", parents=[common], help="theta -> P^n g(phi(theta)) over (-pi, pi]")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--samples", type=int, default=720)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("simulate", parents=[common], help="Markov chain or uniform-word samples")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--paths", type=int, default=1000)
    p.add_argument("--law", choices=["nu", "uniform"], default="nu")
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive",
                   help="uniform law only: enumerate W_m or sample --paths words")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hist-bins", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        schema, cols, rows, code = args.func(args)
    except (UsageError, DepthError) as exc:
        parser.error(str(exc))
    params = _params(args)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            emit(schema, params, cols, rows, args.format, args.full_precision, fh)
    else:
        emit(schema, params, cols, rows, args.format, args.full_precision, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
