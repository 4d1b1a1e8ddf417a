"""Command-line harness: solve test problems, run benchmark suites, export problems.

Data goes to ``--out`` (default standard output); diagnostics go to standard
error as ``randtls: error[<code>]: <message>``. The exit status is 0 on
success, 1 on a solver or I/O error and 2 on a usage error.

Desk-scale caps: ``n <= 4096`` for the 1-D problems and ``grid <= 64`` for the
2-D problems.
"""

import argparse
import contextlib
import csv
import math
import statistics
import sys

import numpy as np

from . import __version__
from .errors import RandTLSError
from .experiments import (
    range_bound_trials,
    reference_solution,
    residual_bound_check,
    run_once,
    run_partial,
)
from .linalg import singular_values
from .problem_io import read_problem, write_problem
from .problems import ONE_D, make_blur, make_gravity_2d, make_problem_1d
from .rangefinder import RangeFinderConfig

CSV_VERSION = 1
SOLVE_COLUMNS = ["problem", "n", "epsilon", "seed", "rank", "err_classical", "err_true", "residual", "time_s"]
TWO_D = ("gravity2d", "blur")
MAX_N_1D = 4096
MAX_GRID = 64

SUITES = {
    "table2": {"kind": "1d", "sizes": [1024]},
    "table3": {"kind": "1d", "sizes": [4096]},
    "table4": {"kind": "gravity2d", "sizes": [8, 16, 32, 64]},
    "table5": {"kind": "blur", "sizes": [16, 32, 64]},
    "bounds": {"kind": "bounds"},
}
TABLE_1D_COLUMNS = ["problem", "n", "err", "time_s", "rank", "err_p", "time_p_s"]
TABLE_2D_COLUMNS = ["grid", "n", "err", "time_s", "rank", "err_p", "time_p_s"]
BOUNDS_COLUMNS = ["bound", "problem", "k", "s", "p", "q", "delta", "trials", "violations", "rate"]


class UsageError(RandTLSError):
    code = "usage"


def _grid_from(args):
    if args.grid is not None:
        return args.grid
    if args.n is None:
        raise UsageError(f"{args.problem} needs --grid (or --n equal to grid**2)")
    grid = math.isqrt(args.n)
    if grid * grid != args.n:
        raise UsageError(f"--n {args.n} is not a perfect square; pass --grid")
    return grid


def build_problem(args):
    """Problem from ``--from-file`` or from the generator flags."""
    if getattr(args, "from_file", None):
        return read_problem(args.from_file)
    if args.problem in TWO_D:
        grid = _grid_from(args)
        if grid > MAX_GRID:
            raise UsageError(f"grid {grid} exceeds the desk-scale cap {MAX_GRID}")
        if args.problem == "gravity2d":
            return make_gravity_2d(grid, d=args.d if args.d is not None else 0.25)
        return make_blur(grid, band=args.band, spread=args.spread)
    if args.problem not in ONE_D:
        raise UsageError(f"unknown problem {args.problem!r}; choose from {', '.join(ONE_D + TWO_D)}")
    n = 1024 if args.n is None else args.n
    if n > MAX_N_1D:
        raise UsageError(f"n {n} exceeds the desk-scale cap {MAX_N_1D}")
    params = {"d": args.d} if (args.problem == "gravity" and args.d is not None) else {}
    return make_problem_1d(args.problem, n, **params)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.6e" % value
    if isinstance(value, tuple):
        return ":".join(str(v) for v in value)
    return str(value)


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_table(rows, columns, out, fmt="csv"):
    """Write dict rows as versioned CSV or as an aligned text table."""
    with _open_out(out) as fh:
        if fmt == "csv":
            fh.write(f"# randtls-csv v{CSV_VERSION}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_fmt(row[c]) for c in columns])
        else:
            cells = [columns] + [[_fmt(row[c]) for c in columns] for row in rows]
            widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
            for r in cells:
                fh.write("  ".join(c.rjust(w) for c, w in zip(r, widths)) + "\n")


def _warn(msg):
    print(f"randtls: note: {msg}", file=sys.stderr)


def cmd_solve(args):
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if not args.eps > 0:
        raise UsageError("--eps must be positive")
    problem = build_problem(args)
    base = RangeFinderConfig(tolerance=args.eps, power=args.power, seed=args.seed)
    reference, label, rows = None, "none", []
    for trial in range(args.trials):
        cfg = base.with_seed(args.seed + trial)
        sol, rec = run_once(problem, cfg)
        if args.baseline != "none" and reference is None:
            reference, label = reference_solution(problem, args.baseline, t=sol.rank)
            if label == "x_true":
                _warn(f"{args.baseline} TLS is nongeneric at working precision; x_true used as x*")
        row = dict(rec.__dict__)
        if reference is not None:
            row["err_classical"] = float(np.linalg.norm(sol.x - reference) / np.linalg.norm(reference))
        rows.append(row)
    write_table(rows, SOLVE_COLUMNS, args.out, args.format)
    return 0


def _median_run(problem, eps, seeds, reference):
    """Run every seed; return the record with the median error and the median time."""
    recs = [run_once(problem, RangeFinderConfig(tolerance=eps, seed=s), reference)[1] for s in seeds]
    recs.sort(key=lambda r: r.err_classical)
    return recs[len(recs) // 2], statistics.median(r.time_s for r in recs)


def _table_rows(kind, sizes, seeds, eps):
    rows = []
    if kind == "1d":
        for n in sizes:
            for name in ONE_D:
                problem = make_problem_1d(name, n)
                reference, _ = reference_solution(problem)
                rec, t = _median_run(problem, eps, seeds, reference)
                err_p, t_p = run_partial(problem, rec.rank, reference)
                rows.append({"problem": name, "n": n, "err": rec.err_classical, "time_s": t, "rank": rec.rank,
                             "err_p": err_p, "time_p_s": t_p})
        return rows
    make = make_gravity_2d if kind == "gravity2d" else make_blur
    for grid in sizes:
        problem = make(grid)
        rec, t = _median_run(problem, eps, seeds, problem.x_true)
        err_p, t_p = run_partial(problem, rec.rank, problem.x_true)
        rows.append({"grid": grid, "n": problem.n, "err": rec.err_true, "time_s": t, "rank": rec.rank,
                     "err_p": err_p, "time_p_s": t_p})
    return rows


def _bounds_rows(trials, delta, seed, size):
    rows = []
    for q in range(3):
        for p in range(6):
            viol, _, _ = range_bound_trials(k=10, s=5, p=p, q=q, delta=delta, trials=trials, seed=seed)
            rows.append({"bound": "range", "problem": "synthetic64", "k": 10, "s": 5, "p": p, "q": q,
                         "delta": delta, "trials": trials, "violations": viol, "rate": viol / trials})
    for name in ("shaw", "gravity", "foxgood"):
        problem = make_problem_1d(name, size)
        sigma = singular_values(problem.matrix())
        viol = 0
        for trial in range(trials):
            res, bound = residual_bound_check(problem, RangeFinderConfig(seed=(seed, trial)), sigma, delta=delta)
            viol += res > bound
        rows.append({"bound": "residual", "problem": name, "k": "adaptive", "s": 5, "p": 0, "q": 1,
                     "delta": delta, "trials": trials, "violations": viol, "rate": viol / trials})
    return rows


def cmd_bench(args):
    suite = SUITES[args.suite]
    if args.trials is not None and args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if suite["kind"] == "bounds":
        rows = _bounds_rows(args.trials or 500, 0.01, args.seed, args.sizes[0] if args.sizes else 256)
        columns = BOUNDS_COLUMNS
    else:
        seeds = [args.seed + i for i in range(args.trials or 1)]
        eps = args.eps if args.eps is not None else (0.1 if suite["kind"] == "blur" else 1e-3)
        rows = _table_rows(suite["kind"], args.sizes or suite["sizes"], seeds, eps)
        columns = TABLE_1D_COLUMNS if suite["kind"] == "1d" else TABLE_2D_COLUMNS
    write_table(rows, columns, args.out, args.format)
    return 0


def cmd_export(args):
    problem = build_problem(args)
    if args.out in (None, "-"):
        raise UsageError("export needs --out FILE")
    write_problem(problem, args.out)
    return 0


def _add_problem_flags(p, with_file=True):
    p.add_argument("--problem", default="shaw",
                   help=f"one of {', '.join(ONE_D + TWO_D)} (default shaw)")
    p.add_argument("--n", type=int, help=f"unknowns for 1-D problems, <= {MAX_N_1D} (default 1024)")
    p.add_argument("--grid", type=int, help=f"grid side for 2-D problems, <= {MAX_GRID}")
    p.add_argument("--d", type=float, help="depth for gravity and gravity2d (default 0.25)")
    p.add_argument("--band", type=int, help="blur band width (default min(grid, 16))")
    p.add_argument("--spread", type=float, default=3.0, help="blur Gaussian width (default 3)")
    if with_file:
        p.add_argument("--from-file", help="read the problem from an exported file instead")


def build_parser():
    parser = argparse.ArgumentParser(prog="randtls", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="randomized core-reduction TLS solve, one CSV row per trial")
    _add_problem_flags(solve)
    solve.add_argument("--eps", type=float, default=1e-3, help="range finder tolerance (default 1e-3)")
    solve.add_argument("--power", type=int, default=1, help="subspace iterations q (default 1)")
    solve.add_argument("--seed", type=int, default=0, help="base seed; trial i uses seed + i")
    solve.add_argument("--trials", type=int, default=1)
    solve.add_argument("--baseline", choices=["classical", "truncated", "none"], default="classical")
    solve.add_argument("--out", default="-", help="output file (default standard output)")
    solve.add_argument("--format", choices=["csv", "human"], default="csv")
    solve.set_defaults(func=cmd_solve)

    bench = sub.add_parser("bench", help="reproduce a results table or the bound-violation tables")
    bench.add_argument("suite", choices=sorted(SUITES))
    bench.add_argument("--sizes", type=int, nargs="+", help="override n (1-D) or grid (2-D) values")
    bench.add_argument("--trials", type=int, help="seeds per row (median reported); bounds: trials per row")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--eps", type=float, help="tolerance (default 1e-3, blur 0.1)")
    bench.add_argument("--out", default="-")
    bench.add_argument("--format", choices=["csv", "human"], default="csv")
    bench.set_defaults(func=cmd_bench)

    export = sub.add_parser("export", help="write a test problem in the plain-text format")
    _add_problem_flags(export, with_file=False)
    export.add_argument("--out", required=True)
    export.set_defaults(func=cmd_export)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"randtls: error[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except RandTLSError as exc:
        print(f"randtls: error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"randtls: error[io]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
