"""Command-line front end: P-numbers, bounds, oracle solves and figure data.

Exit codes: 0 success, 2 usage, 3 numeric failure, 4 method restriction.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import power_law
from .comparison import chord_lower, chord_lower_psi_weighted, chord_upper, chord_upper_psi_weighted
from .envelope import BoundResult, envelope_bound, reduce_couplings, sum_bound, sum_estimate
from .errors import DomainError, PreconditionError, SpecBoundsError
from .potential import QuantumNumbers, coulomb_linear, format_potential, parse_potential
from .solver import SolverConfig, solve_eigenvalue

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_RESTRICTED = 0, 2, 3, 4

# method flag -> (figure label, needs n == 1)
METHODS = {
    "envelope-lower": ("ELHY", False),
    "envelope-upper": ("EUL", False),
    "envelope-ho": ("EUHO", False),
    "sum": ("ELS", True),
    "chord-lower": ("ELC", True),
    "chord-upper": ("EUC", True),
    "chord-lower-psi": ("ELCW", True),
    "chord-upper-psi": ("EUCW", True),
    "exact": ("EX", False),
}
FIGURE_COLUMNS = {
    1: ("EUL", "ELS", "EX"),
    4: ("EUHO", "EUL", "EUC", "EUCW", "ELHY", "ELC", "ELCW", "ELS", "EX"),
    5: ("EUC", "ELS", "EX"),
}


class UsageError(Exception):
    pass


# ---- configuration -------------------------------------------------------------

def _env_or(value, name, cast):
    if value is not None:
        return value
    raw = os.environ.get("SPECBOUNDS_" + name)
    if raw is None or raw == "":
        return None
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"SPECBOUNDS_{name}={raw!r} is not a valid {cast.__name__}")


def solver_config(args) -> SolverConfig:
    """Solver settings from flags, then SPECBOUNDS_* variables, then defaults."""
    kwargs = {}
    mesh = _env_or(args.mesh, "MESH", int)
    tol = _env_or(args.tol, "TOL", float)
    rmax = _env_or(args.rmax, "RMAX", float)
    if mesh is not None:
        kwargs["mesh_points"] = mesh
    if tol is not None:
        kwargs["energy_tol"] = tol
    if rmax is not None:
        kwargs["r_max"] = rmax
    try:
        return SolverConfig(**kwargs)
    except DomainError as exc:
        raise UsageError(str(exc))


# ---- output --------------------------------------------------------------------

def _fmt(value, precision):
    if isinstance(value, (float, np.floating)):
        return f"{value:.{precision}f}"
    return "" if value is None else str(value)


def render(rows: list[dict], columns: list[str], fmt: str, precision: int) -> str:
    if fmt == "json":
        clean = [{k: (float(v) if isinstance(v, np.floating) else v) for k, v in row.items()} for row in rows]
        return json.dumps(clean, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c), precision) for c in columns])
    return buf.getvalue()


def emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---- pnumbers ------------------------------------------------------------------

def cmd_pnumbers(args) -> int:
    cfg = solver_config(args)
    if args.table1:
        values = power_law.table1(cfg)
        if args.format == "json":
            rows = [{"N": N, **{f"n{n}": float(v) for n, v in zip(power_law.TABLE1_LEVELS, row)}}
                    for N, row in zip(power_law.TABLE1_DIMS, values)]
            emit(render(rows, [], "json", args.precision), args.out)
        else:
            emit(power_law.table1_csv(values), args.out)
        return EXIT_OK
    if args.q is None:
        raise UsageError("give -q (with -n -l -N) or --table1")
    qn = QuantumNumbers(args.n, args.l, args.N)
    p = power_law.p_number(args.q, qn, cfg)
    row = {"q": f"{args.q:g}", "n": qn.n, "ell": qn.ell, "N": qn.dim, "P": p.value, "provenance": p.provenance}
    emit(render([row], ["q", "n", "ell", "N", "P", "provenance"], args.format, args.precision), args.out)
    return EXIT_OK


# ---- bound ---------------------------------------------------------------------

def _reduced_bound(method: str, lam: float, qn: QuantumNumbers, cfg: SolverConfig) -> BoundResult:
    """Bound for ``-Δ - 1/r + λ r``."""
    if method == "envelope-lower":
        return envelope_bound(lam, qn, -1, cfg)
    if method == "envelope-upper":
        return envelope_bound(lam, qn, 1, cfg)
    if method == "envelope-ho":
        return envelope_bound(lam, qn, 2, cfg)
    if method == "exact":
        E = solve_eigenvalue(coulomb_linear(1.0, lam), qn, cfg).energy
        return BoundResult(E, "exact", "oracle", {"lambda": lam})
    if qn.n != 1:
        raise PreconditionError(f"method {method!r} is valid only for n = 1")
    if method == "sum":
        return sum_bound(lam, qn.ell, qn.dim, cfg)
    chord = {"chord-lower": chord_lower, "chord-upper": chord_upper,
             "chord-lower-psi": chord_lower_psi_weighted, "chord-upper-psi": chord_upper_psi_weighted}[method]
    return chord(1.0, lam, qn.ell, qn.dim, cfg)


def _params_text(params: dict) -> str:
    return ";".join(f"{k}={v:.10g}" if isinstance(v, float) else f"{k}={v}" for k, v in sorted(params.items()))


def cmd_bound(args) -> int:
    cfg = solver_config(args)
    qn = QuantumNumbers(args.n, args.l, args.N)
    lam, factor = reduce_couplings(args.omega, args.a, args.b)
    if args.method == "all":
        methods = [m for m, (_, n1) in METHODS.items() if qn.n == 1 or not n1]
    else:
        methods = [args.method]
        if METHODS[args.method][1] and qn.n != 1 and not (args.method == "sum" and args.unsafe_estimate):
            print(f"error: method {args.method!r} bounds only the ground state (n = 1); "
                  f"got n = {qn.n}" + (" (use --unsafe-estimate for an unbounded estimate)" if args.method == "sum" else ""),
                  file=sys.stderr)
            return EXIT_RESTRICTED
    rows = []
    for method in methods:
        if method == "sum" and qn.n != 1:
            res = sum_estimate(lam, qn, cfg)
        else:
            res = _reduced_bound(method, lam, qn, cfg)
        res = res.scaled(factor)
        rows.append({"label": METHODS[method][0], "method": res.method, "direction": res.direction,
                     "value": res.value, "params": _params_text(res.params) if args.format == "csv" else res.params})
    if args.unsafe_estimate and args.method == "all" and qn.n != 1:
        res = sum_estimate(lam, qn, cfg).scaled(factor)
        rows.append({"label": "ELS", "method": res.method, "direction": res.direction, "value": res.value,
                     "params": _params_text(res.params) if args.format == "csv" else res.params})
    emit(render(rows, ["label", "method", "direction", "value", "params"], args.format, args.precision), args.out)
    return EXIT_OK


# ---- solve ---------------------------------------------------------------------

def cmd_solve(args) -> int:
    try:
        potential = parse_potential(args.V)
    except DomainError as exc:
        raise UsageError(str(exc))
    cfg = solver_config(args)
    qn = QuantumNumbers(args.n, args.l, args.N)
    sol = solve_eigenvalue(potential, qn, cfg)
    if args.dump:
        sol.to_csv(args.dump)
    row = {"potential": format_potential(potential), "n": qn.n, "ell": qn.ell, "N": qn.dim, "E": sol.energy}
    emit(render([row], ["potential", "n", "ell", "N", "E"], args.format, args.precision), args.out)
    return EXIT_OK


# ---- figure --------------------------------------------------------------------

_FIGURE_METHODS = {"EUHO": "envelope-ho", "EUL": "envelope-upper", "EUC": "chord-upper", "EUCW": "chord-upper-psi",
                   "ELHY": "envelope-lower", "ELC": "chord-lower", "ELCW": "chord-lower-psi", "ELS": "sum",
                   "EX": "exact"}


def _figure_row(task):
    fig, lam, ell, N, cfg = task
    row = {"lambda": lam}
    if fig == 1:
        row["ell"] = ell
    if fig == 5:
        row["N"] = N
    qn = QuantumNumbers(1, ell, N)
    failures = []
    for label in FIGURE_COLUMNS[fig]:
        try:
            row[label] = _reduced_bound(_FIGURE_METHODS[label], lam, qn, cfg).value
        except SpecBoundsError as exc:
            row[label] = None
            failures.append(f"{label}: {exc}")
    row["status"] = "ok" if not failures else "error " + " | ".join(failures)
    return row


def figure_tasks(fig: int, lambdas, cfg):
    if fig == 1:
        return [(fig, lam, ell, 3, cfg) for ell in range(4) for lam in lambdas]
    if fig == 4:
        return [(fig, lam, 0, 3, cfg) for lam in lambdas]
    return [(fig, lam, 0, N, cfg) for N in range(3, 8) for lam in lambdas]


def cmd_figure(args) -> int:
    cfg = solver_config(args)
    if not (0 < args.lambda_min < args.lambda_max) or args.points < 2:
        raise UsageError("need 0 < --lambda-min < --lambda-max and --points >= 2")
    lambdas = [float(x) for x in np.geomspace(args.lambda_min, args.lambda_max, args.points)]
    tasks = figure_tasks(args.id, lambdas, cfg)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_figure_row, tasks))  # map keeps grid order
    else:
        rows = [_figure_row(t) for t in tasks]
    keys = ["lambda"] + {1: ["ell"], 4: [], 5: ["N"]}[args.id] + list(FIGURE_COLUMNS[args.id]) + ["status"]
    emit(render(rows, keys, args.format, args.precision), args.out)
    failed = sum(row["status"] != "ok" for row in rows)
    if failed:
        print(f"error: {failed} figure row(s) failed; see the status column", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# ---- parser --------------------------------------------------------------------

def _precision(text: str) -> int:
    value = int(text)
    if not 1 <= value <= 15:
        raise argparse.ArgumentTypeError("precision must be between 1 and 15")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--precision", type=_precision, default=6, help="decimal places in CSV output")
    common.add_argument("--out", "-o", help="write output here instead of stdout")
    common.add_argument("--mesh", type=int, help="solver mesh points (env SPECBOUNDS_MESH)")
    common.add_argument("--tol", type=float, help="solver energy tolerance (env SPECBOUNDS_TOL)")
    common.add_argument("--rmax", type=float, help="solver outer radius, 0 = automatic (env SPECBOUNDS_RMAX)")
    common.add_argument("--cache-in", help="preload solver-derived P-numbers from this CSV")
    common.add_argument("--cache-out", help="save solver-derived P-numbers to this CSV")

    qn = argparse.ArgumentParser(add_help=False)
    qn.add_argument("-n", type=int, default=1, help="radial quantum number, n >= 1")
    qn.add_argument("-l", type=int, default=0, help="angular momentum")
    qn.add_argument("-N", type=int, default=3, help="spatial dimension")

    parser = argparse.ArgumentParser(prog="specbounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pnumbers", parents=[common, qn], help="P-numbers of pure power potentials")
    p.add_argument("-q", type=float, help="power exponent, q > -2 and q != 0")
    p.add_argument("--table1", action="store_true", help="P(1) for N = 2..12, n = 1..4")
    p.set_defaults(func=cmd_pnumbers)

    p = sub.add_parser("bound", parents=[common, qn], help="bounds for -ωΔ - a/r + b r")
    p.add_argument("-a", type=float, default=1.0)
    p.add_argument("-b", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--method", choices=tuple(METHODS) + ("all",), default="all")
    p.add_argument("--unsafe-estimate", action="store_true",
                   help="allow the sum formula for n > 1; the row is an estimate, not a bound")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("solve", parents=[common, qn], help="eigenvalue of -Δ + V")
    p.add_argument("-V", required=True, help='potential, e.g. "1*r^-1,1*r^1" (coupling*r^exponent)')
    p.add_argument("--dump", help="write the r,u wavefunction CSV here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("figure", parents=[common], help="figure data as CSV")
    p.add_argument("id", type=int, choices=(1, 4, 5))
    p.add_argument("--lambda-min", type=float, default=0.05)
    p.add_argument("--lambda-max", type=float, default=20.0)
    p.add_argument("--points", type=int, default=40)
    p.add_argument("--jobs", type=int, default=1, help="worker processes; output order is unchanged")
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.cache_in:
            with open(args.cache_in, newline="") as fh:
                power_law.CACHE.import_csv(fh)
        code = args.func(args)
        if args.cache_out:
            with open(args.cache_out, "w", newline="") as fh:
                power_law.CACHE.export_csv(fh)
        return code
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESTRICTED
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpecBoundsError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
