"""Command-line front end for sweeps, optimal-strategy reports, figure data and probes.

All output is deterministic: analytic paths are pure functions of the flags
and Monte Carlo paths are pure functions of (flags, seed). Numeric CSV/JSON
fields carry shortest round-trip precision, so files are lossless and byte
identical across runs and thread counts.

Exit codes: 0 success, 2 usage error, 3 requested method unavailable.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import Optional

from . import analysis, figures
from .distributions import BiModal, Pareto, ShiftedExp, parse_distribution
from .errors import MethodUnavailable, MomentDoesNotExist
from .jobs import divisors
from .montecarlo import DEFAULT_SEED, DEFAULT_TRIALS
from .scaling import Scaling, TaskModel, parse_scaling

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNAVAILABLE = 3

SWEEP_COLUMNS = ("k", "s", "rate", "expected_time", "method", "stderr", "is_optimal")


def _fmt(x) -> str:
    """Shortest representation that round-trips the exact double."""
    if x is None:
        return ""
    return repr(float(x))


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _parse_grid(text: str, cast=float) -> list:
    """Parse lo:hi:step into an inclusive grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid {text!r} must look like lo:hi:step")
    lo, hi, step = (float(p) for p in parts)
    if step <= 0 or hi < lo:
        raise ValueError(f"grid {text!r} must have step > 0 and hi >= lo")
    out = []
    v = lo
    while v <= hi + 1e-9 * max(abs(hi), 1.0):
        out.append(cast(round(v, 12)))
        v += step
    return out


def _add_job_flags(p: argparse.ArgumentParser, with_method: bool = True) -> None:
    p.add_argument("--dist", required=True, help="sexp:D,W | pareto:L,A | bimodal:B,E")
    p.add_argument("--scaling", required=True, help="server | data | additive")
    p.add_argument("--n", required=True, type=int, help="workers (= job size in CUs)")
    p.add_argument("--shift", type=float, default=None,
                   help="per-CU cost for data scaling of pareto/bimodal")
    if with_method:
        p.add_argument("--method", choices=("auto", "analytic", "mc", "lln"), default="auto")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="redundancy",
        description="Expected completion time of [n, k]-coded distributed jobs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="evaluate every divisor k of n")
    _add_job_flags(p)

    p = sub.add_parser("optimal", help="report the best strategy for one cell")
    _add_job_flags(p)

    p = sub.add_parser("figure", help="emit the data behind a standard figure")
    p.add_argument("id", help="figure id; run with an unknown id to list them")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV path; a .png lands beside it")
    p.add_argument("--out-dir", default=None, help="write <id>.csv and <id>.png here")
    p.add_argument("--no-plot", action="store_true", help="skip the rendered image")

    p = sub.add_parser("birthday", help="expected draws until a coupon repeats d times")
    p.add_argument("--n", required=True, type=int, help="coupons")
    p.add_argument("--d", required=True, type=int, help="repeats")
    p.add_argument("--asymptotic", action="store_true",
                   help="print only the closed-form asymptotic")

    p = sub.add_parser("probe", help="scan a conjectured ordering for counterexamples")
    p.add_argument("conjecture", choices=("c1", "c2", "c3"))
    p.add_argument("--dist", default=None)
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--b-grid", default="2:200:10", help="lo:hi:step (c2)")
    p.add_argument("--eps-grid", default="0.1:0.9:0.1", help="lo:hi:step (c2)")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


# ---------------------------------------------------------------------------
# shared helpers

def _parse_cell(args) -> tuple:
    dist = parse_distribution(args.dist)
    scaling = parse_scaling(args.scaling)
    if args.n < 1:
        raise ValueError("--n must be >= 1")
    TaskModel(dist, scaling, 1, args.shift)  # validates the shift rules up front
    return dist, scaling


def _write_text(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _sweep_csv(result: analysis.SweepResult) -> str:
    from io import StringIO

    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in result.rows:
        writer.writerow(
            [
                row.k,
                row.s,
                _fmt(row.rate),
                _fmt(row.value),
                row.method,
                _fmt(row.stderr),
                "true" if result.optimal and row.k == result.optimal.k else "false",
            ]
        )
    return buf.getvalue()


def _row_dict(row: analysis.SweepRow, optimal_k: Optional[int]) -> dict:
    return {
        "k": row.k,
        "s": row.s,
        "rate": row.rate,
        "expected_time": row.value,
        "method": row.method,
        "stderr": row.stderr,
        "is_optimal": row.k == optimal_k,
    }


def _config_dict(args, command: str) -> dict:
    return {
        "command": command,
        "dist": args.dist,
        "scaling": args.scaling,
        "n": args.n,
        "shift": args.shift,
        "method": args.method,
        "trials": args.trials,
        "seed": args.seed,
    }


def _run_sweep(args) -> analysis.SweepResult:
    dist, scaling = _parse_cell(args)
    return analysis.sweep(
        dist, scaling, args.n,
        shift=args.shift, method=args.method, trials=args.trials, seed=args.seed,
    )


# ---------------------------------------------------------------------------
# subcommands

def cmd_sweep(args) -> int:
    try:
        result = _run_sweep(args)
    except ValueError as exc:
        return _usage_error(str(exc))
    except MethodUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNAVAILABLE
    failed = [r for r in result.rows if r.error]
    if args.method == "analytic" and failed:
        print(f"error: no closed form at k={failed[0].k}: {failed[0].error}", file=sys.stderr)
        return EXIT_UNAVAILABLE
    if result.optimal is None:
        return _usage_error("no evaluable rows; " + (failed[0].error or "unknown"))
    dist = parse_distribution(args.dist)
    if (
        isinstance(dist, Pareto)
        and args.scaling == Scaling.ADDITIVE.value
        and dist.alpha > 4
        and any(r.method == "mc" for r in result.rows)
    ):
        bound = analysis.pareto_replication_lower_bound(args.n, dist.lam, dist.alpha, 1.0)
        if not bound.vacuous:
            print(
                f"note: replication (k=1) lower bound at eta=1: {_fmt(bound.value)}",
                file=sys.stderr,
            )
    if args.format == "csv":
        _write_text(_sweep_csv(result), args.out)
    else:
        doc = {
            "config": _config_dict(args, "sweep"),
            "rows": [_row_dict(r, result.optimal_k) for r in result.rows],
            "optimal": {
                **_row_dict(result.optimal, result.optimal_k),
                "strategy": result.strategy,
                "ties": result.ties,
            },
        }
        _write_text(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def _optimal_extras(dist, scaling, args) -> tuple[list[tuple[str, str]], list[str]]:
    """Closed-form diagnostics for the cell: continuous k*, LLN thresholds, notes."""
    lines: list[tuple[str, str]] = []
    notes: list[str] = []
    if isinstance(dist, ShiftedExp):
        if scaling == Scaling.SERVER:
            if dist.w == 0:
                notes.append("deterministic service (w=0): completion time is flat in k")
            else:
                notes.append("strictly increasing in k: replication is optimal for any n")
        elif scaling == Scaling.DATA:
            res = analysis.optimal_k_sexp_data(args.n, dist.delta, dist.w)
            if res.degenerate:
                notes.append("deterministic service (w=0): splitting by exact evaluation")
            else:
                lines.append(("continuous-kstar", _fmt(res.continuous)))
    elif (
        isinstance(dist, Pareto)
        and scaling == Scaling.SERVER
        and dist.alpha > 1
        and not math.isinf(dist.alpha)
    ):
        res = analysis.optimal_k_pareto_server(args.n, dist.alpha)
        lines.append(("continuous-kstar", _fmt(res.continuous)))
        lines.append(("best-integer-k", str(res.best_integer_k)))
    elif isinstance(dist, Pareto) and scaling == Scaling.ADDITIVE and dist.alpha > 4:
        bound = analysis.pareto_replication_lower_bound(args.n, dist.lam, dist.alpha, 1.0)
        if not bound.vacuous:
            lines.append(("replication-lower-bound", _fmt(bound.value)))
            notes.append("replication (k=1) has no closed form; bound uses eta=1")
    elif isinstance(dist, BiModal) and scaling in (Scaling.SERVER, Scaling.DATA):
        thr = analysis.bimodal_lln_threshold(scaling, dist.b, args.shift)
        opt = analysis.bimodal_lln_optimum(scaling, dist.b, dist.eps, args.shift)
        lines.append(("lln-threshold", _fmt(thr)))
        lines.append(("lln-strategy", opt.strategy))
        lines.append(("lln-rate", _fmt(opt.rate)))
        side = "<=" if dist.eps <= thr else ">"
        notes.append(
            f"eps={dist.eps:g} {side} threshold {thr:g}: large-n optimum is {opt.strategy}"
        )
    return lines, notes


def cmd_optimal(args) -> int:
    try:
        dist, scaling = _parse_cell(args)
        result = _run_sweep(args)
    except ValueError as exc:
        return _usage_error(str(exc))
    except MethodUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNAVAILABLE
    failed = [r for r in result.rows if r.error]
    if args.method == "analytic" and failed:
        print(f"error: no closed form at k={failed[0].k}: {failed[0].error}", file=sys.stderr)
        return EXIT_UNAVAILABLE
    if result.optimal is None:
        return _usage_error("no evaluable rows; " + (failed[0].error or "unknown"))
    extras, notes = _optimal_extras(dist, scaling, args)
    best = result.optimal
    if args.format == "json":
        doc = {
            "config": _config_dict(args, "optimal"),
            "strategy": result.strategy,
            "optimal": _row_dict(best, result.optimal_k),
            "ties": result.ties,
            **{key.replace("-", "_"): _maybe_number(value) for key, value in extras},
            "notes": notes,
        }
        _write_text(json.dumps(doc, indent=2) + "\n", args.out)
        return EXIT_OK
    lines = [
        ("strategy", result.strategy),
        ("optimal-k", str(best.k)),
        ("optimal-s", str(best.s)),
        ("optimal-rate", _fmt(best.rate)),
        ("expected-time", _fmt(best.value)),
        ("method", best.method),
    ]
    if best.stderr is not None:
        lines.append(("stderr", _fmt(best.stderr)))
    if len(result.ties) > 1:
        lines.append(("ties", ",".join(str(k) for k in result.ties)))
    lines += extras
    text = "".join(f"{key}: {value}\n" for key, value in lines)
    text += "".join(f"note: {n}\n" for n in notes)
    _write_text(text, args.out)
    return EXIT_OK


def _maybe_number(value: str):
    try:
        return float(value)
    except ValueError:
        return value


def cmd_figure(args) -> int:
    try:
        data = figures.build_figure(args.id, n=args.n, trials=args.trials, seed=args.seed)
    except KeyError:
        ids = ", ".join(figures.supported_ids())
        print(f"error: unknown figure id {args.id!r}; supported: {ids}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        return _usage_error(str(exc))

    from io import StringIO

    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["series", data.xname, "value", "stderr"])
    for row in data.rows:
        x = repr(int(row.x)) if float(row.x).is_integer() else _fmt(row.x)
        writer.writerow([row.series, x, _fmt(row.value), _fmt(row.stderr)])
    csv_text = buf.getvalue()

    csv_path = None
    if args.out_dir is not None:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f"{args.id}.csv"
    elif args.out is not None:
        csv_path = Path(args.out)
    if csv_path is None:
        sys.stdout.write(csv_text)
        return EXIT_OK
    csv_path.write_text(csv_text, encoding="utf-8")
    if not args.no_plot:
        from .plotting import render_figure

        render_figure(data, str(csv_path.with_suffix(".png")))
    return EXIT_OK


def cmd_birthday(args) -> int:
    from .birthday import birthday_asymptotic, birthday_expectation

    if args.n < 1 or args.d < 1:
        return _usage_error("--n and --d must be >= 1")
    asym = birthday_asymptotic(args.n, args.d)
    if args.asymptotic:
        print(f"asymptotic: {_fmt(asym)}")
        return EXIT_OK
    exact = birthday_expectation(args.n, args.d)
    print(f"exact: {_fmt(exact)}")
    print(f"asymptotic: {_fmt(asym)}")
    print(f"ratio-asymptotic-to-exact: {_fmt(asym / exact)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# conjecture probes: scan a grid, print counterexample candidates, exit 0.

def _probe_c1(args) -> int:
    if args.dist is None:
        return _usage_error("probe c1 needs --dist")
    try:
        dist = parse_distribution(args.dist)
        result = analysis.sweep(dist, Scaling.SERVER, args.n)
    except (ValueError, MomentDoesNotExist) as exc:
        return _usage_error(str(exc))
    if result.optimal is None:
        return _usage_error("cell not evaluable")
    floor = dist.minimum()
    predict_replication = floor == 0.0
    is_replication = result.optimal.k == 1
    candidate = predict_replication != is_replication
    if candidate:
        print(
            f"candidate: dist={args.dist} n={args.n} argmin k={result.optimal.k} "
            f"({result.strategy}) but constant floor {floor:g} predicts "
            f"{'replication' if predict_replication else 'coding/splitting'}"
        )
    print(
        f"probe c1: dist={args.dist} n={args.n}: argmin k={result.optimal.k} "
        f"({result.strategy}); {1 if candidate else 0} counterexample candidate(s)"
    )
    return EXIT_OK


def _probe_c2(args) -> int:
    try:
        b_grid = _parse_grid(args.b_grid)
        eps_grid = _parse_grid(args.eps_grid)
    except ValueError as exc:
        return _usage_error(str(exc))
    candidates = 0
    points = 0
    for b in b_grid:
        for eps in eps_grid:
            points += 1
            values = {
                k: analysis.bimodal_additive_mean(args.n, k, b, eps)
                for k in divisors(args.n)
            }
            repl = values.pop(1, None)
            if repl is None or not values:  # n = 1 has no k >= 2
                continue
            best_k = min(values, key=values.get)
            if values[best_k] >= repl:
                candidates += 1
                print(
                    f"candidate: b={b:g} eps={eps:g} n={args.n}: replication "
                    f"{repl!r} <= best coding/splitting {values[best_k]!r} (k={best_k})"
                )
    print(f"probe c2: {points} grid point(s) checked, {candidates} counterexample candidate(s)")
    return EXIT_OK


def _probe_c3(args) -> int:
    if args.dist is None:
        return _usage_error("probe c3 needs --dist")
    try:
        dist = parse_distribution(args.dist)
    except ValueError as exc:
        return _usage_error(str(exc))
    use_mc = isinstance(dist, Pareto)
    method = "mc" if use_mc else "analytic"
    try:
        result = analysis.sweep(
            dist, Scaling.ADDITIVE, args.n, method=method,
            trials=args.trials, seed=args.seed,
        )
    except (ValueError, MomentDoesNotExist) as exc:
        return _usage_error(str(exc))
    rows = {r.k: r for r in result.rows if r.value is not None}
    repl = rows.pop(1, None)
    candidate = False
    if repl is not None and rows:
        best = min(rows.values(), key=lambda r: r.value)
        if use_mc:
            margin = 4.0 * math.hypot(best.stderr or 0.0, repl.stderr or 0.0)
            candidate = best.value - repl.value > margin
        else:
            candidate = best.value >= repl.value
        if candidate:
            print(
                f"candidate: dist={args.dist} n={args.n}: replication {repl.value!r} "
                f"beats best k={best.k} at {best.value!r} ({method})"
            )
        else:
            print(
                f"probe c3: dist={args.dist} n={args.n}: k={best.k} at {best.value!r} "
                f"outperforms replication at {repl.value!r} ({method})"
            )
    print(f"probe c3: 1 point checked, {1 if candidate else 0} counterexample candidate(s)")
    return EXIT_OK


def cmd_probe(args) -> int:
    if args.conjecture == "c1":
        return _probe_c1(args)
    if args.conjecture == "c2":
        return _probe_c2(args)
    return _probe_c3(args)


# ---------------------------------------------------------------------------

_COMMANDS = {
    "sweep": cmd_sweep,
    "optimal": cmd_optimal,
    "figure": cmd_figure,
    "birthday": cmd_birthday,
    "probe": cmd_probe,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code or 0)
    return _COMMANDS[args.command](args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
