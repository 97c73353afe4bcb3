"""Command-line front end.

Three subcommands: ``run`` simulates one scenario and writes per-sample
metrics as CSV (optionally an SVG figure), ``compare`` runs the two built-in
studies side by side and reports whether their dynamic-density traces are
identical, ``gradcheck`` verifies the analytic metric partials against
central finite differences over a parameter grid.

Exit codes: 0 success, 1 validation or parse failure, 2 separation conflict,
3 output I/O failure.  Diagnostics go to stderr; set PDW_NO_COLOR to disable
ANSI color there.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

from .core_model import PairScenario, integrate_separation
from .errors import (
    ConflictError,
    DomainError,
    ParameterViolation,
    ScenarioError,
)
from .metrics import (
    DdParams,
    PdwParams,
    dynamic_density,
    fd_partial,
    pdw_partial_d,
    pdw_partial_ddot,
    pdw_trace,
)
from .scenarios import builtin_scenario, parse_scenario_file
from .svg import render_scenario_svg

CSV_COLUMNS = ("t_min", "d_km", "ddot_kmh", "pdw_raw", "pdw_norm", "dd_raw", "dd_norm")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CONFLICT = 2
EXIT_IO = 3

_RED = "31"
_YELLOW = "33"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # Route usage errors through the package's exit-code contract (1, not
    # argparse's default 2, which is reserved for separation conflicts).
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _use_color() -> bool:
    if os.environ.get("PDW_NO_COLOR"):
        return False
    return hasattr(sys.stderr, "isatty") and sys.stderr.isatty()


def _diag(message: str, color: str = _RED) -> None:
    if _use_color():
        message = f"\x1b[{color}m{message}\x1b[0m"
    print(message, file=sys.stderr)


def _fmt(x: float) -> str:
    # Up to 9 significant digits, shortest form, locale independent.
    x = float(x)
    if x == 0.0:
        x = 0.0  # fold -0.0
    return format(x, ".9g")


def _write_csv(path: Path, rows) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _load_scenario(ref: str) -> PairScenario:
    if ref in ("s1", "s2"):
        return builtin_scenario(ref)
    return parse_scenario_file(ref)


def _apply_overrides(scenario: PairScenario, args) -> PairScenario:
    overrides = {}
    if getattr(args, "dt", None) is not None:
        overrides["sample_dt"] = args.dt
    if getattr(args, "d0", None) is not None:
        overrides["d0"] = args.d0
    if getattr(args, "ddot_max", None) is not None:
        overrides["ddot_max"] = args.ddot_max
    return replace(scenario, **overrides) if overrides else scenario


def _run_scenario(scenario: PairScenario, dd_params: DdParams, merge_jumps: bool):
    trace = integrate_separation(scenario)
    pdw_t = pdw_trace(trace, PdwParams(scenario.ddot_max))
    dd_t = dynamic_density(scenario, trace, dd_params)
    rows = []
    for i, (s, mp, md) in enumerate(zip(trace.samples, pdw_t.samples, dd_t.samples)):
        if merge_jumps and trace.is_pre_event(i):
            continue
        rows.append((s.t, s.d, s.ddot, mp.raw, mp.normalized, md.raw, md.normalized))
    return trace, pdw_t, dd_t, rows


def cmd_run(args) -> int:
    scenario = _apply_overrides(_load_scenario(args.scenario), args)
    dd_params = DdParams(window=args.dd_window, speed_threshold=args.dd_threshold)
    trace, pdw_t, dd_t, rows = _run_scenario(scenario, dd_params, args.merge_jumps)
    if trace.unsafe:
        _diag(
            f"advisory: separation dropped below {trace.unsafe_threshold:g} km "
            f"(minimum {trace.min_separation():.6g} km)",
            color=_YELLOW,
        )
    _write_csv(Path(args.out), rows)
    if args.svg:
        Path(args.svg).write_text(
            render_scenario_svg(scenario, pdw_t, dd_t), encoding="utf-8"
        )
    print(f"{scenario.name}: {len(rows)} rows -> {args.out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dd_params = DdParams(window=args.dd_window, speed_threshold=args.dd_threshold)
    dd_series = {}
    for scenario_id in ("s1", "s2"):
        scenario = _apply_overrides(builtin_scenario(scenario_id), args)
        _, _, dd_t, rows = _run_scenario(scenario, dd_params, args.merge_jumps)
        _write_csv(out_dir / f"{scenario_id}.csv", rows)
        dd_series[scenario_id] = [(s.t, s.raw) for s in dd_t.samples]
    for extra in args.extra:
        scenario = _apply_overrides(parse_scenario_file(extra), args)
        _, _, _, rows = _run_scenario(scenario, dd_params, args.merge_jumps)
        _write_csv(out_dir / f"{Path(extra).stem}.csv", rows)
    identical = dd_series["s1"] == dd_series["s2"]
    print(f"DD identical: {'true' if identical else 'false'}")
    return EXIT_OK


def _parse_grid(text: str) -> list[float]:
    """Grid spec: either start:stop:step (stop inclusive) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"grid spec {text!r} must be start:stop:step or a comma list")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError as exc:
            raise DomainError(f"bad number in grid spec {text!r}") from exc
        if step <= 0.0:
            raise DomainError("grid step must be positive")
        if stop < start:
            raise DomainError("grid stop must not precede start")
        n = int(math.floor((stop - start) / step + 1e-9))
        return [start + k * step for k in range(n + 1)]
    try:
        values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise DomainError(f"bad number in grid spec {text!r}") from exc
    if not values:
        raise DomainError("grid spec is empty")
    return values


def cmd_gradcheck(args) -> int:
    params = PdwParams(args.ddot_max)
    d_grid = _parse_grid(args.d_grid)
    ddot_grid = _parse_grid(args.ddot_grid)
    verbose = len(d_grid) * len(ddot_grid) <= 12
    checked = 0
    max_rel = 0.0
    problems: list[str] = []
    for d in d_grid:
        for ddot in ddot_grid:
            try:
                analytic_d = pdw_partial_d(d, ddot, params)
                analytic_r = pdw_partial_ddot(d, params)
                fd_d = fd_partial("d", d, ddot, params)
                fd_r = fd_partial("ddot", d, ddot, params)
            except (DomainError, ParameterViolation) as exc:
                problems.append(f"d={d:g} ddot={ddot:g}: {exc}")
                continue
            rel_d = abs(analytic_d - fd_d) / max(abs(analytic_d), 1e-12)
            rel_r = abs(analytic_r - fd_r) / max(abs(analytic_r), 1e-12)
            checked += 1
            max_rel = max(max_rel, rel_d, rel_r)
            if verbose:
                print(
                    f"d={d:g} ddot={ddot:g}: d-partial analytic={analytic_d:.9g} "
                    f"fd={fd_d:.9g}; ddot-partial analytic={analytic_r:.9g} fd={fd_r:.9g}"
                )
            if analytic_d >= 0.0 or analytic_r >= 0.0:
                problems.append(f"d={d:g} ddot={ddot:g}: non-negative partial")
            if rel_d > args.tol or rel_r > args.tol:
                problems.append(
                    f"d={d:g} ddot={ddot:g}: relative error {max(rel_d, rel_r):.3e} "
                    f"above tolerance {args.tol:g}"
                )
    print(f"points checked: {checked}")
    print(f"max relative error: {max_rel:.3e}")
    if problems:
        for p in problems:
            _diag(f"gradcheck: {p}")
        return EXIT_INVALID
    print(f"all partials negative and within tolerance {args.tol:g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pdwsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one scenario and write per-sample metrics as CSV")
    run.add_argument(
        "--scenario", required=True,
        help="built-in id (s1 or s2) or path to a scenario JSON file",
    )
    run.add_argument("--out", required=True, help="output CSV path")
    run.add_argument("--svg", help="also render a two-panel SVG figure to this path")
    run.add_argument("--dt", type=float, help="override the sampling step, minutes")
    run.add_argument("--d0", type=float, help="override the initial separation, km")
    run.add_argument(
        "--ddot-max", type=float, dest="ddot_max",
        help="override the separation-rate bound, km/h",
    )
    run.add_argument(
        "--dd-window", type=float, default=2.0,
        help="dynamic-density trailing window, minutes (default 2)",
    )
    run.add_argument(
        "--dd-threshold", type=float, default=1.0,
        help="dynamic-density speed-change threshold, km/h (default 1)",
    )
    run.add_argument(
        "--merge-jumps", action="store_true",
        help="emit one row per changepoint (post-event values only)",
    )
    run.set_defaults(func=cmd_run)

    compare = sub.add_parser(
        "compare", help="run both built-in scenarios and compare their DD traces"
    )
    compare.add_argument("--out-dir", default=".", help="directory for the CSV files (default .)")
    compare.add_argument("--dt", type=float, help="override the sampling step, minutes")
    compare.add_argument(
        "--extra", action="append", default=[], metavar="PATH",
        help="additionally run this scenario file (repeatable)",
    )
    compare.add_argument("--dd-window", type=float, default=2.0,
                         help="dynamic-density trailing window, minutes (default 2)")
    compare.add_argument("--dd-threshold", type=float, default=1.0,
                         help="dynamic-density speed-change threshold, km/h (default 1)")
    compare.add_argument("--merge-jumps", action="store_true",
                         help="emit one row per changepoint (post-event values only)")
    compare.set_defaults(func=cmd_compare)

    grad = sub.add_parser(
        "gradcheck", help="verify analytic metric partials against finite differences"
    )
    grad.add_argument("--d-grid", default="10:300:10",
                      help="separation grid, start:stop:step or comma list (km)")
    grad.add_argument("--ddot-grid", default="-150:150:50",
                      help="rate grid, start:stop:step or comma list (km/h)")
    grad.add_argument("--ddot-max", type=float, default=200.0, dest="ddot_max",
                      help="rate bound for the metric (default 200 km/h)")
    grad.add_argument("--tol", type=float, default=1e-6,
                      help="relative-error tolerance (default 1e-6)")
    grad.set_defaults(func=cmd_gradcheck)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        _diag(f"error: {exc}")
        return EXIT_INVALID
    except ConflictError as exc:
        _diag(f"conflict: {exc}")
        return EXIT_CONFLICT
    except ScenarioError as exc:
        _diag(f"error: {exc}")
        return EXIT_INVALID
    except (DomainError, ParameterViolation) as exc:
        _diag(f"error: {exc}")
        return EXIT_INVALID
    except OSError as exc:
        _diag(f"i/o error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
