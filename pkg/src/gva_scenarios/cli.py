"""Command-line entry point.

Exit codes: 0 success, 1 I/O error, 2 validation error, 3 golden mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .analytics import build_growth_table, default_rows
from .core import SECTORS, TOTAL, FiscalQuarter, GvaMatrix, merge_all, quarter_total
from .errors import GvaError
from .ingest import (
    fixture_dir,
    load_gva_csv,
    load_schedule_csv,
    load_shock_csv,
    serialize_gva_csv,
)
from .nowcast import complete_fiscal_year, missing_quarters
from .report import emit_plot_series, figure_series, format_level, render_gva_table, render_growth_table
from .scenario import project_fiscal_year
from .validate import run_pipeline, validate

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_MISMATCH = 0, 1, 2, 3


def _stamp_lines(args) -> tuple[str, ...]:
    if not getattr(args, "stamp", False):
        return ()
    now = datetime.now(timezone.utc).replace(microsecond=0).isoformat()
    return (f"generated by gva-scenarios {__version__} at {now}",)


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load_many(paths) -> GvaMatrix:
    return merge_all(load_gva_csv(p) for p in paths)


def cmd_nowcast(args) -> int:
    base = _load_many(args.base)
    shocks = load_shock_csv(args.shocks)
    missing = missing_quarters(base, args.fy)
    full = complete_fiscal_year(base, args.fy, shocks)
    year = full.select_years(args.fy)
    _write(serialize_gva_csv(year, _stamp_lines(args)), args.out)

    fq = FiscalQuarter(args.fy, missing[0])
    print(f"estimated {fq} with shocks '{shocks.label}'")
    for s in SECTORS:
        print(f"{s.code},{format_level(year.value(s, fq))}")
    print(f"TOTAL,{format_level(quarter_total(year, TOTAL, fq))}")
    return EXIT_OK


def cmd_project(args) -> int:
    baseline = _load_many(args.baseline)
    sched = load_schedule_csv(args.schedule)
    projected = project_fiscal_year(baseline, args.baseline_fy, args.target_fy, sched)
    _write(serialize_gva_csv(projected, _stamp_lines(args)), args.out)
    return EXIT_OK


def _format_for(out: str | None, explicit: str | None) -> str:
    if explicit:
        return explicit
    if out and Path(out).suffix.lower() in (".md", ".markdown"):
        return "markdown"
    return "csv"


def cmd_growth(args) -> int:
    data = _load_many(args.data)
    table = build_growth_table(data, args.fy, default_rows(groups=args.groups))
    fmt = _format_for(args.out, args.format)
    text = render_growth_table(table, args.decimals, fmt)
    if fmt == "csv" and _stamp_lines(args):
        text = "".join(f"# {line}\n" for line in _stamp_lines(args)) + text
    _write(text, args.out)
    return EXIT_OK


def cmd_levels(args) -> int:
    data = _load_many(args.data)
    fmt = _format_for(args.out, args.format)
    _write(render_gva_table(data, args.fy, fmt), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    checks = validate()
    ok = all(c.passed for c in checks)
    if args.json:
        payload = {"passed": ok, "fixtures": str(fixture_dir()), "tables": [c.summary() for c in checks]}
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for c in checks:
            w = c.worst
            status = "PASS" if c.passed else "FAIL"
            print(
                f"{c.name:<20} {status}  max_dev={c.max_deviation:.4g}  "
                f"worst={w.row}/{w.col} expected {w.expected} got {w.actual} (tol {w.tolerance:g})"
            )
            for f in c.failures:
                print(f"    mismatch {c.name} {f.row}/{f.col}: expected {f.expected}, got {f.actual}")
        print(f"{sum(c.passed for c in checks)}/{len(checks)} tables passed")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_figures(args) -> int:
    run = run_pipeline()
    series = figure_series(run.scenario1, run.scenario2, (2019, 2020))
    for path in emit_plot_series(series, args.out):
        print(path)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    """Copy the active fixture set so it can be fed to the other commands."""
    src = fixture_dir()
    for sub in ("", "golden"):
        folder = src.joinpath(sub) if sub else src
        dest = Path(args.out, sub)
        dest.mkdir(parents=True, exist_ok=True)
        for entry in sorted(folder.iterdir(), key=lambda p: p.name):
            if entry.is_file() and entry.name.endswith(".csv"):
                target = dest / entry.name
                target.write_bytes(entry.read_bytes())
                print(target)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gva-scenarios", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nowcast", help="fill the one missing quarter of a fiscal year")
    p.add_argument("--base", nargs="+", required=True, help="GVA CSV(s): the incomplete year and the year before")
    p.add_argument("--fy", type=int, required=True, help="fiscal year start, e.g. 2019 for 2019-20")
    p.add_argument("--shocks", required=True, help="shock CSV (sector,growth)")
    p.add_argument("--out", required=True, help="completed fiscal-year CSV")
    p.add_argument("--stamp", action="store_true", help="add a provenance comment line")
    p.set_defaults(func=cmd_nowcast)

    p = sub.add_parser("project", help="project a fiscal year under a utilisation schedule")
    p.add_argument("--baseline", nargs="+", required=True)
    p.add_argument("--baseline-fy", type=int, required=True)
    p.add_argument("--target-fy", type=int, required=True)
    p.add_argument("--schedule", required=True, help="schedule CSV (sector,q1,q2,q3,q4)")
    p.add_argument("--out", help="projected-year CSV (default: stdout)")
    p.add_argument("--stamp", action="store_true")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("growth", help="quarterly and annual growth table")
    p.add_argument("--data", nargs="+", required=True, help="GVA CSVs, merged; must cover fy and fy-1")
    p.add_argument("--fy", type=int, required=True)
    p.add_argument("--decimals", type=int, choices=(0, 1), default=0)
    p.add_argument("--groups", action="store_true", help="append PRIMARY/SECONDARY/TERTIARY rows")
    p.add_argument("--format", choices=("csv", "markdown"), help="default: from --out suffix, else csv")
    p.add_argument("--out", help=".csv or .md (default: stdout)")
    p.add_argument("--stamp", action="store_true")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("levels", help="render a fiscal year as a sector-by-quarter level table")
    p.add_argument("--data", nargs="+", required=True)
    p.add_argument("--fy", type=int, required=True)
    p.add_argument("--format", choices=("csv", "markdown"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_levels)

    p = sub.add_parser("validate", help="re-derive the reference tables and compare with golden copies")
    p.add_argument("--json", action="store_true", help="machine-readable summary")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("figures", help="write the figure data series for both scenarios")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("fixtures", help="export the bundled fixture CSVs")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GvaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
