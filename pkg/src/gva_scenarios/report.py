"""Text renderings of level tables, growth tables and figure data series.

Output is byte-stable: fixed-point numbers, ``.`` as decimal point, no
thousands separators, LF line endings, no timestamps.
"""

from __future__ import annotations

import decimal
from collections.abc import Mapping, Sequence
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .analytics import COLUMNS, GrowthTable, Row, plot_series, row_label
from .core import (
    PRIMARY,
    QUARTERS,
    SECONDARY,
    SECTORS,
    TERTIARY,
    TOTAL,
    FiscalQuarter,
    GvaMatrix,
    SectorId,
    annual_total,
    quarter_total,
)
from .ingest import TABLE_HEADER, format_number

FORMATS = ("csv", "markdown")
GROWTH_HEADER = "row,q1,q2,q3,q4,annual"
SERIES_HEADER = "quarter_label,growth_fraction"

_GROUP_TITLES = {
    "TOTAL": "Total Gross Value Added at Basic Price",
    "PRIMARY": "Primary Sector",
    "SECONDARY": "Secondary Sector",
    "TERTIARY": "Tertiary Sector",
}


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")


def format_level(v: float) -> str:
    return f"{v:.2f}"


def format_percent(g: float, decimals: int = 0) -> str:
    """Growth fraction as a percent string, rounded half away from zero.

    Rounding acts on the exact binary value of ``g``; ``-0`` prints as ``0``.
    """
    if decimals not in (0, 1):
        raise ValueError(f"decimals must be 0 or 1, got {decimals!r}")
    with decimal.localcontext() as ctx:
        ctx.prec = 120
        pct = (Decimal(g) * 100).quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_UP)
    if pct.is_zero():
        pct = abs(pct)
    return f"{pct}%"


def _title(row: Row) -> str:
    if isinstance(row, SectorId):
        return row.display_name
    return _GROUP_TITLES.get(row.name, row.name)


def _markdown(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |"]
    lines.append("| --- |" + " ---: |" * (len(header) - 1))
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return lines


def render_gva_table(m: GvaMatrix, fy: int, fmt: str = "csv") -> str:
    """Eight sector rows plus the total row, columns Q1..Q4 and annual total."""
    _check_format(fmt)
    m.require_year(fy)
    body = []
    flagged = False
    for s in SECTORS:
        cells = []
        for q in QUARTERS:
            text = format_level(m.value(s, FiscalQuarter(fy, q)))
            if fmt == "markdown" and m.is_estimated(s, FiscalQuarter(fy, q)):
                text += "*"
                flagged = True
            cells.append(text)
        cells.append(format_level(annual_total(m, s, fy)))
        body.append((s, cells))
    totals = [format_level(quarter_total(m, TOTAL, FiscalQuarter(fy, q))) for q in QUARTERS]
    totals.append(format_level(annual_total(m, TOTAL, fy)))
    body.append((TOTAL, totals))

    if fmt == "csv":
        lines = [TABLE_HEADER] + [",".join([row_label(r), *cells]) for r, cells in body]
    else:
        lines = _markdown(["Sector", "Q1", "Q2", "Q3", "Q4", "Total"], [[_title(r), *c] for r, c in body])
        if flagged:
            lines += ["", "\\* estimated or projected"]
    return "\n".join(lines) + "\n"


def render_growth_table(t: GrowthTable, decimals: int = 0, fmt: str = "csv") -> str:
    _check_format(fmt)
    body = [(r, [format_percent(t[(r, c)], decimals) for c in COLUMNS]) for r in t.rows]
    if fmt == "csv":
        lines = [GROWTH_HEADER] + [",".join([row_label(r), *cells]) for r, cells in body]
    else:
        lines = _markdown(["Sector", "Q1", "Q2", "Q3", "Q4", "Total"], [[_title(r), *c] for r, c in body])
    return "\n".join(lines) + "\n"


def render_series_csv(series: Sequence[tuple[str, float]]) -> str:
    lines = [SERIES_HEADER] + [f"{label},{format_number(g)}" for label, g in series]
    return "\n".join(lines) + "\n"


def figure_series(scenario1: GvaMatrix, scenario2: GvaMatrix, fys: Sequence[int] = (2019, 2020)) -> dict:
    """The figure data sets: total growth and the three sector groups per scenario.

    ``total`` carries scenario 1 and ``total_s2`` scenario 2; the group
    series are named ``<group>_s1`` / ``<group>_s2``.
    """
    out = {
        "total": plot_series(scenario1, TOTAL, fys),
        "total_s2": plot_series(scenario2, TOTAL, fys),
    }
    for group in (PRIMARY, SECONDARY, TERTIARY):
        name = group.name.lower()
        out[f"{name}_s1"] = plot_series(scenario1, group, fys)
        out[f"{name}_s2"] = plot_series(scenario2, group, fys)
    return out


def emit_plot_series(series_sets: Mapping[str, Sequence[tuple[str, float]]], prefix) -> list[Path]:
    """Write ``<prefix>/<name>.csv`` for every series; returns the paths written."""
    root = Path(prefix)
    written = []
    try:
        root.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot create output directory: {exc.strerror}", str(root)) from exc
    for name in sorted(series_sets):
        series = series_sets[name]
        if not series:
            raise ValueError(f"series {name!r} is empty")
        path = root / f"{name}.csv"
        try:
            with path.open("w", encoding="utf-8", newline="\n") as fh:
                fh.write(render_series_csv(series))
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write series file: {exc.strerror}", str(path)) from exc
        written.append(path)
    return written
