"""Year-over-year growth for sectors and groups, and the growth-table layout."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from .core import (
    PRIMARY,
    QUARTERS,
    SECONDARY,
    SECTORS,
    TERTIARY,
    TOTAL,
    FiscalQuarter,
    GvaMatrix,
    SectorGroup,
    SectorId,
    annual_total,
    as_group,
    quarter_total,
)
from .errors import DegenerateBase, GvaError, PartialYear

ANNUAL = "ANNUAL"
COLUMNS = (*QUARTERS, ANNUAL)
ZERO_BASE = 1e-9

Row = SectorId | SectorGroup


def row_label(row: Row) -> str:
    return row.code if isinstance(row, SectorId) else row.name


def _ratio_growth(level: float, prior: float, what: str) -> float:
    if abs(prior) < ZERO_BASE:
        raise DegenerateBase(f"prior level {prior!r} for {what} is too close to zero")
    return level / prior - 1.0


def yoy_growth(m: GvaMatrix, who: Row, fq: FiscalQuarter) -> float:
    group = as_group(who)
    level = quarter_total(m, group, fq)
    prior = quarter_total(m, group, fq.prev_year())
    return _ratio_growth(level, prior, f"{group.name} at {fq.prev_year()}")


def annual_growth(m: GvaMatrix, who: Row, fy_start: int) -> float:
    group = as_group(who)
    level = annual_total(m, group, fy_start)
    prior = annual_total(m, group, fy_start - 1)
    return _ratio_growth(level, prior, f"{group.name} in FY{fy_start - 1}")


@dataclass(frozen=True)
class GrowthTable:
    """Growth fractions keyed ``(row, column)``, column in 1..4 or ``ANNUAL``.

    Cells are ``>= -1``: a zero capacity factor produces exactly -100%.
    """

    rows: tuple
    cells: dict = field(repr=False)
    target_fy: int
    label: str = ""

    def __post_init__(self) -> None:
        for (row, col), g in self.cells.items():
            if not math.isfinite(g) or g < -1:
                raise GvaError(f"growth cell {row_label(row)}/{col} out of range: {g!r}")
        for row in self.rows:
            if all((row, q) in self.cells for q in QUARTERS) and (row, ANNUAL) not in self.cells:
                raise GvaError(f"row {row_label(row)} has four quarters but no annual cell")

    def __getitem__(self, key) -> float:
        return self.cells[key]

    def row(self, row: Row) -> list[float]:
        return [self.cells[(row, c)] for c in COLUMNS]


def default_rows(groups: bool = False) -> list[Row]:
    rows: list[Row] = [*SECTORS, TOTAL]
    if groups:
        rows += [PRIMARY, SECONDARY, TERTIARY]
    return rows


def build_growth_table(
    m: GvaMatrix, target_fy: int, rows: Sequence[Row] | None = None, label: str = ""
) -> GrowthTable:
    rows = tuple(default_rows() if rows is None else rows)
    members = set().union(*(as_group(r).members for r in rows))
    for fy in (target_fy, target_fy - 1):
        missing = m.missing_cells(fy, members)
        if missing:
            raise PartialYear(fy, missing)
    cells = {}
    for row in rows:
        for q in QUARTERS:
            cells[(row, q)] = yoy_growth(m, row, FiscalQuarter(target_fy, q))
        cells[(row, ANNUAL)] = annual_growth(m, row, target_fy)
    return GrowthTable(rows, cells, target_fy, label)


def plot_series(m: GvaMatrix, group: Row, fys: Sequence[int]) -> list[tuple[str, float]]:
    """Quarterly YoY growth for each listed year, in chronological order."""
    out = []
    for fy in sorted(fys):
        for q in QUARTERS:
            fq = FiscalQuarter(fy, q)
            out.append((fq.label, yoy_growth(m, group, fq)))
    return out
