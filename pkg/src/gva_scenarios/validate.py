"""Re-derive the reference tables from bundled fixtures and compare.

Six golden tables ship with the package (``data/golden``):

==========================  =================================  ==========================
golden file                 derived from                       tolerance
==========================  =================================  ==========================
``levels_2019_20``          Q1-Q3 actuals + Q4 nowcast         0.5 absolute
``growth_2019_20``          vs. reconstructed 2018-19          0.1pp after 1-dp rounding
``levels_2020_21_s1``       scenario 1 projection              0.01 absolute
``growth_2020_21_s1``       scenario 1 vs. 2019-20             exact after 0-dp rounding
``levels_2020_21_s2``       scenario 2 projection              half a printed unit
``growth_2020_21_s2``       scenario 2 vs. 2019-20             exact after 0-dp rounding
==========================  =================================  ==========================

The scenario-2 level table is printed at mixed precision, so each cell is
held to half a unit in its last printed digit; its grand total to 1.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import asdict, dataclass, field

from .analytics import ANNUAL, build_growth_table, row_label
from .core import TOTAL, FiscalQuarter, GvaMatrix, SectorId, annual_total, merge, quarter_total
from .errors import GvaError
from .ingest import GoldenTable, bundled_fixtures
from .nowcast import complete_fiscal_year
from .report import format_percent
from .scenario import project_fiscal_year

BASE_FY = 2019
TARGET_FY = 2020

_COLS = {"q1": 1, "q2": 2, "q3": 3, "q4": 4, "total": ANNUAL}


@dataclass(frozen=True)
class CellCheck:
    row: str
    col: str
    expected: str
    actual: str
    deviation: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.deviation <= self.tolerance


@dataclass
class TableCheck:
    name: str
    cells: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.cells) and all(c.ok for c in self.cells)

    @property
    def worst(self) -> CellCheck | None:
        if not self.cells:
            return None
        return max(self.cells, key=lambda c: (not c.ok, c.deviation - c.tolerance))

    @property
    def max_deviation(self) -> float:
        return max((c.deviation for c in self.cells), default=0.0)

    @property
    def failures(self) -> list:
        return [c for c in self.cells if not c.ok]

    def summary(self) -> dict:
        worst = self.worst
        return {
            "table": self.name,
            "passed": self.passed,
            "cells": len(self.cells),
            "max_deviation": self.max_deviation,
            "worst_cell": asdict(worst) if worst else None,
            "failures": [asdict(c) for c in self.failures],
        }


@dataclass(frozen=True)
class PipelineResult:
    """Matrices produced by the reference run.

    ``actuals`` holds 2018-19 and the completed 2019-20; each scenario
    matrix additionally holds its 2020-21 projection.
    """

    actuals: GvaMatrix
    scenario1: GvaMatrix
    scenario2: GvaMatrix


def _need(fixtures: dict, name: str):
    try:
        return fixtures[name]
    except KeyError:
        raise GvaError(f"fixture {name!r} is missing from the fixture set") from None


def run_pipeline(fixtures: dict | None = None) -> PipelineResult:
    fixtures = bundled_fixtures() if fixtures is None else fixtures
    base = merge(_need(fixtures, "actuals_2019_20_q1q3"), _need(fixtures, "actuals_2018_19"))
    actuals = complete_fiscal_year(base, BASE_FY, _need(fixtures, "shock_q4_fy2019"))
    baseline = actuals.select_years(BASE_FY)
    s1 = project_fiscal_year(baseline, BASE_FY, TARGET_FY, _need(fixtures, "scenario1"))
    s2 = project_fiscal_year(baseline, BASE_FY, TARGET_FY, _need(fixtures, "scenario2"))
    return PipelineResult(actuals, merge(actuals, s1), merge(actuals, s2))


def _row(label: str):
    return TOTAL if label == "TOTAL" else SectorId[label]


def _level(m: GvaMatrix, label: str, col: str, fy: int) -> float:
    row = _row(label)
    if col == "total":
        return annual_total(m, row, fy)
    return quarter_total(m, row, FiscalQuarter(fy, _COLS[col]))


def check_levels(
    name: str, golden: GoldenTable, m: GvaMatrix, fy: int, tolerance: Callable[[str, str], float]
) -> TableCheck:
    out = TableCheck(name)
    for label in golden.rows:
        for col in golden.COLUMNS:
            actual = _level(m, label, col, fy)
            dev = abs(actual - golden.value(label, col))
            out.cells.append(CellCheck(label, col, golden.literal(label, col), f"{actual:.4f}", dev, tolerance(label, col)))
    return out


def check_growth(name: str, golden: GoldenTable, m: GvaMatrix, fy: int, decimals: int, tolerance: float) -> TableCheck:
    rows = [_row(label) for label in golden.rows]
    table = build_growth_table(m, fy, rows)
    out = TableCheck(name)
    for row in rows:
        label = row_label(row)
        for col in golden.COLUMNS:
            shown = format_percent(table[(row, _COLS[col])], decimals)
            dev = abs(float(shown[:-1]) - golden.value(label, col))
            out.cells.append(CellCheck(label, col, golden.literal(label, col), shown, round(dev, 10), tolerance))
    return out


def _half_printed_unit(golden: GoldenTable) -> Callable[[str, str], float]:
    def tol(label: str, col: str) -> float:
        if (label, col) == ("TOTAL", "total"):
            return 1.0
        return 0.5 * 10.0 ** -golden.decimals(label, col) + 1e-6

    return tol


def validate(fixtures: dict | None = None) -> list[TableCheck]:
    fixtures = bundled_fixtures() if fixtures is None else fixtures
    run = run_pipeline(fixtures)
    g = {name: _need(fixtures, f"golden_{name}") for name in (
        "levels_2019_20", "growth_2019_20",
        "levels_2020_21_s1", "growth_2020_21_s1",
        "levels_2020_21_s2", "growth_2020_21_s2",
    )}
    return [
        check_levels("levels_2019_20", g["levels_2019_20"], run.actuals, BASE_FY, lambda r, c: 0.5),
        check_growth("growth_2019_20", g["growth_2019_20"], run.actuals, BASE_FY, 1, 0.1),
        check_levels("levels_2020_21_s1", g["levels_2020_21_s1"], run.scenario1, TARGET_FY, lambda r, c: 0.01),
        check_growth("growth_2020_21_s1", g["growth_2020_21_s1"], run.scenario1, TARGET_FY, 0, 0.0),
        check_levels("levels_2020_21_s2", g["levels_2020_21_s2"], run.scenario2, TARGET_FY, _half_printed_unit(g["levels_2020_21_s2"])),
        check_growth("growth_2020_21_s2", g["growth_2020_21_s2"], run.scenario2, TARGET_FY, 0, 0.0),
    ]

