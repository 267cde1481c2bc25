"""Project a fiscal year by scaling a baseline year with utilisation factors."""

from __future__ import annotations

from dataclasses import dataclass

from .core import BUILTIN_GROUPS, QUARTERS, SECTORS, FiscalQuarter, GvaMatrix, annual_total, quarter_total
from .errors import GvaError
from .ingest import UtilizationSchedule


def project_fiscal_year(
    baseline: GvaMatrix, baseline_fy: int, target_fy: int, sched: UtilizationSchedule
) -> GvaMatrix:
    """Return the 32 cells of ``target_fy``: ``baseline[s, q] * sched[s, q]``.

    The schedule is indexed by quarter-of-year, so the same schedule applies
    to any baseline year. No renormalisation is applied.
    """
    if target_fy == baseline_fy:
        raise GvaError(f"target year {target_fy} must differ from the baseline year")
    baseline.require_year(baseline_fy)
    entries = {}
    for s in SECTORS:
        for q in QUARTERS:
            level = baseline.value(s, FiscalQuarter(baseline_fy, q))
            entries[(s, FiscalQuarter(target_fy, q))] = level * sched.factor(s, q)
    label = sched.label or "unnamed schedule"
    note = f"FY{target_fy} projected from FY{baseline_fy} under '{label}'"
    return GvaMatrix(entries, [note], estimated=entries.keys())


@dataclass(frozen=True)
class ScenarioComparison:
    """Differences ``b - a`` and ratios ``b / a`` for one fiscal year.

    ``cells`` is keyed ``(sector, q)``; ``quarters`` ``(group, q)``;
    ``annual`` by sector code or built-in group name.
    """

    fy_start: int
    cell_diff: dict
    cell_ratio: dict
    quarter_diff: dict
    quarter_ratio: dict
    annual_diff: dict
    annual_ratio: dict


def _ratio(b: float, a: float) -> float:
    if a == 0:
        return 1.0 if b == 0 else float("inf")
    return b / a


def compare_scenarios(a: GvaMatrix, b: GvaMatrix, fy: int) -> ScenarioComparison:
    a.require_year(fy)
    b.require_year(fy)
    cell_diff, cell_ratio = {}, {}
    for s in SECTORS:
        for q in QUARTERS:
            fq = FiscalQuarter(fy, q)
            va, vb = a.value(s, fq), b.value(s, fq)
            cell_diff[(s, q)] = vb - va
            cell_ratio[(s, q)] = _ratio(vb, va)
    quarter_diff, quarter_ratio = {}, {}
    annual_diff, annual_ratio = {}, {}
    for name, group in BUILTIN_GROUPS.items():
        for q in QUARTERS:
            fq = FiscalQuarter(fy, q)
            ta, tb = quarter_total(a, group, fq), quarter_total(b, group, fq)
            quarter_diff[(name, q)] = tb - ta
            quarter_ratio[(name, q)] = _ratio(tb, ta)
        ta, tb = annual_total(a, group, fy), annual_total(b, group, fy)
        annual_diff[name] = tb - ta
        annual_ratio[name] = _ratio(tb, ta)
    for s in SECTORS:
        ta, tb = annual_total(a, s, fy), annual_total(b, s, fy)
        annual_diff[s.code] = tb - ta
        annual_ratio[s.code] = _ratio(tb, ta)
    return ScenarioComparison(fy, cell_diff, cell_ratio, quarter_diff, quarter_ratio, annual_diff, annual_ratio)
