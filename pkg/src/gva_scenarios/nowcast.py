"""Fill one missing quarter from the same quarter a year earlier.

Each sector's level is the prior-year value scaled by ``1 + shock``. The
rule never chains: only the quarter directly one year back is consulted.
"""

from __future__ import annotations

from .core import QUARTERS, SECTORS, FiscalQuarter, GvaMatrix, merge
from .errors import MultipleMissing, NothingMissing, PartialYear
from .ingest import ShockSpec


def estimate_quarter(base: GvaMatrix, target: FiscalQuarter, shocks: ShockSpec) -> GvaMatrix:
    """Single-quarter matrix for ``target`` covering all eight sectors."""
    source = target.prev_year()
    entries = {(s, target): base.value(s, source) * (1.0 + shocks[s]) for s in SECTORS}
    label = shocks.label or "unnamed shocks"
    note = f"{target.label} estimated from {source.label} with shocks '{label}'"
    return GvaMatrix(entries, [note], estimated=entries.keys())


def missing_quarters(m: GvaMatrix, fy_start: int) -> list[int]:
    """Quarters of ``fy_start`` with no sector present.

    Raises ``PartialYear`` if some quarter holds only part of the sectors,
    since that cannot be filled without overwriting source data.
    """
    missing, partial = [], []
    for q in QUARTERS:
        fq = FiscalQuarter(fy_start, q)
        present = [s for s in SECTORS if (s, fq) in m]
        if not present:
            missing.append(q)
        elif len(present) < len(SECTORS):
            partial += [(s, q) for s in SECTORS if (s, fq) not in m]
    if partial:
        raise PartialYear(fy_start, partial)
    return missing


def complete_fiscal_year(base: GvaMatrix, fy_start: int, shocks: ShockSpec) -> GvaMatrix:
    missing = missing_quarters(base, fy_start)
    if not missing:
        raise NothingMissing(fy_start)
    if len(missing) > 1:
        raise MultipleMissing(fy_start, missing)
    estimate = estimate_quarter(base, FiscalQuarter(fy_start, missing[0]), shocks)
    out = merge(base, estimate)
    out.require_year(fy_start)
    return out
