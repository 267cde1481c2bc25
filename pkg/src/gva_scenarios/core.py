"""Sector/quarter domain types and the summation rules over GVA matrices.

Totals follow one fixed order so they are bit-reproducible: members are
summed within each built-in block (primary, secondary, tertiary) in
sector-enum order, the block subtotals are added left to right, and annual
totals add the four quarter totals Q1..Q4. Under this order the identity
``TOTAL == PRIMARY + SECONDARY + TERTIARY`` holds exactly in floating point,
and so does ``annual == Q1 + Q2 + Q3 + Q4``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from enum import Enum

from .errors import ConflictingEntry, GvaError, MissingEntry, PartialYear

MIN_FISCAL_YEAR = 2011
QUARTERS = (1, 2, 3, 4)


class SectorId(str, Enum):
    """The eight GVA sectors, declared in national-accounts row order."""

    AGR = "AGR"
    MIN = "MIN"
    MFG = "MFG"
    UTL = "UTL"
    CON = "CON"
    TRD = "TRD"
    FIN = "FIN"
    PUB = "PUB"

    @property
    def code(self) -> str:
        return self.value

    @property
    def display_name(self) -> str:
        return _DISPLAY_NAMES[self]

    @classmethod
    def parse(cls, token: str) -> "SectorId":
        """Look up a sector by its code; raises ``KeyError`` for unknown tokens."""
        return cls[token.strip()]

    def __str__(self) -> str:
        return self.value


_DISPLAY_NAMES = {
    SectorId.AGR: "Agriculture, Forestry and Fishing",
    SectorId.MIN: "Mining & Quarrying",
    SectorId.MFG: "Manufacturing",
    SectorId.UTL: "Electricity, Gas, Water Supply & Other Utility",
    SectorId.CON: "Construction",
    SectorId.TRD: "Trade, Hotels, Transport, Communication and Broadcasting",
    SectorId.FIN: "Financial, Real Estate and Professional Services",
    SectorId.PUB: "Public Administration, Defence and Other Services",
}

SECTORS: tuple[SectorId, ...] = tuple(SectorId)
_RANK = {s: i for i, s in enumerate(SECTORS)}


@dataclass(frozen=True, order=True)
class FiscalQuarter:
    """Indian fiscal-year quarter; ``fy_start=2019`` is FY 2019-20, ``q=1`` is Apr-Jun."""

    fy_start: int
    q: int

    def __post_init__(self) -> None:
        if isinstance(self.q, bool) or self.q not in QUARTERS:
            raise GvaError(f"quarter must be in 1..4, got {self.q!r}")
        if isinstance(self.fy_start, bool) or not isinstance(self.fy_start, int):
            raise GvaError(f"fiscal year must be an integer, got {self.fy_start!r}")
        if self.fy_start < MIN_FISCAL_YEAR:
            raise GvaError(f"fiscal year {self.fy_start} precedes {MIN_FISCAL_YEAR}")

    def prev_year(self) -> "FiscalQuarter":
        return FiscalQuarter(self.fy_start - 1, self.q)

    def next_year(self) -> "FiscalQuarter":
        return FiscalQuarter(self.fy_start + 1, self.q)

    @property
    def label(self) -> str:
        return f"{self.fy_start}Q{self.q}"

    def __str__(self) -> str:
        return f"FY{fy_label(self.fy_start)} Q{self.q}"


def fy_label(fy_start: int) -> str:
    return f"{fy_start}-{(fy_start + 1) % 100:02d}"


@dataclass(frozen=True)
class SectorGroup:
    name: str
    members: frozenset

    def __post_init__(self) -> None:
        members = frozenset(self.members)
        if not members:
            raise GvaError(f"sector group {self.name!r} has no members")
        bad = [m for m in members if not isinstance(m, SectorId)]
        if bad:
            raise GvaError(f"sector group {self.name!r} has non-sector members {bad!r}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, sector: SectorId) -> "SectorGroup":
        return cls(sector.code, frozenset({sector}))

    def ordered(self) -> tuple[SectorId, ...]:
        return tuple(sorted(self.members, key=_RANK.__getitem__))

    def __str__(self) -> str:
        return self.name


PRIMARY = SectorGroup("PRIMARY", frozenset({SectorId.AGR, SectorId.MIN}))
SECONDARY = SectorGroup("SECONDARY", frozenset({SectorId.MFG, SectorId.UTL, SectorId.CON}))
TERTIARY = SectorGroup("TERTIARY", frozenset({SectorId.TRD, SectorId.FIN, SectorId.PUB}))
TOTAL = SectorGroup("TOTAL", frozenset(SECTORS))

BUILTIN_GROUPS = {g.name: g for g in (PRIMARY, SECONDARY, TERTIARY, TOTAL)}
_BLOCKS = (PRIMARY, SECONDARY, TERTIARY)


def as_group(who: SectorId | SectorGroup) -> SectorGroup:
    if isinstance(who, SectorGroup):
        return who
    if isinstance(who, SectorId):
        return SectorGroup.of(who)
    raise TypeError(f"expected SectorId or SectorGroup, got {type(who).__name__}")


Key = tuple[SectorId, FiscalQuarter]


class GvaMatrix(Mapping):
    """Immutable map ``(SectorId, FiscalQuarter) -> level``.

    ``estimated`` holds the keys produced by a nowcast or projection rather
    than read from source data; reports mark them. Levels must be finite and
    non-negative (a zero-utilisation projection legitimately yields zero).
    """

    __slots__ = ("_entries", "_notes", "_estimated")

    def __init__(
        self,
        entries: Mapping[Key, float] | Iterable[tuple[Key, float]] = (),
        notes: Iterable[str] = (),
        estimated: Iterable[Key] = (),
    ):
        data: dict[Key, float] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for key, value in items:
            sector, fq = key
            if not isinstance(sector, SectorId) or not isinstance(fq, FiscalQuarter):
                raise GvaError(f"bad matrix key {key!r}")
            value = float(value)
            if not math.isfinite(value) or value < 0:
                raise GvaError(f"level for {sector} at {fq} must be finite and >= 0, got {value!r}")
            data[(sector, fq)] = value
        est = frozenset(estimated)
        stray = est - data.keys()
        if stray:
            raise GvaError(f"estimated flags on absent entries: {sorted(map(str, stray))}")
        self._entries = data
        self._notes = tuple(notes)
        self._estimated = est

    def __getitem__(self, key: Key) -> float:
        return self._entries[key]

    def __iter__(self) -> Iterator[Key]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        years = ", ".join(map(str, self.fiscal_years()))
        return f"GvaMatrix({len(self)} entries, years=[{years}])"

    @property
    def notes(self) -> tuple[str, ...]:
        return self._notes

    @property
    def estimated(self) -> frozenset:
        return self._estimated

    def is_estimated(self, sector: SectorId, fq: FiscalQuarter) -> bool:
        return (sector, fq) in self._estimated

    def value(self, sector: SectorId, fq: FiscalQuarter) -> float:
        try:
            return self._entries[(sector, fq)]
        except KeyError:
            raise MissingEntry(sector, fq) from None

    def fiscal_years(self) -> list[int]:
        return sorted({fq.fy_start for _, fq in self._entries})

    def missing_cells(self, fy_start: int, sectors: Iterable[SectorId] = SECTORS) -> list[tuple[SectorId, int]]:
        return [
            (s, q)
            for s in sorted(sectors, key=_RANK.__getitem__)
            for q in QUARTERS
            if (s, FiscalQuarter(fy_start, q)) not in self._entries
        ]

    def is_complete(self, fy_start: int, sectors: Iterable[SectorId] = SECTORS) -> bool:
        return not self.missing_cells(fy_start, sectors)

    def partial_years(self) -> list[int]:
        """Fiscal years present in the matrix but lacking some sector-quarter."""
        return [fy for fy in self.fiscal_years() if not self.is_complete(fy)]

    def require_year(self, fy_start: int, sectors: Iterable[SectorId] = SECTORS) -> None:
        missing = self.missing_cells(fy_start, sectors)
        if missing:
            raise PartialYear(fy_start, missing)

    def select_years(self, *fys: int) -> "GvaMatrix":
        keep = set(fys)
        entries = {k: v for k, v in self._entries.items() if k[1].fy_start in keep}
        return GvaMatrix(entries, self._notes, self._estimated & entries.keys())

    def scaled(self, c: float) -> "GvaMatrix":
        return GvaMatrix({k: v * c for k, v in self._entries.items()}, self._notes, self._estimated)

    def sorted_items(self) -> list[tuple[Key, float]]:
        return sorted(self._entries.items(), key=lambda kv: (kv[0][1], _RANK[kv[0][0]]))


def _fold(values: Iterable[float]) -> float:
    total = 0.0
    for v in values:
        total += v
    return total


def quarter_total(m: GvaMatrix, group: SectorGroup | SectorId, fq: FiscalQuarter) -> float:
    group = as_group(group)
    subtotals = []
    for block in _BLOCKS:
        members = [s for s in block.ordered() if s in group.members]
        if members:
            subtotals.append(_fold(m.value(s, fq) for s in members))
    return _fold(subtotals)


def annual_total(m: GvaMatrix, group: SectorGroup | SectorId, fy_start: int) -> float:
    group = as_group(group)
    m.require_year(fy_start, group.members)
    return _fold(quarter_total(m, group, FiscalQuarter(fy_start, q)) for q in QUARTERS)


def _close(a: float, b: float, rel: float = 1e-12) -> bool:
    return a == b or abs(a - b) <= rel * max(abs(a), abs(b))


def merge(a: GvaMatrix, b: GvaMatrix) -> GvaMatrix:
    """Union of two matrices; overlapping keys must agree to relative 1e-12."""
    entries = dict(a.items())
    for key, v in b.items():
        if key in entries:
            if not _close(entries[key], v):
                raise ConflictingEntry(key[0], key[1], entries[key], v)
            continue
        entries[key] = v
    notes = list(a.notes)
    notes += [n for n in b.notes if n not in notes]
    return GvaMatrix(entries, notes, a.estimated | b.estimated)


def merge_all(matrices: Iterable[GvaMatrix]) -> GvaMatrix:
    out = GvaMatrix()
    for m in matrices:
        out = merge(out, m)
    return out
