"""CSV formats for GVA series, utilisation schedules and shock vectors.

Three long-lived formats, all UTF-8, LF or CRLF on input, LF on output,
``#`` comment lines allowed anywhere:

* GVA series: ``fy_start,quarter,sector,value``
* utilisation schedule: ``sector,q1,q2,q3,q4``
* shock vector: ``sector,growth``

The bundled fixture directory (``data/`` inside the package, or the
directory named by ``GVA_SCENARIO_FIXTURES``) holds files in these formats
plus golden tables under ``golden/``.
"""

from __future__ import annotations

import io
import math
import os
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import IO, Union

from .core import QUARTERS, SECTORS, FiscalQuarter, GvaMatrix, SectorId
from .errors import (
    BadGrowth,
    BadQuarter,
    BadYear,
    DuplicateKey,
    ExtraRow,
    FactorOutOfRange,
    GvaError,
    MalformedRow,
    MissingSector,
    NonPositiveValue,
    ParseError,
    UnknownSector,
)

GVA_HEADER = "fy_start,quarter,sector,value"
SCHEDULE_HEADER = "sector,q1,q2,q3,q4"
SHOCK_HEADER = "sector,growth"
TABLE_HEADER = "sector,q1,q2,q3,q4,total"
GOLDEN_HEADER = "row,q1,q2,q3,q4,total"

MAX_FACTOR = 2.0
FIXTURES_ENV = "GVA_SCENARIO_FIXTURES"

_NUMBER = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_YEAR = re.compile(r"\d{4}")

Stream = Union[IO[str], IO[bytes]]


@dataclass(frozen=True)
class ShockSpec:
    """Per-sector growth applied to the same quarter one year earlier."""

    shocks: Mapping
    label: str = ""

    def __post_init__(self) -> None:
        shocks = dict(self.shocks)
        missing = [s.code for s in SECTORS if s not in shocks]
        if missing or len(shocks) != len(SECTORS):
            raise GvaError(f"shock spec {self.label!r} must cover all 8 sectors; missing {missing}")
        for s, g in shocks.items():
            g = float(g)
            if not math.isfinite(g) or g <= -1:
                raise GvaError(f"shock for {s} must be finite and > -1, got {g!r}")
            shocks[s] = g
        object.__setattr__(self, "shocks", MappingProxyType(shocks))

    def __getitem__(self, sector: SectorId) -> float:
        return self.shocks[sector]

    @classmethod
    def uniform(cls, growth: float, label: str = "", **overrides: float) -> "ShockSpec":
        """Same growth for every sector, with optional per-code overrides (``AGR=0.0``)."""
        shocks = {s: growth for s in SECTORS}
        for code, g in overrides.items():
            shocks[SectorId[code]] = g
        return cls(shocks, label)


@dataclass(frozen=True)
class UtilizationSchedule:
    """Capacity factor per (sector, quarter-of-year); complete 8x4 grid."""

    factors: Mapping
    label: str = ""

    def __post_init__(self) -> None:
        factors = {}
        for s in SECTORS:
            for q in QUARTERS:
                try:
                    u = float(self.factors[(s, q)])
                except KeyError:
                    raise GvaError(f"schedule {self.label!r} lacks a factor for {s}/Q{q}") from None
                if not math.isfinite(u) or u < 0 or u > MAX_FACTOR:
                    raise GvaError(f"factor for {s}/Q{q} must lie in [0, {MAX_FACTOR}], got {u!r}")
                factors[(s, q)] = u
        if len(self.factors) != len(factors):
            raise GvaError(f"schedule {self.label!r} has keys outside the 8x4 grid")
        object.__setattr__(self, "factors", MappingProxyType(factors))

    def factor(self, sector: SectorId, q: int) -> float:
        return self.factors[(sector, q)]

    @classmethod
    def from_rows(cls, rows: Mapping, label: str = "") -> "UtilizationSchedule":
        """Build from ``{sector: (u1, u2, u3, u4)}``."""
        return cls({(s, q): row[q - 1] for s, row in rows.items() for q in QUARTERS}, label)

    @classmethod
    def identity(cls, label: str = "identity") -> "UtilizationSchedule":
        return cls({(s, q): 1.0 for s in SECTORS for q in QUARTERS}, label)


@dataclass(frozen=True)
class GoldenTable:
    """A printed table kept as the literal strings that appear in print.

    Rows are sector codes plus ``TOTAL``; columns are ``q1``..``q4`` and
    ``total``. Growth tables hold percentages (``-55``, ``2.8``).
    """

    name: str
    cells: Mapping = field(repr=False)
    rows: tuple = ()

    COLUMNS = ("q1", "q2", "q3", "q4", "total")

    def literal(self, row: str, col: str) -> str:
        return self.cells[(row, col)]

    def value(self, row: str, col: str) -> float:
        return float(self.cells[(row, col)])

    def decimals(self, row: str, col: str) -> int:
        text = self.cells[(row, col)]
        return len(text.split(".", 1)[1]) if "." in text else 0


# --- number formatting -----------------------------------------------------


def format_number(v: float) -> str:
    """Shortest decimal literal that round-trips ``v`` exactly, no exponent."""
    s = repr(float(v))
    if "e" in s or "E" in s:
        s = format(Decimal(s), "f")
    if s.endswith(".0"):
        s = s[:-2]
    return s


def _parse_number(token: str, line_no: int, what: str) -> float:
    token = token.strip()
    if not _NUMBER.fullmatch(token):
        raise MalformedRow(f"{what} {token!r} is not a decimal number", line_no)
    v = float(token)
    if not math.isfinite(v):
        raise MalformedRow(f"{what} {token!r} is not finite", line_no)
    return v


def _parse_sector(token: str, line_no: int) -> SectorId:
    try:
        return SectorId.parse(token)
    except KeyError:
        raise UnknownSector(f"unknown sector {token.strip()!r}", line_no) from None


# --- line handling ---------------------------------------------------------


def _read_text(stream: Stream) -> str:
    data = stream.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedRow(f"input is not UTF-8 ({exc.reason} at byte {exc.start})") from None
    return data.removeprefix("﻿")


def _records(stream: Stream, header: str) -> list[tuple[int, list[str]]]:
    """Split into (line_no, fields) after checking the header line."""
    seen_header = False
    out = []
    for line_no, raw in enumerate(_read_text(stream).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not seen_header:
            if line != header:
                raise MalformedRow(f"expected header {header!r}, got {line!r}", line_no)
            seen_header = True
            continue
        out.append((line_no, line.split(",")))
    if not seen_header:
        raise MalformedRow(f"missing header {header!r}")
    return out


def _expect_fields(fields: list[str], n: int, line_no: int) -> None:
    if len(fields) != n:
        raise MalformedRow(f"expected {n} fields, got {len(fields)}", line_no)


# --- GVA series ------------------------------------------------------------


def parse_gva_csv(stream: Stream, note: str | None = None) -> GvaMatrix:
    entries: dict = {}
    for line_no, fields in _records(stream, GVA_HEADER):
        _expect_fields(fields, 4, line_no)
        fy_tok, q_tok, sector_tok, value_tok = (f.strip() for f in fields)
        if not _YEAR.fullmatch(fy_tok):
            raise BadYear(f"fiscal year {fy_tok!r} is not a 4-digit year", line_no)
        fy = int(fy_tok)
        if fy < 2011:
            raise BadYear(f"fiscal year {fy} precedes 2011", line_no)
        if q_tok not in ("1", "2", "3", "4"):
            raise BadQuarter(f"quarter {q_tok!r} not in 1..4", line_no)
        sector = _parse_sector(sector_tok, line_no)
        value = _parse_number(value_tok, line_no, "value")
        if value <= 0:
            raise NonPositiveValue(f"value {value_tok} for {sector} must be > 0", line_no)
        key = (sector, FiscalQuarter(fy, int(q_tok)))
        if key in entries:
            raise DuplicateKey(f"duplicate entry for {sector} at {key[1]}", line_no)
        entries[key] = value
    return GvaMatrix(entries, [note] if note else [])


def serialize_gva_csv(m: GvaMatrix, header_lines: tuple[str, ...] = ()) -> str:
    lines = [f"# {h}" for h in header_lines]
    lines.append(GVA_HEADER)
    for (sector, fq), v in m.sorted_items():
        lines.append(f"{fq.fy_start},{fq.q},{sector.code},{format_number(v)}")
    return "\n".join(lines) + "\n"


def parse_gva_table_csv(stream: Stream, fy_start: int) -> GvaMatrix:
    """Read back a wide table written by ``report.render_gva_table(fmt="csv")``.

    The ``TOTAL`` row and the ``total`` column are derived and skipped.
    """
    entries = {}
    for line_no, fields in _records(stream, TABLE_HEADER):
        _expect_fields(fields, 6, line_no)
        if fields[0].strip() == "TOTAL":
            continue
        sector = _parse_sector(fields[0], line_no)
        for q in QUARTERS:
            key = (sector, FiscalQuarter(fy_start, q))
            if key in entries:
                raise DuplicateKey(f"duplicate row for {sector}", line_no)
            entries[key] = _parse_number(fields[q], line_no, f"Q{q} value")
    return GvaMatrix(entries)


# --- schedules and shocks --------------------------------------------------


def _sector_rows(records, n_fields: int) -> dict[SectorId, tuple[int, list[str]]]:
    rows: dict[SectorId, tuple[int, list[str]]] = {}
    for line_no, fields in records:
        _expect_fields(fields, n_fields, line_no)
        sector = _parse_sector(fields[0], line_no)
        if len(rows) == len(SECTORS):
            raise ExtraRow(f"more than {len(SECTORS)} data rows", line_no)
        if sector in rows:
            raise DuplicateKey(f"second row for {sector}", line_no)
        rows[sector] = (line_no, [f.strip() for f in fields[1:]])
    for s in SECTORS:
        if s not in rows:
            raise MissingSector(f"no row for sector {s.code}")
    return rows


def parse_schedule_csv(stream: Stream, label: str = "") -> UtilizationSchedule:
    rows = _sector_rows(_records(stream, SCHEDULE_HEADER), 5)
    factors = {}
    for sector, (line_no, values) in rows.items():
        for q, token in zip(QUARTERS, values):
            u = _parse_number(token, line_no, f"Q{q} factor")
            if u < 0 or u > MAX_FACTOR:
                raise FactorOutOfRange(f"factor {token} for {sector}/Q{q} outside [0, {MAX_FACTOR:g}]", line_no)
            factors[(sector, q)] = u
    return UtilizationSchedule(factors, label)


def serialize_schedule_csv(sched: UtilizationSchedule) -> str:
    lines = [SCHEDULE_HEADER]
    for s in SECTORS:
        lines.append(",".join([s.code] + [format_number(sched.factor(s, q)) for q in QUARTERS]))
    return "\n".join(lines) + "\n"


def parse_shock_csv(stream: Stream, label: str = "") -> ShockSpec:
    rows = _sector_rows(_records(stream, SHOCK_HEADER), 2)
    shocks = {}
    for sector, (line_no, (token,)) in rows.items():
        g = _parse_number(token, line_no, "growth")
        if g <= -1:
            raise BadGrowth(f"growth {token} for {sector} must be > -1", line_no)
        shocks[sector] = g
    return ShockSpec(shocks, label)


def serialize_shock_csv(spec: ShockSpec) -> str:
    lines = [SHOCK_HEADER] + [f"{s.code},{format_number(spec[s])}" for s in SECTORS]
    return "\n".join(lines) + "\n"


# --- golden tables ---------------------------------------------------------


def parse_golden_csv(stream: Stream, name: str) -> GoldenTable:
    cells = {}
    rows = []
    for line_no, fields in _records(stream, GOLDEN_HEADER):
        _expect_fields(fields, 6, line_no)
        row = fields[0].strip()
        if row in rows:
            raise DuplicateKey(f"second row {row!r}", line_no)
        rows.append(row)
        for col, token in zip(GoldenTable.COLUMNS, fields[1:]):
            token = token.strip()
            _parse_number(token, line_no, col)
            cells[(row, col)] = token
    return GoldenTable(name, MappingProxyType(cells), tuple(rows))


# --- file helpers ----------------------------------------------------------


def _load(path, parser, *args):
    path = Path(path)
    with path.open("rb") as fh:
        try:
            return parser(fh, *args)
        except ParseError as exc:
            raise exc.with_source(str(path)) from None


def load_gva_csv(path) -> GvaMatrix:
    return _load(path, parse_gva_csv, str(path))


def load_schedule_csv(path, label: str | None = None) -> UtilizationSchedule:
    return _load(path, parse_schedule_csv, label if label is not None else Path(path).stem)


def load_shock_csv(path, label: str | None = None) -> ShockSpec:
    return _load(path, parse_shock_csv, label if label is not None else Path(path).stem)


# --- bundled fixtures ------------------------------------------------------


def fixture_dir():
    """Directory holding fixture CSVs: ``$GVA_SCENARIO_FIXTURES`` or the packaged data."""
    override = os.environ.get(FIXTURES_ENV)
    if override:
        return Path(override)
    return resources.files("gva_scenarios").joinpath("data")


def _first_header(text: str) -> str:
    for line in text.splitlines():
        line = line.strip().removeprefix("﻿")
        if line and not line.startswith("#"):
            return line
    return ""


def _parse_any(text: str, name: str, source: str):
    header = _first_header(text)
    stream = io.StringIO(text)
    try:
        if header == GVA_HEADER:
            return parse_gva_csv(stream, f"fixture {name}")
        if header == SCHEDULE_HEADER:
            return parse_schedule_csv(stream, name)
        if header == SHOCK_HEADER:
            return parse_shock_csv(stream, name)
    except ParseError as exc:
        raise exc.with_source(source) from None
    raise MalformedRow(f"unrecognised header {header!r}").with_source(source)


def bundled_fixtures(directory=None) -> dict:
    """Load every fixture under ``directory`` (default: :func:`fixture_dir`).

    Series, schedules and shock specs are keyed by file stem; golden tables
    under ``golden/`` are keyed ``golden_<stem>``.
    """
    root = Path(directory) if directory is not None else fixture_dir()
    out: dict = {}
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.is_file() and entry.name.endswith(".csv"):
            stem = entry.name[: -len(".csv")]
            out[stem] = _parse_any(entry.read_text(encoding="utf-8"), stem, str(entry))
    golden = root.joinpath("golden")
    if golden.is_dir():
        for entry in sorted(golden.iterdir(), key=lambda p: p.name):
            if entry.is_file() and entry.name.endswith(".csv"):
                stem = entry.name[: -len(".csv")]
                try:
                    out[f"golden_{stem}"] = parse_golden_csv(io.StringIO(entry.read_text(encoding="utf-8")), stem)
                except ParseError as exc:
                    raise exc.with_source(str(entry)) from None
    return out
