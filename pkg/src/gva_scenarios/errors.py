"""Exception hierarchy.

Every error raised for bad input or a violated precondition derives from
:class:`GvaError`; the CLI maps that family to exit code 2.
"""

from __future__ import annotations


class GvaError(ValueError):
    """Base class for validation and precondition failures."""

    def __str__(self) -> str:
        return f"{type(self).__name__}: {super().__str__()}"


class MissingEntry(GvaError):
    def __init__(self, sector, fq):
        self.sector = sector
        self.fq = fq
        super().__init__(f"no value for {sector} at {fq}")


class PartialYear(GvaError):
    def __init__(self, fy_start: int, missing=()):
        self.fy_start = fy_start
        self.missing = tuple(missing)
        detail = ", ".join(f"{s}/Q{q}" for s, q in self.missing[:8])
        more = "" if len(self.missing) <= 8 else f" (+{len(self.missing) - 8} more)"
        suffix = f" (missing {detail}{more})" if detail else ""
        super().__init__(f"fiscal year {fy_start}-{(fy_start + 1) % 100:02d} is incomplete{suffix}")


class ConflictingEntry(GvaError):
    def __init__(self, sector, fq, v1: float, v2: float):
        self.sector = sector
        self.fq = fq
        self.values = (v1, v2)
        super().__init__(f"{sector} at {fq}: {v1!r} != {v2!r}")


class NothingMissing(GvaError):
    def __init__(self, fy_start: int):
        self.fy_start = fy_start
        super().__init__(f"fiscal year {fy_start} already has all four quarters")


class MultipleMissing(GvaError):
    def __init__(self, fy_start: int, quarters):
        self.fy_start = fy_start
        self.quarters = tuple(quarters)
        super().__init__(f"fiscal year {fy_start} is missing quarters {list(self.quarters)}; exactly one may be estimated")


class DegenerateBase(GvaError):
    """Prior-period level too close to zero to divide by."""


class ParseError(GvaError):
    """Malformed input file content. ``line_no`` is 1-based."""

    def __init__(self, message: str, line_no: int | None = None, source: str | None = None):
        self.line_no = line_no
        self.source = source
        self.detail = message
        super().__init__(self._render())

    def _render(self) -> str:
        where = self.source or "<input>"
        if self.line_no is not None:
            where = f"{where}:{self.line_no}"
        return f"{where}: {self.detail}"

    def with_source(self, source: str) -> "ParseError":
        self.source = source
        self.args = (self._render(),)
        return self


class MalformedRow(ParseError):
    pass


class UnknownSector(ParseError):
    pass


class BadQuarter(ParseError):
    pass


class BadYear(ParseError):
    pass


class NonPositiveValue(ParseError):
    pass


class DuplicateKey(ParseError):
    pass


class MissingSector(ParseError):
    pass


class ExtraRow(ParseError):
    pass


class FactorOutOfRange(ParseError):
    pass


class BadGrowth(ParseError):
    pass
