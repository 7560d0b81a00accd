"""Diagnostics and error types shared across the pipeline."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SourceLoc:
    """Position inside a source unit; 1-based line, 0-based column."""

    path: str = "<input>"
    line: int = 0
    col: int = 0

    def __str__(self) -> str:
        return f"{self.path}:{self.line}:{self.col}"


NOWHERE = SourceLoc()


@dataclass(frozen=True)
class Diagnostic:
    """One user-facing problem report.

    kind is one of "syntax", "unsupported", "type"; unsupported constructs
    are reported distinctly from plain syntax errors.
    """

    kind: str
    message: str
    loc: SourceLoc = NOWHERE

    def __str__(self) -> str:
        return f"{self.loc}: {self.kind} error: {self.message}"


class DiagnosticsError(Exception):
    """Raised by frontend phases; carries the collected diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in diagnostics))


class InternalError(Exception):
    """A soundness or plumbing bug inside the checker itself."""


class ResourceLimit(Exception):
    """Time or memory budget exceeded while deciding a query."""


@dataclass
class SourceUnit:
    """A source file plus a byte-offset -> line/column index."""

    path: str
    text: str
    line_starts: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.line_starts:
            starts = [0]
            for i, ch in enumerate(self.text):
                if ch == "\n":
                    starts.append(i + 1)
            self.line_starts = starts

    def loc(self, offset: int) -> SourceLoc:
        """Map a byte offset to a 1-based line / 0-based column pair."""
        starts = self.line_starts
        lo, hi = 0, len(starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if starts[mid] <= offset:
                lo = mid
            else:
                hi = mid - 1
        return SourceLoc(self.path, lo + 1, offset - starts[lo])
