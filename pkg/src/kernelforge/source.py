"""Source units and diagnostics shared by every compiler stage."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Loc:
    line: int  # 1-based
    col: int   # 1-based

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


UNKNOWN_LOC = Loc(0, 0)


class SourceUnit:
    """A MiniCL source file plus an offset -> (line, column) map."""

    def __init__(self, text: str, path: str = "<input>"):
        self.path = path
        self.text = text
        # line_starts[i] is the offset of the first character of line i+1
        self._line_starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                self._line_starts.append(i + 1)

    def loc_at(self, offset: int) -> Loc:
        if offset < 0:
            offset = 0
        if offset > len(self.text):
            offset = len(self.text)
        line = bisect.bisect_right(self._line_starts, offset)
        col = offset - self._line_starts[line - 1] + 1
        return Loc(line, col)


@dataclass
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    loc: Loc = UNKNOWN_LOC

    def format(self, path: str = "") -> str:
        prefix = f"{path}:" if path else ""
        return f"{prefix}{self.loc}: {self.severity}: {self.message}"


class DiagnosticSink:
    def __init__(self) -> None:
        self.items: list[Diagnostic] = []

    def error(self, message: str, loc: Loc = UNKNOWN_LOC) -> None:
        self.items.append(Diagnostic("error", message, loc))

    def warning(self, message: str, loc: Loc = UNKNOWN_LOC) -> None:
        self.items.append(Diagnostic("warning", message, loc))

    @property
    def has_errors(self) -> bool:
        return any(d.severity == "error" for d in self.items)

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.items if d.severity == "error"]


class FrontendError(Exception):
    """Raised by convenience wrappers when parsing or type checking fails."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(d.format() for d in diagnostics) or "frontend error")
        self.diagnostics = diagnostics


class ConfigError(Exception):
    """Bad manifest, latency table, or other configuration input."""


@dataclass
class SimFault(Exception):
    """A runtime fault raised by the simulator or the reference interpreter."""

    kind: str  # "watchdog" | "oob" | "divergent-sync" | "deadlock" | "svm" | "semantic"
    message: str
    detail: dict = field(default_factory=dict)

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"
