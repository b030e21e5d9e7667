"""Non-fatal findings reported by validation passes."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

FATAL = "fatal"
WARNING = "warning"
INFO = "info"


@dataclass(frozen=True)
class Diagnostic:
    code: str  # short machine-readable kind, e.g. "measure-total"
    message: str
    severity: str = WARNING
    song: str = ""
    line: int = 0
    column: int = 0
    measure: Optional[int] = None
    onset: Optional[str] = None  # exact rational rendered as text
    expected: Optional[str] = None
    actual: Optional[str] = None

    @property
    def fatal(self) -> bool:
        return self.severity == FATAL

    def to_dict(self) -> dict:
        out = {}
        for key, value in asdict(self).items():
            if value is None or value == "":
                continue
            if key in ("line", "column") and value == 0:
                continue
            out[key] = value
        return out

    def __str__(self) -> str:
        where = self.song or "<song>"
        if self.line:
            where += f":{self.line}:{self.column}"
        if self.measure is not None:
            where += f" m{self.measure}"
        return f"{where}: {self.severity}: [{self.code}] {self.message}"
