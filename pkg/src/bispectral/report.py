"""Run reports: human text and JSON with exact values as strings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .expkernel import ExpKernel
from .matrix import MatRF
from .scalar import scalar_text
from .solver import matpoly_vector

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2


@dataclass
class Residual:
    check: str
    entries: List[dict] = field(default_factory=list)  # {"row", "col", "value"} for nonzero entries

    @property
    def zero(self) -> bool:
        return not self.entries

    def as_dict(self) -> dict:
        return {"check": self.check, "zero": self.zero, "nonzero": self.entries}


def residual_of(check: str, diff) -> Residual:
    """Nonzero entries of a difference (ExpKernel or MatRF) as exact strings."""
    m = diff.m if isinstance(diff, ExpKernel) else diff
    out = Residual(check)
    for r, c, v in m.iter_entries():
        if v:
            out.entries.append({"row": r, "col": c, "value": v.to_text()})
    return out


def matrix_strings(m: MatRF) -> List[List[str]]:
    return [[v.to_text() for v in row] for row in m.entries]


def coefficient_lists(m: MatRF, var: str, deg: int) -> List[List[List[str]]]:
    """Polynomial matrix as a list of per-degree coefficient matrices."""
    vec = matpoly_vector(m, var, deg)
    n, k = m.rows, m.cols
    return [[[scalar_text(vec[(d * n + r) * k + c]) for c in range(k)] for r in range(n)]
            for d in range(deg + 1)]


@dataclass
class Report:
    command: str
    status: str = "ok"
    exit_code: int = EXIT_OK
    residuals: List[Residual] = field(default_factory=list)
    dims: Dict[str, int] = field(default_factory=dict)
    basis: List[object] = field(default_factory=list)
    bounds_used: List[dict] = field(default_factory=list)
    ms: int = 0
    lines: List[str] = field(default_factory=list)  # human-readable body
    extra: Dict[str, object] = field(default_factory=dict)

    def say(self, text: str = ""):
        self.lines.append(text)

    def fail(self, status: str):
        self.status = status
        self.exit_code = EXIT_FALSE

    def as_dict(self) -> dict:
        out = {
            "command": self.command,
            "status": self.status,
            "residuals": [r.as_dict() for r in self.residuals],
            "dims": self.dims,
            "basis": self.basis,
            "bounds_used": self.bounds_used,
            "ms": self.ms,
        }
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self, quiet: bool = False) -> str:
        if quiet:
            return f"{self.command}: {self.status}"
        body = list(self.lines)
        body.append(f"status: {self.status} ({self.ms} ms)")
        return "\n".join(body)


def error_report(command: str, message: str, code: int = EXIT_USAGE, status: Optional[str] = None) -> Report:
    rep = Report(command, status or "error", code)
    rep.extra["error"] = message
    rep.say(f"error: {message}")
    return rep
