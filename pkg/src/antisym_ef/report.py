"""Machine-readable run reports shared by the command-line workflows."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Residual:
    """A named number checked against a tolerance.

    ``mode="abs"`` passes when ``|value| <= tolerance``; ``mode="upper"``
    passes when ``value <= tolerance`` (one-sided inequalities, written so
    that a violation is positive).
    """

    name: str
    value: float
    tolerance: float
    mode: str = "abs"

    @property
    def passed(self) -> bool:
        v = abs(self.value) if self.mode == "abs" else self.value
        return bool(v <= self.tolerance)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "value": float(self.value),
            "tolerance": float(self.tolerance),
            "mode": self.mode,
            "pass": self.passed,
        }


@dataclass
class RunReport:
    command: str
    parameters: dict[str, Any]
    seed: int
    results: dict[str, Any] = field(default_factory=dict)
    residuals: list[Residual] = field(default_factory=list)
    wall_time_ms: int | None = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.residuals)

    def add(self, name: str, value: float, tolerance: float, mode: str = "abs") -> Residual:
        r = Residual(name, float(value), float(tolerance), mode)
        self.residuals.append(r)
        return r

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "results": self.results,
            "residuals": [r.to_json() for r in self.residuals],
            "pass": self.passed,
            "wall_time_ms": self.wall_time_ms,
        }

    def dumps(self, fmt: str = "json") -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, allow_nan=False) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["name", "value", "tolerance", "pass"])
            for r in self.residuals:
                w.writerow([r.name, repr(r.value), repr(r.tolerance), str(r.passed).lower()])
            return buf.getvalue()
        raise ValueError(f"unknown format {fmt!r}")
