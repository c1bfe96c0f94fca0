"""Check results and report assembly shared by every verification routine."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

PASS, FAIL, INFO = "pass", "fail", "info"


@dataclass
class CheckResult:
    name: str
    status: str
    max_error: float
    tolerance: float
    witness: Optional[str] = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def gating(self) -> bool:
        return self.status != INFO

    @classmethod
    def gate(cls, name: str, max_error: float, tolerance: float, witness=None, **detail) -> "CheckResult":
        """Pass iff ``max_error <= tolerance``."""
        max_error = float(max_error)
        status = PASS if max_error <= tolerance else FAIL
        return cls(name, status, max_error, float(tolerance), witness, detail)

    @classmethod
    def info(cls, name: str, max_error: float, tolerance: float, witness=None, **detail) -> "CheckResult":
        return cls(name, INFO, float(max_error), float(tolerance), witness, detail)

    def line(self) -> str:
        w = f"  [{self.witness}]" if self.witness else ""
        return f"{self.status.upper():4s} {self.name}: max_error={self.max_error:.3e} tol={self.tolerance:.1e}{w}"


@dataclass
class Report:
    tool_version: str
    seed: Optional[int]
    parameters: dict[str, Any]
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, *results: CheckResult) -> None:
        self.checks.extend(results)

    @property
    def summary(self) -> dict[str, int]:
        counts = {PASS: 0, FAIL: 0, INFO: 0}
        for c in self.checks:
            counts[c.status] += 1
        return counts

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if c.gating)

    def to_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "seed": self.seed,
            "parameters": self.parameters,
            "checks": [_finite(asdict(c)) for c in self.checks],
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False)


def _finite(d: dict) -> dict:
    # strict JSON has no inf/nan
    for key in ("max_error", "tolerance"):
        if not math.isfinite(d[key]):
            d[key] = str(d[key])
    return d
