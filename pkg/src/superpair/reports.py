"""Pass/fail reports for verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""
    checked: int = 0
    skipped: int = 0
    seconds: Optional[float] = None

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "checked": self.checked,
            "skipped": self.skipped,
        }
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if timings and self.seconds is not None:
            out["seconds"] = round(self.seconds, 4)
        return out


@dataclass
class Report:
    title: str
    checks: List[Check] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            if prefix:
                c.name = f"{prefix}{c.name}"
            self.checks.append(c)
        self.extra.update(other.extra)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        return {
            "title": self.title,
            "status": "pass" if self.passed else "fail",
            "checks": [c.to_dict(timings) for c in self.checks],
            "extra": _jsonable(self.extra),
        }

    def lines(self) -> List[str]:
        out = []
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            line = f"[{tag}] {c.name} (checked {c.checked}"
            if c.skipped:
                line += f", skipped {c.skipped}"
            line += ")"
            if c.detail:
                line += f": {c.detail}"
            if not c.passed and c.witness is not None:
                line += f" witness={_jsonable(c.witness)}"
            out.append(line)
        return out


def _jsonable(obj):
    from fractions import Fraction

    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return str(obj)
