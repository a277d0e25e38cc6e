"""Named pass/fail checks with JSON-friendly witnesses."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def jsonable(obj: Any) -> Any:
    """Convert witnesses to plain JSON types; rationals become "p/q" strings."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [jsonable(v) for v in sorted(obj, key=_sort_key)]
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_json_obj"):
        return obj.to_json_obj()
    return str(obj)


def _sort_key(v):
    if isinstance(v, (tuple, list)):
        return (len(v), tuple(v))
    return (0, (v,))


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None

    def to_json_obj(self) -> dict:
        return {"name": self.name, "pass": bool(self.passed), "witness": jsonable(self.witness)}


@dataclass
class Report:
    """Ordered list of checks; truthy iff every check passed.

    ``info`` carries reported facts that are not pass/fail conditions.
    """

    command: str
    checks: list[Check] = field(default_factory=list)
    elapsed_ms: int = 0
    info: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed: bool, witness: Any = None) -> bool:
        self.checks.append(Check(name, bool(passed), witness))
        return bool(passed)

    def extend(self, other: "Report", prefix: str = "") -> bool:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness))
        return other.passed

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json_obj(self) -> dict:
        obj = {
            "command": self.command,
            "checks": [c.to_json_obj() for c in self.checks],
            "elapsed_ms": int(self.elapsed_ms),
        }
        if self.info:
            obj["info"] = jsonable(self.info)
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=False)

    def render(self) -> str:
        lines = [f"== {self.command} =="]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            line = f"[{mark}] {c.name}"
            if c.witness is not None and (not c.passed or _short(c.witness)):
                line += f": {_fmt(c.witness)}"
            lines.append(line)
        for k, v in self.info.items():
            lines.append(f"  {k}: {_fmt(v)}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def _short(w: Any) -> bool:
    return len(_fmt(w)) <= 120


def _fmt(w: Any) -> str:
    j = jsonable(w)
    if isinstance(j, str):
        return j
    return json.dumps(j, separators=(",", ":"))
