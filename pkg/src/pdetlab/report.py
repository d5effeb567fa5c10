"""Check results and the reports that collect them."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

from .linalg import IntMatrix
from .polynomial import MultiPoly, UniPoly

PASS = "pass"
FAIL = "fail"
EXPECTED_NEGATIVE = "expected-negative"
SKIPPED = "skipped"
STATUSES = (PASS, FAIL, EXPECTED_NEGATIVE, SKIPPED)


def plain(value: Any) -> Any:
    """JSON-friendly form: polynomials become canonical text, tuples become lists."""
    if isinstance(value, (MultiPoly, UniPoly)):
        return value.to_text()
    if isinstance(value, IntMatrix):
        return value.to_lists()
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [plain(v) for v in value]
        return sorted(items, key=str) if isinstance(value, (set, frozenset)) else items
    return value


@dataclass
class Check:
    """One identity test; ``status`` defaults to pass/fail by equality."""

    name: str
    anchor: str
    expected: Any
    actual: Any
    status: str | None = None
    note: str = ""

    def __post_init__(self) -> None:
        if self.status is None:
            self.status = PASS if self.expected == self.actual else FAIL
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "anchor": self.anchor,
            "expected": plain(self.expected),
            "actual": plain(self.actual),
            "status": self.status,
            "pass": self.passed,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    values: dict[str, Any] = field(default_factory=dict)
    variables: dict[str, str] = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)
        for k, v in other.values.items():
            self.values.setdefault(k, v)
        self.variables.update(other.variables)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "values": plain(self.values),
            "variables": dict(self.variables),
            "checks": [c.to_dict() for c in self.checks],
            "ok": self.ok,
        }

    def __bool__(self) -> bool:
        return self.ok


def digest(text: str | bytes) -> str:
    data = text.encode() if isinstance(text, str) else text
    return "sha256:" + hashlib.sha256(data).hexdigest()


def canonical_json(obj: Any) -> str:
    return json.dumps(plain(obj), sort_keys=True, separators=(",", ":"))
