"""Machine-checkable result records."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "Pass"
FAIL = "Fail"
INDETERMINATE = "Indeterminate"


def _plain(value):
    """Make a value JSON-friendly (tuples to lists, Indeterminate to 'lo..hi')."""
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return value.item()
    return value


@dataclass
class Verdict:
    claim: str
    computed: Any
    expected: Any = None
    status: str = ""
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.status:
            if self.expected is None:
                raise ValueError("status must be given when there is no expected value")
            self.status = PASS if self.computed == self.expected else FAIL

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "computed": _plain(self.computed),
            "expected": _plain(self.expected),
            "status": self.status,
            "provenance": _plain(self.provenance),
        }

    @classmethod
    def from_json(cls, obj) -> "Verdict":
        return cls(obj["claim"], obj["computed"], obj.get("expected"), obj["status"],
                   obj.get("provenance", {}))

    def row(self) -> str:
        exp = "-" if self.expected is None else _short(self.expected)
        return f"{self.claim} | {_short(self.computed)} | {exp} | {self.status}"


def check(claim: str, computed, expected, **provenance) -> Verdict:
    return Verdict(claim, computed, expected, provenance=provenance)


def holds(claim: str, ok: bool, computed=None, **provenance) -> Verdict:
    """Verdict for a boolean property; ``computed`` defaults to the flag itself."""
    return Verdict(claim, ok if computed is None else computed, None,
                   PASS if ok else FAIL, provenance)


def _short(value) -> str:
    s = str(_plain(value))
    return s if len(s) <= 60 else s[:57] + "..."


def table(verdicts) -> str:
    lines = ["claim | computed | expected | status"]
    lines += [v.row() for v in verdicts]
    return "\n".join(lines)
