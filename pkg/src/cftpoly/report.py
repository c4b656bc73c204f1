"""Structured pass/fail reports shared by checks, scans and certificates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction


def _plain(value):
    """Make a value JSON-friendly; rationals become "p/q" strings."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted((_plain(v) for v in value), key=repr)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return value


@dataclass
class ScanReport:
    """Outcome of one check.

    ``exceptions`` lists every violating cell that was found. ``expected``
    holds the exception set the check declares up front (for instance the
    single CFT exception); the verdict is ``pass`` exactly when the two agree,
    so with nothing expected it reduces to "no exceptions".
    """

    check: str
    params: dict = field(default_factory=dict)
    exceptions: list = field(default_factory=list)
    expected: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    notes: str = ""

    @property
    def verdict(self) -> str:
        found = {tuple(e) if isinstance(e, list) else e for e in self.exceptions}
        want = {tuple(e) if isinstance(e, list) else e for e in self.expected}
        return "pass" if found == want else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def __bool__(self):
        return self.passed

    def merge(self, other: ScanReport) -> ScanReport:
        """Concatenate exception and certificate lists of two partial reports."""
        return ScanReport(
            check=self.check,
            params=self.params,
            exceptions=self.exceptions + other.exceptions,
            expected=self.expected,
            certificates=self.certificates + other.certificates,
            notes="; ".join(n for n in (self.notes, other.notes) if n),
        )

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "params": _plain(self.params),
            "verdict": self.verdict,
            "exceptions": _plain(self.exceptions),
            "expected": _plain(self.expected),
            "certificates": _plain(self.certificates),
            "notes": self.notes,
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def summary(self) -> str:
        line = f"[{self.verdict.upper()}] {self.check}"
        if self.exceptions:
            shown = ", ".join(str(tuple(_plain(e))) for e in self.exceptions[:8])
            more = "" if len(self.exceptions) <= 8 else f" (+{len(self.exceptions) - 8} more)"
            line += f": exceptions {shown}{more}"
        if self.notes:
            line += f" -- {self.notes}"
        return line
