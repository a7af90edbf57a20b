"""Structured pass/fail reports returned by every verifier."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckEntry:
    name: str
    passed: bool
    evidence: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": "pass" if self.passed else "fail"}
        if self.evidence:
            out["evidence"] = self.evidence
        return out


@dataclass
class CheckReport:
    name: str
    entries: list = field(default_factory=list)
    evidence: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, **evidence) -> bool:
        self.entries.append(CheckEntry(name, bool(passed), evidence))
        return bool(passed)

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        for e in other.entries:
            self.entries.append(CheckEntry(prefix + e.name, e.passed, e.evidence))

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def __bool__(self):
        return self.passed

    def failures(self) -> list:
        return [e for e in self.entries if not e.passed]

    def entry(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": "pass" if self.passed else "fail",
               "entries": [e.to_dict() for e in self.entries]}
        if self.evidence:
            out["evidence"] = self.evidence
        return out

    def __str__(self):
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for e in self.entries:
            lines.append(f"  [{'ok' if e.passed else 'XX'}] {e.name}")
        return "\n".join(lines)
