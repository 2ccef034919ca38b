"""Verification reports with epistemic labels.

A check either passes, fails or is skipped.  The label states what a pass
actually establishes, and never more than that:

``exact-proof``
    an exact identity between finitely many exact objects;
``verified-at-degree-D``
    an operator or series identity checked on all columns / coefficients up to
    a truncation degree;
``verified-at-S-points``
    a pointwise identity checked exactly at S sample points;
``refuted-with-witness``
    a failure, with the witness that proves it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

EXACT = "exact-proof"
REFUTED = "refuted-with-witness"
SKIPPED = "skipped"

PASS = "pass"
FAIL = "fail"
SKIP = "skip"


def at_degree(d: int) -> str:
    return f"verified-at-degree-{d}"


def at_points(s: int) -> str:
    return f"verified-at-{s}-points"


@dataclass
class CheckRecord:
    name: str
    verdict: str
    label: str
    witness: str | None = None
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def to_json(self) -> dict:
        out = {"name": self.name, "verdict": self.verdict, "label": self.label,
               "witness": self.witness}
        if self.detail:
            out["detail"] = self.detail
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CheckRecord":
        return cls(data["name"], data["verdict"], data["label"],
                   data.get("witness"), dict(data.get("detail", {})))


def check(name: str, ok: bool, label: str, witness: str | None = None,
          **detail) -> CheckRecord:
    """Build a record; failures are always relabelled as refutations."""
    if ok:
        return CheckRecord(name, PASS, label, None, detail)
    if witness is None:
        raise ValueError(f"failing check {name!r} needs a witness")
    return CheckRecord(name, FAIL, REFUTED, witness, detail)


def skipped(name: str, reason: str) -> CheckRecord:
    return CheckRecord(name, SKIP, SKIPPED, None, {"reason": reason})


@dataclass
class Report:
    suite: str
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, rec: CheckRecord) -> CheckRecord:
        self.checks.append(rec)
        return rec

    def extend(self, recs: Iterable[CheckRecord]) -> None:
        self.checks.extend(recs)

    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if c.verdict == FAIL]

    def first_failure(self) -> CheckRecord | None:
        for c in self.checks:
            if c.verdict == FAIL:
                return c
        return None

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}

    @classmethod
    def from_json(cls, data: dict) -> "Report":
        return cls(data["suite"], [CheckRecord.from_json(c) for c in data["checks"]])

    def __bool__(self) -> bool:
        return self.passed


def merge(suite: str, reports: Iterable[Report]) -> Report:
    """Concatenate reports, prefixing check names with the sub-suite."""
    out = Report(suite)
    for rep in sorted(reports, key=lambda r: r.suite):
        for c in rep.checks:
            out.checks.append(CheckRecord(f"{rep.suite}/{c.name}", c.verdict,
                                          c.label, c.witness, c.detail))
    return out


def dumps(reports: list[Report]) -> str:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    payload = {"reports": [r.to_json() for r in reports],
               "passed": all(r.passed for r in reports)}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> list[Report]:
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("report JSON must be an object")
    if "reports" in data:
        return [Report.from_json(r) for r in data["reports"]]
    return [Report.from_json(data)]


def _cell(s: Any) -> str:
    return ("" if s is None else str(s)).replace("|", "\\|").replace("\n", " ")


def to_markdown(reports: list[Report]) -> str:
    lines = []
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        lines.append(f"## {rep.suite} ({status})")
        lines.append("")
        lines.append("| check | verdict | label | witness |")
        lines.append("|---|---|---|---|")
        for c in rep.checks:
            lines.append(f"| {_cell(c.name)} | {c.verdict} | {c.label} | {_cell(c.witness)} |")
        lines.append("")
    return "\n".join(lines)
