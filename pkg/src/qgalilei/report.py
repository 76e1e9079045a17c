"""Verification reports shared by every ``check_*`` routine."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

OK_STATUSES = ("pass", "xfail", "info")


@dataclass
class CheckRecord:
    check: str
    status: str
    cases: int = 0
    residual: str = "0"
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status in OK_STATUSES

    def to_line(self) -> str:
        line = f"check={self.check} status={self.status} cases={self.cases} residual={self.residual}"
        if self.note:
            line += f" note={self.note}"
        return line


@dataclass
class VerificationReport:
    suite: str
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.records)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    def extend(self, other: "VerificationReport") -> None:
        self.records.extend(other.records)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.ok]

    def to_text(self) -> str:
        lines = [f"suite={self.suite}"]
        lines += [r.to_line() for r in self.records]
        lines.append(f"suite={self.suite} overall={'pass' if self.passed else 'fail'}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "overall": "pass" if self.passed else "fail",
            "records": [asdict(r) for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class Tally:
    """Accumulate many exact comparisons into one record.

    Only the first mismatch is kept as the residual; the case count covers
    every comparison made.
    """

    def __init__(self, check: str, note: str = ""):
        self.check = check
        self.note = note
        self.cases = 0
        self.failed = 0
        self.first: str | None = None

    def compare(self, label: str, residual) -> bool:
        self.cases += 1
        if _is_zero(residual):
            return True
        self.failed += 1
        if self.first is None:
            self.first = f"[{label}] {residual}"
        return False

    def record(self) -> CheckRecord:
        if self.failed:
            return CheckRecord(self.check, "fail", self.cases, f"{self.failed} failing; first {self.first}", self.note)
        return CheckRecord(self.check, "pass", self.cases, "0", self.note)


def _is_zero(value) -> bool:
    if isinstance(value, bool):
        return value
    if value == 0:
        return True
    return not value
