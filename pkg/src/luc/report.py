"""Uniform result records for enumeration-based checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from .fin import fingerprint


@dataclass
class CheckReport:
    """Outcome of one exhaustive check: case count plus failure witnesses."""

    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    expect_fail: bool = False

    def tick(self, n: int = 1) -> None:
        self.cases += n

    def fail(self, witness: str) -> None:
        self.failures.append(witness)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def ok(self) -> bool:
        """True when the outcome matches expectation (negative controls must fail)."""
        return self.passed != self.expect_fail

    def witness_id(self) -> str:
        return "w:" + fingerprint(self.failures[0]) if self.failures else "-"

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"CHECK {self.name} {self.cases} {status}"
        if self.failures:
            out += f" {self.witness_id()}"
        return out

    def merged(self, other: "CheckReport") -> "CheckReport":
        r = CheckReport(self.name, self.cases + other.cases, self.failures + other.failures, self.expect_fail)
        return r
