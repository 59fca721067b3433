"""Check records and verification reports.

A report is a list of named checks, each either passing or carrying the
first violating witness.  Rendering is deterministic: nothing here reads a
clock unless timings are explicitly requested.
"""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator


@dataclass
class CheckResult:
    name: str
    statement: str
    passed: bool
    cases: int = 0
    witness: dict[str, str] | None = None
    note: str = ""
    advisory: bool = False
    duration: float | None = None

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        d: dict[str, Any] = {
            "name": self.name,
            "statement": self.statement,
            "status": "pass" if self.passed else "fail",
            "cases": self.cases,
            "witness": self.witness,
        }
        if self.note:
            d["note"] = self.note
        if self.advisory:
            d["advisory"] = True
        if timings and self.duration is not None:
            d["duration_s"] = round(self.duration, 3)
        return d


@dataclass
class Report:
    title: str
    checks: list[CheckResult] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def add(self, result: CheckResult) -> CheckResult:
        if any(c.name == result.name for c in self.checks):
            raise ValueError(f"duplicate check {result.name!r}")
        self.checks.append(result)
        return result

    def extend(self, other: Report) -> None:
        for c in other.checks:
            self.add(c)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.advisory)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed and not c.advisory]

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        return {
            "title": self.title,
            "meta": self.meta,
            "verdict": "pass" if self.passed else "fail",
            "checks": [c.to_dict(timings) for c in self.checks],
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=False) + "\n"

    def to_text(self, timings: bool = False) -> str:
        lines = [f"== {self.title} =="]
        for k, v in self.meta.items():
            lines.append(f"  {k}: {v}")
        for c in self.checks:
            status = "PASS" if c.passed else ("WARN" if c.advisory else "FAIL")
            head = f"[{status}] {c.name}  ({c.cases} cases)"
            if timings and c.duration is not None:
                head += f"  {c.duration:.3f}s"
            lines.append(head)
            lines.append(f"       {c.statement}")
            if c.note:
                lines.append(f"       note: {c.note}")
            if c.witness:
                for k, v in c.witness.items():
                    lines.append(f"       {k} = {v}")
        lines.append(f"verdict: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def is_zero(value) -> bool:
    if isinstance(value, (list, tuple)):
        return all(is_zero(v) for v in value)
    if hasattr(value, "is_zero"):
        return value.is_zero()
    return not value


def check(name: str, statement: str, cases, residual, describe=None) -> CheckResult:
    """Evaluate ``residual(*case)`` over ``cases``; stop at the first nonzero.

    The witness records the offending case and the full residual.
    """
    start = time.perf_counter()
    n = 0
    for case in cases:
        n += 1
        r = residual(*case)
        if not is_zero(r):
            witness = {
                "case": describe(case) if describe else _describe(case),
                "residual": _describe(r),
            }
            return CheckResult(name, statement, False, n, witness, duration=time.perf_counter() - start)
    return CheckResult(name, statement, True, n, duration=time.perf_counter() - start)


def _describe(value) -> str:
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(_describe(v) for v in value) + ")"
    return str(value)


@contextmanager
def timer(out: list) -> Iterator[None]:
    start = time.perf_counter()
    yield
    out.append(time.perf_counter() - start)
