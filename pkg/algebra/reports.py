"""
Check results and reports shared by every verification routine
"""

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional


@dataclass
class CheckResult:
    """Outcome of a single labelled check"""

    label: str
    passed: bool
    witness: Optional[str] = None
    detail: Dict[str, Any] = field(default_factory=dict)
    elapsed_ms: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "passed": self.passed,
            "witness": self.witness,
            "detail": self.detail,
            "elapsed_ms": self.elapsed_ms,
        }


@dataclass
class CheckReport:
    """Ordered collection of check results"""

    title: str
    results: List[CheckResult] = field(default_factory=list)
    info: Dict[str, Any] = field(default_factory=dict)

    def add(self, label: str, passed: bool, witness: Optional[str] = None,
            elapsed_ms: Optional[float] = None, **detail: Any) -> CheckResult:
        result = CheckResult(label, bool(passed), witness, dict(detail), elapsed_ms)
        self.results.append(result)
        return result

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        for result in other.results:
            self.results.append(CheckResult(
                prefix + result.label, result.passed, result.witness,
                dict(result.detail), result.elapsed_ms,
            ))

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def failures(self) -> List[CheckResult]:
        return [result for result in self.results if not result.passed]

    def get(self, label: str) -> CheckResult:
        for result in self.results:
            if result.label == label:
                return result
        raise KeyError(label)

    def __contains__(self, label: str) -> bool:
        return any(result.label == label for result in self.results)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "title": self.title,
            "passed": self.passed,
            "info": self.info,
            "results": [result.to_dict() for result in self.results],
        }


# Validation and verification reports share one shape
ValidationReport = CheckReport
VerificationReport = CheckReport


@contextmanager
def stopwatch() -> Iterator[Dict[str, float]]:
    """Measure wall time in milliseconds into the yielded dict"""
    timing: Dict[str, float] = {}
    start = time.perf_counter()
    try:
        yield timing
    finally:
        timing["elapsed_ms"] = round((time.perf_counter() - start) * 1000.0, 3)
