import math
from dataclasses import dataclass, field
from typing import Any, Dict, List

REPORT_SCHEMA_VERSION = 1


@dataclass
class CheckResult:
    name: str
    expected: float
    got: float
    tol: float
    passed: bool

    def as_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'expected': self.expected,
            'got': self.got,
            'tol': self.tol,
            'pass': self.passed,
        }


@dataclass
class VerificationReport:
    """
    Non-throwing collection of named checks. Suites append to it; the CLI
    decides the exit code from `summary`.
    """
    suite: str
    checks: List[CheckResult] = field(default_factory=list)

    def add_check(self, name: str, expected: float, got: float, tol: float) -> CheckResult:
        expected = float(expected)
        got = float(got)
        passed = math.isfinite(got) and abs(got - expected) <= tol
        result = CheckResult(name=name, expected=expected, got=got, tol=float(tol), passed=passed)
        self.checks.append(result)
        return result

    def add_bound(self, name: str, got: float, bound: float) -> CheckResult:
        """Passes when |got| <= bound (residual-style checks)."""
        return self.add_check(name, 0.0, got, bound)

    def extend(self, other: 'VerificationReport') -> None:
        for check in other.checks:
            self.checks.append(CheckResult(
                name=f"{other.suite}.{check.name}",
                expected=check.expected,
                got=check.got,
                tol=check.tol,
                passed=check.passed,
            ))

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    @property
    def summary(self) -> Dict[str, int]:
        return {'total': len(self.checks), 'failed': len(self.failures)}

    @property
    def all_passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> Dict[str, Any]:
        return {
            'schema': REPORT_SCHEMA_VERSION,
            'suite': self.suite,
            'checks': [c.as_dict() for c in self.checks],
            'summary': self.summary,
        }
