"""Pass/fail records for exact identity checks, with a JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import LaurentPoly, TruncSeries

SCHEMA_VERSION = 1


def to_jsonable(value):
    """Exact numbers become strings; containers are converted recursively."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, LaurentPoly):
        return {str(e): str(v) for e, v in sorted(value.coeffs.items(), reverse=True)}
    if isinstance(value, TruncSeries):
        return {",".join(map(str, e)): str(v) for e, v in value.items()}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return str(value)


@dataclass(frozen=True)
class Check:
    identity: str
    lhs: object
    rhs: object

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "lhs": to_jsonable(self.lhs),
            "rhs": to_jsonable(self.rhs),
            "pass": self.passed,
        }


@dataclass
class Report:
    identity: str
    checks: list[Check] = field(default_factory=list)

    def add(self, identity: str, lhs, rhs) -> Check:
        chk = Check(identity, lhs, rhs)
        self.checks.append(chk)
        return chk

    def extend(self, other: Report) -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "identity": self.identity,
            "pass": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }
