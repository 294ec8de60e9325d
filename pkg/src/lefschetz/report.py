from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def fraction_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def jsonable(value: Any) -> Any:
    """Recursively turn Fractions into "p/q" strings and tuples into lists."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return fraction_str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


@dataclass
class CheckReport:
    """Outcome of a single verification."""

    check: str
    params: dict = field(default_factory=dict)
    passed: bool = False
    witness: Any = None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "params": jsonable(self.params),
            "status": self.status,
            "witness": jsonable(self.witness),
        }

    def __bool__(self):
        return self.passed

    def line(self) -> str:
        params = ", ".join(f"{k}={fraction_str(v) if isinstance(v, Fraction) else v}"
                           for k, v in self.params.items())
        return f"[{self.status.upper()}] {self.check}({params})"
