"""Check reports shared by every validator in the package."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .linalg import format_rational


class StructureError(ValueError):
    """Inconsistent dimensions or malformed structure data."""


class PreconditionError(ValueError):
    """An operation was called on inputs that fail its mathematical precondition."""

    def __init__(self, message: str, report: "Report | None" = None):
        super().__init__(message)
        self.report = report


class InvariantViolation(AssertionError):
    """A result that the theory guarantees did not materialise; always a bug."""


@dataclass
class Check:
    name: str
    passed: bool
    witness: Optional[tuple] = None
    residual: Optional[list] = None
    note: str = ""

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.residual is not None:
            out["residual"] = [format_rational(v) for v in self.residual]
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.residual, c.note))

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def first_failure(self) -> Optional[Check]:
        return next((c for c in self.checks if not c.passed), None)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
            "data": _plain(self.data),
        }

    def summary(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{'ok' if c.passed else 'FAIL'}] {c.name}"
            if not c.passed and c.witness is not None:
                line += f" at {tuple(c.witness)}"
            if not c.passed and c.residual is not None:
                line += " residual " + "(" + ", ".join(format_rational(v) for v in c.residual) + ")"
            if c.note:
                line += f"  -- {c.note}"
            lines.append(line)
        return "\n".join(lines)


def _plain(value):
    """Turn report data into JSON-friendly values (Fractions become strings)."""
    from fractions import Fraction

    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def tensor_check(name: str, residual: np.ndarray, note: str = "") -> Check:
    """Pass iff every entry of ``residual`` vanishes.

    ``residual`` is indexed by basis tuples along all but its last axis; on
    failure the first violating tuple (in C order) and its residual vector
    are recorded.
    """
    residual = np.asarray(residual, dtype=object)
    if residual.ndim == 0 or residual.size == 0:
        flat_ok = residual.size == 0 or residual.reshape(-1)[0] == 0
        return Check(name, bool(flat_ok), note=note)
    for idx in np.ndindex(*residual.shape[:-1]):
        vec = residual[idx]
        if any(v != 0 for v in vec):
            return Check(name, False, tuple(int(i) for i in idx), list(vec), note)
    return Check(name, True, note=note)
