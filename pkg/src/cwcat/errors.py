"""Exception types and the violation record shared by the report-based checks."""

from __future__ import annotations

from typing import NamedTuple


class CwcatError(ValueError):
    """Base class for every domain error raised by this package."""


class FormatError(CwcatError):
    """Malformed input text. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ComplexError(CwcatError):
    """A complex (or something built on one) violates its invariants."""

    def __init__(self, message: str, violations=()):
        self.violations = tuple(violations)
        super().__init__(message)


class InvalidPathError(CwcatError):
    pass


class FormError(CwcatError):
    """A one-form or vertex function is incomplete or does not match its carrier."""


class NotClosedError(FormError):
    def __init__(self, residuals):
        self.residuals = dict(residuals)
        faces = ", ".join(f"{k}={v}" for k, v in self.residuals.items())
        super().__init__(f"form is not closed: nonzero face sums {faces}")


class InfeasibleClassError(CwcatError):
    """Requested periods are not realized by any closed form on the complex."""

    def __init__(self, message: str, constraint: str):
        self.constraint = constraint
        super().__init__(message)


class MapError(CwcatError):
    pass


class FlowError(CwcatError):
    pass


class BudgetError(CwcatError):
    pass


class Violation(NamedTuple):
    kind: str
    where: str
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.kind}: {self.where}"
        return f"{text} ({self.detail})" if self.detail else text
