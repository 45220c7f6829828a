"""Exact rational parsing and formatting for the text formats."""

from __future__ import annotations

import re
from fractions import Fraction

_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")


def parse_rational(token: str) -> Fraction:
    """Parse ``p/q`` or the integer shorthand ``p``; decimals are rejected."""
    if not _RATIONAL.fullmatch(token):
        raise ValueError(f"not a rational number: {token!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator: {token!r}") from None


def format_rational(value) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def as_fraction(value) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floats are not accepted; use Fraction or int")
    return Fraction(value)
