"""Exact rational helpers shared by the graph-spec reader/writer and the solvers."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Any, Union

Number = Union[int, Fraction, float]


def parse_rational(value: Any) -> Fraction:
    """Parse an int or a ``"num/den"`` / ``"num"`` string into a Fraction.

    Floats are refused: graph data is exact by construction.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise ValueError(f"not a rational: {value!r}")


def format_rational(value: Fraction | int) -> int | str:
    """Inverse of :func:`parse_rational`; integers stay JSON integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def is_exact(value: Any) -> bool:
    return isinstance(value, Rational) and not isinstance(value, bool)


def to_float(value: Number) -> float:
    return float(value)
