"""Small helpers for exact rational arithmetic."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable


def to_fraction(value) -> Fraction:
    """Coerce ``value`` to a Fraction without ever going through a float.

    Accepts ints, Fractions and strings such as ``"3/4"`` or ``"-2"``.
    Floats are rejected because they silently carry binary rounding error.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"decimal notation is not accepted for exact input: {value!r}")
        num, sep, den = text.partition("/")
        try:
            numerator = int(num)
            denominator = int(den) if sep else 1
        except ValueError:
            raise ValueError(f"malformed rational {value!r}") from None
        if denominator == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Fraction(numerator, denominator)
    raise TypeError(f"cannot interpret {type(value).__name__} {value!r} as an exact rational")


def fractions(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_fraction(v) for v in values)


def binom(n: int, k: int) -> int:
    # C(n, k) = 0 outside 0 <= k <= n
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def double_factorial_odd(n: int) -> int:
    """(2n-1)!! with (-1)!! = 1."""
    out = 1
    for j in range(1, 2 * n, 2):
        out *= j
    return out


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
