"""Parsing and formatting of exact rationals ("p/q" strings)."""

from __future__ import annotations

import math
import re
from fractions import Fraction

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; q must be positive."""
    m = _RATIONAL.match(text)
    if not m:
        raise ValueError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError(f"refusing to convert float {x!r} to an exact rational")
    return Fraction(x)


def format_rational(x) -> str:
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def exact_sqrt(q: Fraction):
    """Square root of a nonnegative rational: a Fraction when q is a perfect
    square of a rational, otherwise a float."""
    if q < 0:
        raise ValueError("negative argument")
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return math.sqrt(n / d)
