"""Exact rational scalars and their string form ("p/q", or "p" when q = 1)."""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import ParseError

Rat = Fraction

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rat(text, position=None) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; integers are accepted as-is, floats are not."""
    if isinstance(text, bool):
        raise ParseError(f"expected a rational, got {text!r}", position)
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ParseError(f"expected a rational string, got {text!r}", position)
    m = _RAT_RE.match(text)
    if not m:
        raise ParseError(f"malformed rational {text!r}", position)
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}", position)
    return Fraction(num, den)


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise TypeError(f"cannot use {x!r} as an exact rational")


def format_rat(x) -> str:
    if x == math.inf:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def lcm_of_denominators(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out
