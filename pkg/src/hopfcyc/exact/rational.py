"""Exact rational scalars (gmpy2 ``mpq``) and their text form."""
from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq

Q = mpq

_RAT = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def to_q(value) -> mpq:
    if isinstance(value, mpq):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        # exact binary value; callers that want decimal semantics pass strings
        return mpq(value)
    if isinstance(value, str):
        return parse_q(value)
    return mpq(value)


def parse_q(text: str) -> mpq:
    m = _RAT.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return mpq(int(num), int(den) if den else 1)


def format_q(q) -> str:
    q = to_q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
