"""Exact rationals.

Rationals are ``gmpy2.mpq`` values: always reduced, positive denominator,
zero is ``0/1``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq, mpz

Rat = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def rat(value) -> Rat:
    """Coerce ``value`` (int, str ``"p/q"``, Fraction, mpq) to an exact rational."""
    if isinstance(value, Rat):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int) or type(value) is type(mpz(0)):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        m = _RAT_RE.match(value)
        if not m:
            raise ValueError(f"not a rational literal: {value!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return mpq(num, den)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def rat_str(q) -> str:
    """``p`` or ``p/q`` text form."""
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def is_integer(q) -> bool:
    return rat(q).denominator == 1
