"""Exact rational parsing and printing."""

from __future__ import annotations

import re
from decimal import Decimal
from fractions import Fraction

_RATIONAL_RE = re.compile(r"[+-]?(\d+(/\d+)?|\d*\.\d+|\d+\.)\Z")


def to_fraction(value) -> Fraction:
    """Convert ``p/q``, decimal literals, ints and Fractions exactly.

    Floats are refused: ``0.1`` as a float is not one tenth.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a string such as '0.9' or '9/10'")
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.match(text):
            raise ValueError(f"not a rational literal: {value!r}")
        q = Fraction(text)
        return q
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def fmt(q: Fraction) -> str:
    """``p/q`` in lowest terms, or the bare integer."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def terminates(q: Fraction) -> bool:
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def decimal_text(q: Fraction, digits: int = 6) -> str:
    """Exact decimal when the expansion terminates, else ``~`` and rounded."""
    q = Fraction(q)
    if terminates(q):
        sign = "-" if q < 0 else ""
        q = abs(q)
        whole, rest = divmod(q.numerator, q.denominator)
        frac = []
        while rest:
            rest *= 10
            d, rest = divmod(rest, q.denominator)
            frac.append(str(d))
        return sign + str(whole) + ("." + "".join(frac) if frac else "")
    return "~" + format(Decimal(q.numerator) / Decimal(q.denominator), f".{digits}f")


def fmt_with_decimal(q: Fraction) -> str:
    """``4/5 (= 0.8)``; integers print bare."""
    q = Fraction(q)
    if q.denominator == 1:
        return fmt(q)
    dec = decimal_text(q)
    if dec.startswith("~"):
        return f"{fmt(q)} ({dec})"
    return f"{fmt(q)} (= {dec})"
