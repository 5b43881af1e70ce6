"""Exact rational scalars.

All scalars are ``gmpy2.mpq`` values: arbitrary precision, always stored in
lowest terms with a positive denominator.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC

import gmpy2

from .errors import ParseError

Q = gmpy2.mpq
ZERO = Q(0)
ONE = Q(1)
INF = math.inf


def as_rational(value, location=None):
    """Convert ``value`` to an exact rational.

    Accepts ints, ``Fraction``/``mpq`` values and strings of the form
    ``"7"``, ``"-3/4"``.  Floats are rejected: they would smuggle rounding in.
    """
    if isinstance(value, bool):
        raise ParseError(f"expected a rational, got boolean {value!r}", location)
    if isinstance(value, int):
        return Q(value)
    if isinstance(value, Q):
        return value
    if isinstance(value, (_RationalABC, Fraction)):
        return Q(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            p = int(num)
            q = int(den) if sep else 1
        except ValueError:
            raise ParseError(f"malformed rational {value!r}", location) from None
        if q == 0:
            raise ParseError(f"zero denominator in {value!r}", location)
        return Q(p, q)
    raise ParseError(f"expected an integer or 'p/q' string, got {value!r}", location)


def as_vector(values, location=None):
    return tuple(as_rational(v, f"{location}[{i}]" if location else None)
                 for i, v in enumerate(values))


def format_rational(value) -> str:
    """``"p/q"`` or ``"p"``; infinities as ``"+inf"``/``"-inf"``."""
    if isinstance(value, float):
        if value == math.inf:
            return "+inf"
        if value == -math.inf:
            return "-inf"
        raise ValueError(f"non-exact scalar {value!r}")
    value = Q(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def dot(u, v):
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def primitive(vec):
    """Positive rescaling of a rational vector to coprime integers (ints)."""
    vec = [Q(v) for v in vec]
    den = 1
    for v in vec:
        if v:
            den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    if g > 1:
        ints = [a // g for a in ints]
    return ints
