from fractions import Fraction

import pytest

from marginal.errors import ParseError
from marginal.rational import INF, Q, as_rational, as_vector, format_rational, primitive


@pytest.mark.parametrize("text, expected", [("7", Q(7)), ("-3/4", Q(-3, 4)), (" 6/8 ", Q(3, 4)), ("0/5", Q(0))])
def test_parses_strings(text, expected):
    assert as_rational(text) == expected


def test_accepts_exact_types():
    assert as_rational(3) == 3
    assert as_rational(Fraction(2, 6)) == Q(1, 3)
    assert as_rational(Q(5, 2)) == Q(5, 2)


@pytest.mark.parametrize("bad", [0.5, True, "1/0", "abc", "1.5", None, [1]])
def test_rejects_inexact_or_malformed(bad):
    with pytest.raises(ParseError):
        as_rational(bad)


def test_zero_denominator_carries_location():
    with pytest.raises(ParseError, match=r"phi\.pieces\[0\]\.b"):
        as_rational("1/0", "phi.pieces[0].b")


def test_vector_locations():
    with pytest.raises(ParseError, match=r"v\[1\]"):
        as_vector(["1", "x"], "v")


def test_canonical_form():
    q = Q(6, -4)
    assert (q.numerator, q.denominator) == (-3, 2)
    assert format_rational(q) == "-3/2"
    assert format_rational(Q(4, 2)) == "2"
    assert format_rational(INF) == "+inf"
    assert format_rational(-INF) == "-inf"


def test_exact_arithmetic_never_rounds():
    third = Q(1, 3)
    assert third + third + third == 1
    assert Q(10) ** 40 + Q(1, 10 ** 40) - Q(10) ** 40 == Q(1, 10 ** 40)


def test_primitive_scaling():
    assert primitive([Q(1, 2), Q(-3, 4)]) == [2, -3]
    assert primitive([0, Q(5)]) == [0, 1]
