from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skyrmecert.errors import DivisionByIntervalContainingZero
from skyrmecert.exact_arith import (
    RatInterval,
    Rational,
    format_rational,
    interval_pow,
    parse_rational,
    solve_exact,
    sqrt_le,
    sum_squares_le,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=1000)


@st.composite
def interval_and_point(draw):
    a, b = draw(fractions), draw(fractions)
    lo, hi = min(a, b), max(a, b)
    t = draw(st.fractions(min_value=0, max_value=1, max_denominator=97))
    return RatInterval(lo, hi), Rational(lo + t * (hi - lo))


def test_parse_and_format_roundtrip():
    assert parse_rational("13039/72146") == Rational(13039, 72146)
    assert parse_rational(" -437 / 24 ") == Rational(-437, 24)
    assert parse_rational("5") == 5
    assert format_rational(Rational(6, 4)) == "3/2"
    assert format_rational(7) == "7/1"


def test_parse_rejects_floats_and_bools():
    with pytest.raises(TypeError):
        parse_rational(0.5)
    with pytest.raises(TypeError):
        parse_rational(True)
    with pytest.raises(ZeroDivisionError):
        parse_rational("1/0")


def test_huge_literals_parse_exactly():
    text = "1" * 6001 + "/7"
    assert parse_rational(text).denominator == 7


def test_interval_basics():
    I = RatInterval(-1, 2)
    assert I.width == 3 and I.mid == Rational(1, 2)
    assert I.contains(0) and not I.excludes_zero()
    assert (I * I) == RatInterval(-2, 4)
    assert interval_pow(I, 2) == RatInterval(0, 4)
    with pytest.raises(ValueError):
        RatInterval(2, 1)
    with pytest.raises(DivisionByIntervalContainingZero):
        RatInterval(1) / I


@settings(max_examples=10_000)
@given(interval_and_point(), interval_and_point(), st.integers(0, 5))
def test_interval_inclusion(p, q, n):
    (I, x), (J, y) = p, q
    assert (I + J).contains(x + y)
    assert (I - J).contains(x - y)
    assert (I * J).contains(x * y)
    assert interval_pow(I, n).contains(x ** n)
    if J.excludes_zero():
        assert (I / J).contains(x / y)


def test_solve_exact_matches_fraction_elimination():
    A = [[2, 1, -1], [-3, -1, 2], [-2, 1, 2]]
    b = [8, -11, -3]
    assert solve_exact(A, b) == [2, 3, -1]


def test_sqrt_comparisons_are_exact():
    assert sqrt_le(Rational(4), 2)
    assert not sqrt_le(Rational(4) + Rational(1, 10**30), 2)
    assert sum_squares_le([Rational(1, 2), Rational(7, 10)], 1)
    assert not sum_squares_le([Rational(3, 5), Rational(4, 5)], Rational(99, 100))
    assert Fraction(74, 100) == Fraction(1, 4) + Fraction(49, 100)
