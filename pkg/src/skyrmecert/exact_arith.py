"""Exact rationals and closed rational intervals.

``Rational`` is gmpy2's ``mpq``: always reduced, denominator positive.
Nothing in this module ever rounds.
"""
from __future__ import annotations

import operator
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import gmpy2

from .errors import DivisionByIntervalContainingZero, SingularSystem

Rational = type(gmpy2.mpq(0))
Integer = type(gmpy2.mpz(0))

ZERO = Rational(0)
ONE = Rational(1)

_EXACT_TYPES = (int, Integer, Rational, Fraction)


def parse_rational(value) -> Rational:
    """Coerce ``value`` to a Rational.

    Strings may be ``"p/q"`` or ``"p"``. Floats are rejected on purpose;
    use :func:`skyrmecert.spectral_solver.rationalize` to cross from floats.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("refusing to interpret a bool as a rational")
    if isinstance(value, (int, Integer)):
        return Rational(value)
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip().replace(" ", "")
        if not text:
            raise ValueError("empty rational literal")
        if "/" in text:
            num, den = text.split("/", 1)
            d = _parse_int(den, value)
            if d == 0:
                raise ZeroDivisionError(f"zero denominator in {value!r}")
            return Rational(_parse_int(num, value), d)
        return Rational(_parse_int(text, value))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def _parse_int(text: str, original) -> Integer:
    # mpz has no digit limit, unlike int() on str
    try:
        return Integer(text)
    except ValueError:
        raise ValueError(f"invalid rational literal {original!r}") from None


def format_rational(q) -> str:
    """Serialize as ``"p/q"``; integers get an explicit ``/1``."""
    q = parse_rational(q)
    return f"{q.numerator}/{q.denominator}"


def common_denominator(values: Iterable[Rational]) -> tuple[list, Integer]:
    """Return integer numerators and a common positive denominator."""
    vals = [parse_rational(v) for v in values]
    den = reduce(gmpy2.lcm, (v.denominator for v in vals), Integer(1))
    return [v.numerator * (den // v.denominator) for v in vals], den


def sqrt_le(radicand, bound) -> bool:
    """Decide sqrt(radicand) <= bound without leaving Q."""
    radicand, bound = parse_rational(radicand), parse_rational(bound)
    if radicand < 0:
        raise ValueError("negative radicand")
    return bound >= 0 and radicand <= bound * bound


def sum_squares_le(terms: Iterable, bound) -> bool:
    """Decide sqrt(sum t_i^2) <= bound by comparing squares."""
    return sqrt_le(sum((parse_rational(t) ** 2 for t in terms), ZERO), bound)


class RatInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = parse_rational(lo)
        hi = lo if hi is None else parse_rational(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("RatInterval is immutable")

    @classmethod
    def point(cls, a) -> "RatInterval":
        return cls(a, a)

    @staticmethod
    def coerce(v) -> "RatInterval":
        return v if isinstance(v, RatInterval) else RatInterval(v, v)

    # --- queries ---------------------------------------------------------
    @property
    def width(self) -> Rational:
        return self.hi - self.lo

    @property
    def mid(self) -> Rational:
        return (self.lo + self.hi) / 2

    @property
    def mag(self) -> Rational:
        """max |t| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, v) -> bool:
        if isinstance(v, RatInterval):
            return self.lo <= v.lo and v.hi <= self.hi
        v = parse_rational(v)
        return self.lo <= v <= self.hi

    __contains__ = contains

    def subset(self, other: "RatInterval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def bisect(self) -> tuple["RatInterval", "RatInterval"]:
        m = self.mid
        return RatInterval(self.lo, m), RatInterval(m, self.hi)

    # --- arithmetic ------------------------------------------------------
    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, (RatInterval,) + _EXACT_TYPES):
            return NotImplemented
        return interval_binop("add", self, RatInterval.coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (RatInterval,) + _EXACT_TYPES):
            return NotImplemented
        return interval_binop("sub", self, RatInterval.coerce(other))

    def __rsub__(self, other):
        if not isinstance(other, _EXACT_TYPES):
            return NotImplemented
        return interval_binop("sub", RatInterval.coerce(other), self)

    def __mul__(self, other):
        if isinstance(other, _EXACT_TYPES):
            c = parse_rational(other)
            return RatInterval(c * self.lo, c * self.hi) if c >= 0 else RatInterval(c * self.hi, c * self.lo)
        if not isinstance(other, RatInterval):
            return NotImplemented
        return interval_binop("mul", self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (RatInterval,) + _EXACT_TYPES):
            return NotImplemented
        return interval_binop("div", self, RatInterval.coerce(other))

    def __rtruediv__(self, other):
        if not isinstance(other, _EXACT_TYPES):
            return NotImplemented
        return interval_binop("div", RatInterval.coerce(other), self)

    def __pow__(self, n: int):
        return interval_pow(self, n)

    # --- plumbing --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RatInterval):
            return self.lo == other.lo and self.hi == other.hi
        return NotImplemented

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"RatInterval({format_rational(self.lo)!r}, {format_rational(self.hi)!r})"

    def to_json(self) -> list[str]:
        return [format_rational(self.lo), format_rational(self.hi)]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "RatInterval":
        lo, hi = data
        return cls(parse_rational(lo), parse_rational(hi))


def interval_binop(op: str, I: RatInterval, J: RatInterval) -> RatInterval:
    """Apply one of add/sub/mul/div to two intervals."""
    if op == "add":
        return RatInterval(I.lo + J.lo, I.hi + J.hi)
    if op == "sub":
        return RatInterval(I.lo - J.hi, I.hi - J.lo)
    if op == "mul":
        prods = (I.lo * J.lo, I.lo * J.hi, I.hi * J.lo, I.hi * J.hi)
        return RatInterval(min(prods), max(prods))
    if op == "div":
        if not J.excludes_zero():
            raise DivisionByIntervalContainingZero(f"0 lies in {J!r}")
        return interval_binop("mul", I, RatInterval(1 / J.hi, 1 / J.lo))
    raise ValueError(f"unknown interval operation {op!r}")


def interval_hull(I: RatInterval, J: RatInterval) -> RatInterval:
    return RatInterval(min(I.lo, J.lo), max(I.hi, J.hi))


def hull_all(intervals: Iterable[RatInterval]) -> RatInterval:
    return reduce(interval_hull, intervals)


def interval_pow(I: RatInterval, n: int) -> RatInterval:
    """Tight image {t**n : t in I} for integer n >= 0."""
    if n < 0:
        raise ValueError("negative exponent")
    if n == 0:
        return RatInterval(ONE)
    a, b = I.lo ** n, I.hi ** n
    if n % 2:
        return RatInterval(a, b)
    if I.lo >= 0:
        return RatInterval(a, b)
    if I.hi <= 0:
        return RatInterval(b, a)
    return RatInterval(ZERO, max(a, b))


def interval_horner(coeffs: Sequence, t: RatInterval) -> RatInterval:
    """Horner evaluation of sum coeffs[k] t^k with interval t.

    Coefficients may be rationals or intervals.
    """
    acc = RatInterval.coerce(coeffs[-1]) if coeffs else RatInterval(ZERO)
    for c in reversed(coeffs[:-1]):
        acc = acc * t + c
    return acc


def solve_exact(matrix: Sequence[Sequence], rhs: Sequence) -> list[Rational]:
    """Solve a square system exactly by fraction-free (Bareiss) elimination.

    Rows are first scaled to integers; pivots are chosen by largest magnitude
    in the column. ``rhs`` may be a vector or a list of column vectors
    (given as a list of lists with ``len(rhs) == n`` rows and ``m`` columns
    is *not* supported; pass columns).
    """
    n = len(matrix)
    multi = len(rhs) > 0 and isinstance(rhs[0], (list, tuple))
    cols = [list(c) for c in rhs] if multi else [list(rhs)]
    if any(len(r) != n for r in matrix) or any(len(c) != n for c in cols):
        raise ValueError("system is not square or right-hand side has wrong length")
    m = len(cols)
    rows = []
    for i in range(n):
        ints, _ = common_denominator(list(matrix[i]) + [c[i] for c in cols])
        rows.append(ints)
    width = n + m
    prev = Integer(1)
    for k in range(n):
        piv = max(range(k, n), key=lambda r: abs(rows[r][k]))
        if rows[piv][k] == 0:
            raise SingularSystem(f"no pivot in column {k}")
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
        pk = rows[k]
        akk = pk[k]
        for i in range(k + 1, n):
            ri = rows[i]
            aik = ri[k]
            for j in range(k + 1, width):
                ri[j] = (akk * ri[j] - aik * pk[j]) // prev
            ri[k] = Integer(0)
        prev = akk
    out = []
    for c in range(m):
        x = [ZERO] * n
        for i in range(n - 1, -1, -1):
            s = Rational(rows[i][n + c])
            for j in range(i + 1, n):
                s -= rows[i][j] * x[j]
            x[i] = s / rows[i][i]
        out.append(x)
    return out if multi else out[0]


def to_fraction(q) -> Fraction:
    q = parse_rational(q)
    return Fraction(int(q.numerator), int(q.denominator))


def rational_sum(values: Iterable) -> Rational:
    return reduce(operator.add, (parse_rational(v) for v in values), ZERO)
