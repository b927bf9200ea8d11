"""Chebyshev and monomial polynomial algebra over Q.

Evaluation and basis conversion work on integer numerators over a common
denominator, which keeps degree-300+ series with thousand-digit
coefficients cheap to evaluate.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence, Union

import gmpy2

from .errors import DomainError, InconsistentOverdetermined, SingularSystem
from .exact_arith import (
    ONE,
    ZERO,
    Integer,
    RatInterval,
    Rational,
    common_denominator,
    format_rational,
    interval_horner,
    parse_rational,
    solve_exact,
)

BASIS_TAGS = ("chebyshev", "phi", "psi-minus", "psi-plus", "monomial")


def _trim(coeffs) -> tuple:
    c = [parse_rational(v) for v in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (ZERO,)


def _split(x: Rational) -> tuple[Integer, Integer]:
    x = parse_rational(x)
    return x.numerator, x.denominator


# ---------------------------------------------------------------------------
# monomial basis
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class PowerPoly:
    """Polynomial sum coeffs[k] x^k with rational coefficients."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable = (0,)):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @classmethod
    def constant(cls, c) -> "PowerPoly":
        return cls((c,))

    @classmethod
    def x(cls) -> "PowerPoly":
        return cls((0, 1))

    @classmethod
    def linear(cls, a, b) -> "PowerPoly":
        """a + b x"""
        return cls((a, b))

    @property
    def degree(self) -> int:
        return -1 if self.is_zero() else len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @cached_property
    def _scaled(self):
        return common_denominator(self.coeffs)

    def __call__(self, x) -> Rational:
        p, q = _split(x)
        ints, den = self._scaled
        acc = Integer(0)
        qp = Integer(1)
        # sum a_k p^k q^(n-k), built from the top
        for a in reversed(ints):
            acc = acc * p + a * qp
            qp *= q
        n = len(ints) - 1
        return Rational(acc, den * q ** n)

    def eval_interval(self, t: RatInterval) -> RatInterval:
        return interval_horner(self.coeffs, t)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, PowerPoly):
            return other
        return PowerPoly((parse_rational(other),))

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = o.coeffs + (ZERO,) * (n - len(o.coeffs))
        return PowerPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return PowerPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, PowerPoly):
            c = parse_rational(other)
            return PowerPoly(c * v for v in self.coeffs)
        a, da = self._scaled
        b, db = other._scaled
        out = [Integer(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        den = da * db
        return PowerPoly(Rational(v, den) for v in out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result, base = PowerPoly((ONE,)), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, PowerPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PowerPoly(degree={self.degree})"

    def derivative(self) -> "PowerPoly":
        return PowerPoly([k * c for k, c in enumerate(self.coeffs)][1:] or [0])

    def antiderivative(self) -> "PowerPoly":
        """Antiderivative vanishing at x = 0."""
        return PowerPoly([ZERO] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def divmod(self, divisor: "PowerPoly") -> tuple["PowerPoly", "PowerPoly"]:
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dv = divisor.coeffs
        lead = dv[-1]
        dq = len(rem) - len(dv)
        if dq < 0:
            return PowerPoly((0,)), self
        quot = [ZERO] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(dv) - 1] / lead
            quot[k] = c
            if c:
                for j, d in enumerate(dv):
                    rem[k + j] -= c * d
        return PowerPoly(quot), PowerPoly(rem[: len(dv) - 1] or [0])

    def shift(self, a) -> "PowerPoly":
        """Coefficients of p(x + a), i.e. the Taylor coefficients at a."""
        a = parse_rational(a)
        c = list(self.coeffs)
        n = len(c)
        for i in range(n):
            for k in range(n - 2, i - 1, -1):
                c[k] += a * c[k + 1]
        return PowerPoly(c)

    def taylor_at(self, a, count: int) -> list[Rational]:
        t = list(self.shift(a).coeffs)
        return (t + [ZERO] * count)[:count]

    def compose(self, inner: "PowerPoly") -> "PowerPoly":
        acc = PowerPoly((self.coeffs[-1],))
        for c in reversed(self.coeffs[:-1]):
            acc = acc * inner + c
        return acc

    def to_cheb(self) -> "ChebSeries":
        return power_to_cheb(self)


# ---------------------------------------------------------------------------
# Chebyshev basis
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class NormBoundTriple:
    f_bound: Rational
    df_bound: Rational
    d2f_bound: Rational

    def __post_init__(self):
        if min(self.f_bound, self.df_bound, self.d2f_bound) < 0:
            raise ValueError("norm bounds must be nonnegative")


@dataclass(frozen=True, eq=False)
class ChebSeries:
    """Finite expansion sum coeffs[n] T_n(x)."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable = (0,)):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @classmethod
    def monomial_T(cls, n: int, scale=1) -> "ChebSeries":
        return cls([0] * n + [scale])

    @property
    def degree(self) -> int:
        return -1 if self.is_zero() else len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @cached_property
    def _scaled(self):
        return common_denominator(self.coeffs)

    def __call__(self, x) -> Rational:
        return cheb_eval(self, x)

    def eval_interval(self, t: RatInterval) -> RatInterval:
        return self.to_power().eval_interval(t)

    def derivative(self) -> "ChebSeries":
        return cheb_derivative(self)

    def norm_bounds(self) -> NormBoundTriple:
        return norm_bounds(self)

    @cached_property
    def _power(self) -> PowerPoly:
        return cheb_to_power(self)

    def to_power(self) -> PowerPoly:
        return self._power

    def _coerce(self, other):
        if isinstance(other, ChebSeries):
            return other
        return ChebSeries((parse_rational(other),))

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = o.coeffs + (ZERO,) * (n - len(o.coeffs))
        return ChebSeries(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return ChebSeries(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ChebSeries):
            c = parse_rational(other)
            return ChebSeries(c * v for v in self.coeffs)
        # T_m T_n = (T_{m+n} + T_{|m-n|}) / 2, done on integer numerators
        a, da = self._scaled
        b, db = other._scaled
        out = [Integer(0)] * (len(a) + len(b) - 1)
        for m, am in enumerate(a):
            if not am:
                continue
            for n, bn in enumerate(b):
                if bn:
                    t = am * bn
                    out[m + n] += t
                    out[abs(m - n)] += t
        den = 2 * da * db
        return ChebSeries(Rational(v, den) for v in out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, ChebSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"ChebSeries(degree={self.degree})"


def _check_domain(x: Rational):
    if not (-1 <= x <= 1):
        raise DomainError(f"x = {x} lies outside [-1, 1]")


def cheb_eval(s: ChebSeries, x) -> Rational:
    """Exact Clenshaw evaluation, carried out on integers.

    With c_k = a_k / D and x = p/q the scaled quantities
    B_k = D q^(n-k) b_k obey B_k = 2p B_{k+1} - q^2 B_{k+2} + a_k q^(n-k).
    """
    x = parse_rational(x)
    _check_domain(x)
    return _clenshaw(s, x)


def _clenshaw(s: ChebSeries, x: Rational) -> Rational:
    a, den = s._scaled
    n = len(a) - 1
    if n == 0:
        return Rational(a[0], den)
    p, q = x.numerator, x.denominator
    q2 = q * q
    b1 = b2 = Integer(0)
    qk = Integer(1)  # q^(n-k)
    for k in range(n, 0, -1):
        b1, b2 = 2 * p * b1 - q2 * b2 + a[k] * qk, b1
        qk *= q
    # f = x b_1 - b_2 + c_0, scaled by D q^n
    total = p * b1 - q2 * b2 + a[0] * qk
    return Rational(total, den * qk)


def cheb_derivative(s: ChebSeries) -> ChebSeries:
    """Coefficients of s' from c'_{k-1} = c'_{k+1} + 2k c_k."""
    c = s.coeffs
    n = len(c) - 1
    if n == 0:
        return ChebSeries((ZERO,))
    d = [ZERO] * (n + 1)
    for k in range(n, 0, -1):
        d[k - 1] = (d[k + 1] if k + 1 <= n else ZERO) + 2 * k * c[k]
    d[0] /= 2
    return ChebSeries(d[:n])


def norm_bounds(s: ChebSeries) -> NormBoundTriple:
    f = sum((abs(c) for c in s.coeffs), ZERO)
    df = sum((n * n * abs(c) for n, c in enumerate(s.coeffs)), ZERO)
    d2f = sum((Rational(n * n * (n * n - 1), 3) * abs(c) for n, c in enumerate(s.coeffs)), ZERO)
    return NormBoundTriple(f, df, d2f)


def power_to_cheb(p: PowerPoly) -> ChebSeries:
    """Horner in the Chebyshev basis using x T_k = (T_{k+1} + T_{|k-1|})/2."""
    a, den = p._scaled
    n = len(a) - 1
    s = [a[n]]  # numerators over den * 2^j
    scale = Integer(1)
    for i in range(n - 1, -1, -1):
        t = [Integer(0)] * (len(s) + 1)
        for k, v in enumerate(s):
            if not v:
                continue
            if k == 0:
                t[1] += 2 * v
            else:
                t[k + 1] += v
                t[k - 1] += v
        scale *= 2
        t[0] += a[i] * scale
        s = t
    return ChebSeries(Rational(v, den * scale) for v in s)


def cheb_to_power(s: ChebSeries) -> PowerPoly:
    """Clenshaw recurrence run on integer polynomial coefficients."""
    a, den = s._scaled
    n = len(a) - 1
    if n == 0:
        return PowerPoly((Rational(a[0], den),))
    b1: list = [Integer(0)]
    b2: list = [Integer(0)]

    def step(bk1, bk2, c, factor):
        out = [Integer(0)] * (max(len(bk1) + 1, len(bk2)))
        for i, v in enumerate(bk1):
            out[i + 1] += factor * v
        for i, v in enumerate(bk2):
            out[i] -= v
        out[0] += c
        return out

    for k in range(n, 0, -1):
        b1, b2 = step(b1, b2, a[k], 2), b1
    res = step(b1, b2, a[0], 1)
    return PowerPoly(Rational(v, den) for v in res)


# ---------------------------------------------------------------------------
# the two custom bases
# ---------------------------------------------------------------------------
def basis_phi(n: int) -> ChebSeries:
    """phi_n = T_n + a_n (1+x) + b_n (1-x); phi_0 = phi_1 = 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n < 2:
        return ChebSeries((ZERO,))
    b = Rational(2 * n * n - 1, 2)
    a = b if n % 2 == 0 else -b
    c = [ZERO] * (n + 1)
    c[n] += 1
    c[0] += a + b
    c[1] += a - b
    return ChebSeries(c)


def basis_phi_ab(n: int) -> tuple[Rational, Rational]:
    b = Rational(2 * n * n - 1, 2)
    return (b if n % 2 == 0 else -b), b


def basis_psi(sign: str, n: int) -> ChebSeries:
    """psi_{+,n} = T_n + (n^2-2)(1-x); psi_{-,n} = T_n + (-1)^n (n^2-2)(1+x)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = Rational(n * n - 2)
    c = [ZERO] * (max(n, 1) + 1)
    c[n] += 1
    if sign in ("+", "plus"):
        c[0] += k
        c[1] -= k
    elif sign in ("-", "minus"):
        k = k if n % 2 == 0 else -k
        c[0] += k
        c[1] += k
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    return ChebSeries(c)


def series_from_basis(coeffs: Sequence, basis: str, first: int | None = None) -> ChebSeries:
    """Assemble sum coeffs[i] B_{first+i} as a plain Chebyshev series."""
    coeffs = [parse_rational(c) for c in coeffs]
    if basis == "chebyshev":
        start = 0 if first is None else first
        return ChebSeries([ZERO] * start + coeffs)
    if basis == "monomial":
        start = 0 if first is None else first
        return PowerPoly([ZERO] * start + coeffs).to_cheb()
    if basis == "phi":
        start = 2 if first is None else first
        make = basis_phi
    elif basis in ("psi-minus", "psi-plus"):
        start = 1 if first is None else first
        sign = "-" if basis == "psi-minus" else "+"
        make = lambda n: basis_psi(sign, n)  # noqa: E731
    else:
        raise ValueError(f"unknown basis {basis!r}")
    total = ChebSeries((ZERO,))
    for i, c in enumerate(coeffs):
        if c:
            total = total + make(start + i) * c
    return total


# ---------------------------------------------------------------------------
# exact re-expansion
# ---------------------------------------------------------------------------
def uniform_nodes(D: int, count: int | None = None) -> list[Rational]:
    """x_k = -1/2 + k/D for k = 0 .. count-1 (default D+1 nodes)."""
    count = D + 1 if count is None else count
    return [Rational(-1, 2) + Rational(k, D) for k in range(count)]


SampleSource = Union[Callable[[Rational], Rational], Sequence]


def _samples(source: SampleSource, nodes: Sequence[Rational]) -> list[Rational]:
    if callable(source):
        return [parse_rational(source(x)) for x in nodes]
    vals = [parse_rational(v) for v in source]
    if len(vals) != len(nodes):
        raise ValueError("sample count does not match node count")
    return vals


def _newton_coefficients(xs: Sequence[Rational], fs: Sequence[Rational]) -> list[Rational]:
    d = list(fs)
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            d[i] = (d[i] - d[i - 1]) / (xs[i] - xs[i - j])
    return d


def _newton_to_cheb(xs: Sequence[Rational], d: Sequence[Rational]) -> ChebSeries:
    """Expand sum d_j prod_{i<j} (x - x_i) in the Chebyshev basis."""
    n = len(d) - 1
    s = [d[n]]
    for j in range(n - 1, -1, -1):
        xj = xs[j]
        t = [ZERO] * (len(s) + 1)
        for k, v in enumerate(s):
            if not v:
                continue
            if k == 0:
                t[1] += v
            else:
                h = v / 2
                t[k + 1] += h
                t[k - 1] += h
            t[k] -= xj * v
        t[0] += d[j]
        s = t
    return ChebSeries(s)


def _equispaced(xs: Sequence[Rational]):
    if len(xs) < 2:
        return None
    h = xs[1] - xs[0]
    if h == 0 or any(xs[i] != xs[0] + i * h for i in range(len(xs))):
        return None
    return xs[0], h


def _equispaced_to_cheb(a: Rational, h: Rational, fs: Sequence[Rational]) -> ChebSeries:
    """Integer-only interpolation on x_i = a + i h.

    Forward differences give Newton coefficients d_j = D^j f_0 / (j! h^j);
    everything is then carried on integer numerators over one denominator.
    """
    n = len(fs) - 1
    vals, den = common_denominator(fs)
    diffs = [vals[0]]
    row = list(vals)
    for _ in range(n):
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
        diffs.append(row[0])
    hn, hd = h.numerator, h.denominator
    fact = [Integer(1)]
    for j in range(1, n + 1):
        fact.append(fact[-1] * j)
    # d_j = e_j / (den * n! * hn^n)
    e = [diffs[j] * hd ** j * (fact[n] // fact[j]) * hn ** (n - j) for j in range(n + 1)]
    L = int(gmpy2.lcm(a.denominator, hd))
    La, Lh = a * L, h * L
    La, Lh = La.numerator, Lh.numerator
    s = [e[n]]
    step_den = Integer(2 * L)
    for j in range(n - 1, -1, -1):
        c = 2 * (La + j * Lh)
        t = [Integer(0)] * (len(s) + 1)
        for k, v in enumerate(s):
            if not v:
                continue
            if k == 0:
                t[1] += 2 * L * v
            else:
                t[k + 1] += L * v
                t[k - 1] += L * v
            t[k] -= c * v
        t[0] += e[j] * step_den ** (n - j)
        s = t
    total = den * fact[n] * hn ** n * step_den ** n
    return ChebSeries(Rational(v, total) for v in s)


def _newton_to_power(xs: Sequence[Rational], d: Sequence[Rational]) -> PowerPoly:
    n = len(d) - 1
    s = [d[n]]
    for j in range(n - 1, -1, -1):
        xj = xs[j]
        t = [ZERO] * (len(s) + 1)
        for k, v in enumerate(s):
            t[k + 1] += v
            t[k] -= xj * v
        t[0] += d[j]
        s = t
    return PowerPoly(s)


def reexpand(
    sample_source: SampleSource,
    degree: int,
    nodes: Sequence[Rational],
    *,
    basis: str = "chebyshev",
    method: str = "newton",
):
    """Exact interpolant of the given degree through the samples.

    The first ``degree + 1`` nodes determine the polynomial; any further
    node is checked exactly and a mismatch raises InconsistentOverdetermined.
    ``method="bareiss"`` solves the Chebyshev (or Vandermonde) system
    directly and is meant for small cases and cross-checks.
    """
    nodes = [parse_rational(x) for x in nodes]
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if len(nodes) < degree + 1:
        raise ValueError(f"need at least {degree + 1} nodes, got {len(nodes)}")
    for x in nodes:
        _check_domain(x)
    if len(set(nodes)) != len(nodes):
        raise SingularSystem("nodes are not pairwise distinct")
    if basis not in ("chebyshev", "monomial"):
        raise ValueError(f"re-expansion basis must be chebyshev or monomial, got {basis!r}")
    values = _samples(sample_source, nodes)
    xs, fs = nodes[: degree + 1], values[: degree + 1]
    grid = _equispaced(xs) if method == "newton" and basis == "chebyshev" else None
    if grid is not None:
        result = _equispaced_to_cheb(grid[0], grid[1], fs)
    elif method == "newton":
        d = _newton_coefficients(xs, fs)
        result = _newton_to_cheb(xs, d) if basis == "chebyshev" else _newton_to_power(xs, d)
    elif method == "bareiss":
        if basis == "chebyshev":
            rows = [[_cheb_T_values(x, degree)[n] for n in range(degree + 1)] for x in xs]
            result = ChebSeries(solve_exact(rows, fs))
        else:
            rows = [[x ** n for n in range(degree + 1)] for x in xs]
            result = PowerPoly(solve_exact(rows, fs))
    else:
        raise ValueError(f"unknown method {method!r}")
    for x, v in zip(nodes[degree + 1 :], values[degree + 1 :]):
        if result(x) != v:
            raise InconsistentOverdetermined(
                f"degree-{degree} interpolant misses the sample at x = {x}"
            )
    return result


def _cheb_T_values(x: Rational, n: int) -> list[Rational]:
    t = [ONE, x]
    for _ in range(2, n + 1):
        t.append(2 * x * t[-1] - t[-2])
    return t[: n + 1]


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------
def series_to_json(coeffs: Sequence, basis: str = "chebyshev", *, first: int | None = None, candidate: bool = False) -> dict:
    if basis not in BASIS_TAGS:
        raise ValueError(f"unknown basis {basis!r}")
    if isinstance(coeffs, (ChebSeries, PowerPoly)):
        coeffs = coeffs.coeffs
    return {
        "basis": basis,
        "first_index": first,
        "candidate": bool(candidate),
        "coefficients": [format_rational(c) for c in coeffs],
    }


def series_from_json(data: dict) -> ChebSeries:
    basis = data.get("basis", "chebyshev")
    coeffs = [parse_rational(c) for c in data["coefficients"]]
    return series_from_basis(coeffs, basis, data.get("first_index"))


def abs_sum(coeffs: Iterable[Rational]) -> Rational:
    return sum((abs(c) for c in coeffs), ZERO)


def lcm_denominator(s: ChebSeries) -> Integer:
    return s._scaled[1]


__all__ = [
    "PowerPoly",
    "ChebSeries",
    "NormBoundTriple",
    "cheb_eval",
    "cheb_derivative",
    "norm_bounds",
    "power_to_cheb",
    "cheb_to_power",
    "basis_phi",
    "basis_psi",
    "series_from_basis",
    "uniform_nodes",
    "reexpand",
    "series_to_json",
    "series_from_json",
    "abs_sum",
]
