"""Exact model data for the co-rotational Skyrme equation in the x variable.

The static equation reads g'' + Phi(x, g, g') = 0 with
Phi = (Phi_0 + Phi_1 z + Phi_2 z^2) / Psi, r = (1+x)/(1-x) and
F(r) = 2 arctan(r g(x)) up to the substitution used to compactify.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import gmpy2

from .chebyshev import ChebSeries, PowerPoly
from .errors import (
    BoundaryPole,
    CancellationFailure,
    CanonicalFormViolation,
    DomainError,
    ZeroDenominator,
)
from .exact_arith import ONE, ZERO, RatInterval, Rational, interval_pow, parse_rational

ONE_PLUS_X = PowerPoly((1, 1))
ONE_MINUS_X = PowerPoly((1, -1))
ONE_MINUS_X2 = PowerPoly((1, 0, -1))


# ---------------------------------------------------------------------------
# bivariate polynomials  sum_k P_k(x) y^k
# ---------------------------------------------------------------------------
class BivarPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[PowerPoly]):
        c = [p if isinstance(p, PowerPoly) else PowerPoly((p,)) for p in coeffs]
        while len(c) > 1 and c[-1].is_zero():
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c) if c else (PowerPoly((0,)),))

    def __setattr__(self, name, value):
        raise AttributeError("BivarPoly is immutable")

    @classmethod
    def from_terms(cls, terms: Iterable[tuple]) -> "BivarPoly":
        """Terms (scale, alpha, beta, P coefficients, k)."""
        out: dict[int, PowerPoly] = {}
        for scale, alpha, beta, pc, k in terms:
            p = PowerPoly(pc) * parse_rational(scale) * ONE_PLUS_X ** alpha * ONE_MINUS_X ** beta
            out[k] = out.get(k, PowerPoly((0,))) + p
        top = max(out) if out else 0
        return cls([out.get(k, PowerPoly((0,))) for k in range(top + 1)])

    @property
    def y_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def x_degree(self) -> int:
        return max(p.degree for p in self.coeffs)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.coeffs)

    def _coerce(self, other) -> "BivarPoly":
        if isinstance(other, BivarPoly):
            return other
        if isinstance(other, PowerPoly):
            return BivarPoly((other,))
        return BivarPoly((PowerPoly((parse_rational(other),)),))

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        z = PowerPoly((0,))
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = o.coeffs + (z,) * (n - len(o.coeffs))
        return BivarPoly(p + q for p, q in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly(-p for p in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out = [PowerPoly((0,))] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, p in enumerate(self.coeffs):
            if p.is_zero():
                continue
            for j, q in enumerate(o.coeffs):
                if not q.is_zero():
                    out[i + j] = out[i + j] + p * q
        return BivarPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, BivarPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"BivarPoly(x_degree={self.x_degree}, y_degree={self.y_degree})"

    def d_dy(self) -> "BivarPoly":
        return BivarPoly([p * k for k, p in enumerate(self.coeffs)][1:] or [PowerPoly((0,))])

    def d_dx(self) -> "BivarPoly":
        return BivarPoly(p.derivative() for p in self.coeffs)

    def __call__(self, x, y) -> Rational:
        x, y = parse_rational(x), parse_rational(y)
        acc = ZERO
        for p in reversed(self.coeffs):
            acc = acc * y + p(x)
        return acc

    def at_x(self, x) -> PowerPoly:
        """The univariate polynomial y -> P(x, y)."""
        x = parse_rational(x)
        return PowerPoly(p(x) for p in self.coeffs)

    def compose(self, g_powers: Sequence[PowerPoly]) -> PowerPoly:
        """x -> P(x, g(x)) given g_powers[k] = g^k."""
        if len(g_powers) < len(self.coeffs):
            raise ValueError("not enough powers of g supplied")
        acc = PowerPoly((0,))
        for p, gk in zip(self.coeffs, g_powers):
            if not p.is_zero():
                acc = acc + p * gk
        return acc

    def composed_degree(self, g_degree: int) -> int:
        """Degree bound of x -> P(x, g(x)) from the structure alone."""
        return max((p.degree + k * g_degree for k, p in enumerate(self.coeffs) if not p.is_zero()), default=-1)

    def divide_exact(self, divisor: PowerPoly, what: str = "polynomial") -> "BivarPoly":
        out = []
        for k, p in enumerate(self.coeffs):
            q, r = p.divmod(divisor)
            if not r.is_zero():
                raise CancellationFailure(f"{what}: y^{k} coefficient leaves a remainder")
            out.append(q)
        return BivarPoly(out)

    def canonical(self) -> "BivarCanonical":
        return BivarCanonical.from_bivar(self)


def _strip_root(p: PowerPoly, root: int) -> tuple[int, PowerPoly]:
    """Largest m with (x - root)^m | p, and the cofactor."""
    lin = PowerPoly((-root, 1))
    m = 0
    while not p.is_zero() and p(root) == 0:
        p, r = p.divmod(lin)
        assert r.is_zero()
        m += 1
    return m, p


# ---------------------------------------------------------------------------
# canonical form  sum_k (1+x)^a_k (1-x)^b_k P_k(x) y^k
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class CanonicalTerm:
    alpha: int
    beta: int
    P: PowerPoly
    k: int


class BivarCanonical:
    """Bivariate polynomial in canonical form, evaluated term by term."""

    __slots__ = ("terms", "__dict__")

    def __init__(self, terms: Iterable[CanonicalTerm]):
        terms = tuple(sorted(terms, key=lambda t: -t.k))
        for t in terms:
            if t.alpha < 0 or t.beta < 0:
                raise CanonicalFormViolation("negative exponent")
            if t.P.is_zero():
                raise CanonicalFormViolation(f"zero cofactor stored for y^{t.k}")
            if t.P(1) == 0 or t.P(-1) == 0:
                raise CanonicalFormViolation(f"cofactor of y^{t.k} vanishes at an endpoint")
        if len({t.k for t in terms}) != len(terms):
            raise CanonicalFormViolation("repeated y power")
        self.terms = terms

    @classmethod
    def from_bivar(cls, b: BivarPoly) -> "BivarCanonical":
        out = []
        for k, p in enumerate(b.coeffs):
            if p.is_zero():
                continue
            a, p1 = _strip_root(p, -1)
            m, p2 = _strip_root(p1, 1)
            # (x - 1)^m = (-1)^m (1 - x)^m
            out.append(CanonicalTerm(a, m, p2 * (-1) ** m, k))
        return cls(out)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple]) -> "BivarCanonical":
        """Terms (scale, alpha, beta, P coefficients, k) as printed."""
        return cls(CanonicalTerm(a, b, PowerPoly(pc) * parse_rational(s), k) for s, a, b, pc, k in terms)

    def to_bivar(self) -> BivarPoly:
        out: dict[int, PowerPoly] = {}
        for t in self.terms:
            out[t.k] = t.P * ONE_PLUS_X ** t.alpha * ONE_MINUS_X ** t.beta
        top = max(out) if out else 0
        return BivarPoly([out.get(k, PowerPoly((0,))) for k in range(top + 1)])

    @cached_property
    def _max_powers(self):
        return (max((t.alpha for t in self.terms), default=0), max((t.beta for t in self.terms), default=0))

    def __call__(self, x, y) -> Rational:
        x, y = parse_rational(x), parse_rational(y)
        return sum(((1 + x) ** t.alpha * (1 - x) ** t.beta * t.P(x) * y ** t.k for t in self.terms), ZERO)

    def enclose(self, X: RatInterval, Y: RatInterval, cache: dict | None = None) -> RatInterval:
        """Interval evaluation of the canonical representation."""
        if cache is None:
            cache = {}
        up = cache.get("1+x")
        if up is None:
            up = cache["1+x"] = RatInterval(1 + X.lo, 1 + X.hi)
            cache["1-x"] = RatInterval(1 - X.hi, 1 - X.lo)
        dn = cache["1-x"]
        acc = RatInterval(ZERO)
        for t in self.terms:
            key = ("P", id(t.P))
            pv = cache.get(key)
            if pv is None:
                pv = cache[key] = t.P.eval_interval(X)
            term = pv
            if t.alpha:
                term = term * _cached_pow(cache, "1+x", up, t.alpha)
            if t.beta:
                term = term * _cached_pow(cache, "1-x", dn, t.beta)
            if t.k:
                term = term * _cached_pow(cache, "y", Y, t.k)
            acc = acc + term
        return acc

    def __eq__(self, other):
        if isinstance(other, BivarCanonical):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return "BivarCanonical(" + ", ".join(
            f"(1+x)^{t.alpha}(1-x)^{t.beta}P_{t.P.degree} y^{t.k}" for t in self.terms
        ) + ")"

    def to_json(self) -> list:
        from .exact_arith import format_rational

        return [
            {"alpha": t.alpha, "beta": t.beta, "k": t.k, "P": [format_rational(c) for c in t.P.coeffs]}
            for t in self.terms
        ]


def _cached_pow(cache, name, base, n):
    key = (name, n)
    v = cache.get(key)
    if v is None:
        v = cache[key] = interval_pow(base, n)
    return v


# ---------------------------------------------------------------------------
# the printed data
# ---------------------------------------------------------------------------
_H = lambda e: Rational(1, 2 ** e)  # noqa: E731

PHI0_TERMS = (
    (_H(5), 5, 0, (3, 1), 7),
    (-_H(6), 1, 3, (33, -58, -16, 18, 7), 5),
    (_H(9), 0, 7, (47, -51, 33, 3), 3),
    (_H(9), 0, 11, (1,), 1),
)
PHI1_TERMS = (
    (-_H(4), 7, 0, (1,), 6),
    (-_H(5), 2, 4, (14, -21, 4, 7), 4),
    (_H(8), 0, 8, (23, -31, 13, 3), 2),
    (_H(9), 0, 12, (1,), 0),
)
# Phi_2 = -(1-x^2)[...]; the (1-x^2) is folded into the exponents
PHI2_TERMS = (
    (-_H(5), 7, 1, (1,), 5),
    (-_H(6), 3, 5, (7, -10, 7), 3),
    (_H(9), 1, 9, (3, -10, 3), 1),
)
PSI_TERMS = (
    (_H(6), 7, 1, (1,), 6),
    (_H(8), 3, 5, (11, -10, 11), 4),
    (_H(10), 1, 9, (11, -10, 11), 2),
    (_H(12), 1, 13, (1,), 0),
)
# the explicit polynomial printed for Psi_hat * d_y Phi_hat_1 - d_y Psi_hat * Phi_hat_1
PSI_HAT_1_TERMS = (
    (_H(11), 7, 3, (17, -43, 7, 3), 9),
    (-_H(11), 5, 7, (17, -15, 7, 7), 7),
    (-_H(14), 1, 11, (285, -637, 794, -386, 41, 95), 5),
    (-_H(15), 1, 15, (25, -31, 15, 7), 3),
    (_H(19), 0, 19, (1, -12, 3), 1),
)


@dataclass(frozen=True, eq=False)
class PhiData:
    Phi0: BivarCanonical
    Phi1: BivarCanonical
    Phi2: BivarCanonical
    Psi: BivarCanonical
    phi: tuple  # BivarPoly Phi_0, Phi_1, Phi_2
    psi: BivarPoly
    phi2_hat: BivarPoly
    psi_hat: BivarPoly

    def Phi(self, k: int) -> BivarPoly:
        return self.phi[k]


def build_phi_data() -> PhiData:
    """Load the printed coefficients and machine-check their identities."""
    can = [BivarCanonical.from_terms(t) for t in (PHI0_TERMS, PHI1_TERMS, PHI2_TERMS, PSI_TERMS)]
    phi = tuple(c.to_bivar() for c in can[:3])
    psi = can[3].to_bivar()
    # Psi(+-1, y) = 0 identically
    for x0 in (-1, 1):
        if not psi.at_x(x0).is_zero():
            raise CancellationFailure(f"Psi({x0}, y) does not vanish")
    psi_hat = psi.divide_exact(ONE_MINUS_X2, "Psi / (1-x^2)")
    phi2_hat = phi[2].divide_exact(ONE_MINUS_X2, "Phi_2 / (1-x^2)")
    _check_boundary_identities(phi)
    return PhiData(can[0], can[1], can[2], can[3], phi, psi, phi2_hat, psi_hat)


def boundary_polynomial(phi: Sequence[BivarPoly], x0: int) -> list[PowerPoly]:
    """Coefficients in z of sum_k Phi_k(x0, y) z^k, each a polynomial in y."""
    return [p.at_x(x0) for p in phi]


def _check_boundary_identities(phi: Sequence[BivarPoly]) -> None:
    y = PowerPoly((0, 1))
    left = boundary_polynomial(phi, -1)
    a = PowerPoly((1, 0, 8)) * 4  # 4(1 + 8y^2)
    if left != [a * y, a * 2, PowerPoly((0,))]:
        raise CancellationFailure("boundary identity at x = -1 fails")
    right = boundary_polynomial(phi, 1)
    b = y ** 6 * 4
    if right != [b * y, b * (-2), PowerPoly((0,))]:
        raise CancellationFailure("boundary identity at x = 1 fails")


_DATA: PhiData | None = None


def phi_data() -> PhiData:
    global _DATA
    if _DATA is None:
        _DATA = build_phi_data()
    return _DATA


def eval_phi(x, y, z, data: PhiData | None = None) -> Rational:
    x, y, z = parse_rational(x), parse_rational(y), parse_rational(z)
    if x in (-1, 1):
        raise BoundaryPole(f"Psi vanishes identically at x = {x}")
    if not (-1 < x < 1):
        raise DomainError(f"x = {x} outside (-1, 1)")
    d = data or phi_data()
    den = d.psi(x, y)
    if den == 0:
        raise ZeroDenominator(f"Psi({x}, {y}) = 0")
    num = d.phi[0](x, y) + z * (d.phi[1](x, y) + z * d.phi[2](x, y))
    return num / den


# ---------------------------------------------------------------------------
# partial derivatives as pole-free rational functions
# ---------------------------------------------------------------------------
class PhiRational:
    """(sum_k N_k(x, y) z^k) / (D(x, y)^m (1-x^2)^e) with canonical N_k, D."""

    def __init__(self, numerators: Sequence[BivarPoly], denominator: BivarPoly, power: int, pole: int = 0,
                 name: str = ""):
        self.numerators = tuple(numerators)
        self.denominator = denominator
        self.power = power
        self.pole = pole
        self.name = name
        self.num_canonical = tuple(
            None if n.is_zero() else BivarCanonical.from_bivar(n) for n in self.numerators
        )
        self.den_canonical = BivarCanonical.from_bivar(denominator)

    @property
    def z_degree(self) -> int:
        return len(self.numerators) - 1

    @property
    def active_dims(self) -> tuple:
        return (0, 1) if self.z_degree == 0 else (0, 1, 2)

    def evaluate(self, x, y, z=ZERO) -> Rational:
        x, y, z = parse_rational(x), parse_rational(y), parse_rational(z)
        den = self.denominator(x, y) ** self.power * (1 - x * x) ** self.pole
        if den == 0:
            raise ZeroDenominator(f"{self.name}: denominator vanishes at ({x}, {y})")
        num = ZERO
        for n in reversed(self.numerators):
            num = num * z + n(x, y)
        return num / den

    def enclose(self, X: RatInterval, Y: RatInterval, Z: RatInterval | None = None) -> RatInterval:
        cache: dict = {}
        acc = RatInterval(ZERO)
        for k, nc in enumerate(self.num_canonical):
            if nc is None:
                continue
            term = nc.enclose(X, Y, cache)
            if k:
                if Z is None:
                    raise ValueError(f"{self.name} depends on z")
                term = term * interval_pow(Z, k)
            acc = acc + term
        den = interval_pow(self.den_canonical.enclose(X, Y, cache), self.power)
        if self.pole:
            den = den * interval_pow(RatInterval(ONE) - interval_pow(X, 2), self.pole)
        return acc / den

    def __getstate__(self):
        return (self.numerators, self.denominator, self.power, self.pole, self.name)

    def __setstate__(self, state):
        self.__init__(*state)


@dataclass(frozen=True, eq=False)
class PhiPartials:
    d_z: PhiRational
    d_y: PhiRational
    d_zz: PhiRational
    d_yz: PhiRational
    d_yy: PhiRational
    psi_hat_k: tuple  # Psi_hat_1, Psi_hat_2 as polynomials
    n0: BivarPoly  # Psi_hat d_y Phi_0 - d_y Psi_hat Phi_0 (Psi_hat_0 = n0 / (1-x^2))


def phi_partials(data: PhiData | None = None) -> PhiPartials:
    d = data or phi_data()
    ph, dph = d.psi_hat, d.psi_hat.d_dy()
    n = [ph * p.d_dy() - dph * p for p in d.phi]
    hat = [None,
           n[1].divide_exact(ONE_MINUS_X2, "Psi_hat_1"),
           n[2].divide_exact(ONE_MINUS_X2, "Psi_hat_2")]
    printed = BivarCanonical.from_terms(PSI_HAT_1_TERMS).to_bivar()
    if hat[1] != printed:
        raise CancellationFailure("Psi_hat_1 differs from the printed polynomial")
    m0 = (ph * n[0].d_dy() - dph * n[0] * 2).divide_exact(ONE_MINUS_X2, "d_yy numerator, z^0")
    m = [m0] + [ph * hat[k].d_dy() - dph * hat[k] * 2 for k in (1, 2)]
    return PhiPartials(
        d_z=PhiRational([d.phi[1], d.phi[2] * 2], ph, 1, pole=1, name="d_z Phi"),
        d_y=PhiRational(n, ph, 2, pole=1, name="d_y Phi"),
        d_zz=PhiRational([d.phi2_hat * 2], ph, 1, name="d_zz Phi"),
        d_yz=PhiRational([hat[1], hat[2] * 2], ph, 2, name="d_yz Phi"),
        d_yy=PhiRational(m, ph, 3, name="d_yy Phi"),
        psi_hat_k=(hat[1], hat[2]),
        n0=n[0],
    )


# ---------------------------------------------------------------------------
# residual and linearization
# ---------------------------------------------------------------------------
def _derivs(g):
    if isinstance(g, (ChebSeries, PowerPoly)):
        d1 = g.derivative()
        return g, d1, d1.derivative()
    if isinstance(g, tuple) and len(g) == 3:
        return g
    raise TypeError("g must be a ChebSeries, PowerPoly or a (g, g', g'') triple of callables")


def residual(g, x, data: PhiData | None = None) -> Rational:
    """R(g)(x) = g''(x) + Phi(x, g(x), g'(x)), exactly."""
    g0, g1, g2 = _derivs(g)
    x = parse_rational(x)
    return parse_rational(g2(x)) + eval_phi(x, g0(x), g1(x), data)


def residual_pointwise(data: PhiData | None = None):
    """Cached-derivative residual evaluator for repeated use."""
    d = data or phi_data()

    def run(g, x):
        return residual(g, x, d)

    return run


@dataclass(frozen=True, eq=False)
class LinearizationCoeffs:
    """p = P2/P3 and q = Q2/P3^2 as explicit polynomials in x.

    L u = L0 u + p u' + q u with L0 u = u'' - 8x/(1-x^2) u' + 4/(1-x^2) u.
    """

    p_num: PowerPoly
    p_den: PowerPoly
    q_num: PowerPoly
    q_den: PowerPoly
    p_parts: tuple  # bivariate z-coefficients of P2
    q_parts: tuple  # bivariate z-coefficients of Q2
    l0_first: tuple = (PowerPoly((0, -8)), ONE_MINUS_X2)
    l0_zeroth: tuple = (PowerPoly((4,)), ONE_MINUS_X2)

    def p(self, x) -> Rational:
        return self.p_num(x) / self.p_den(x)

    def q(self, x) -> Rational:
        return self.q_num(x) / self.q_den(x)

    def degrees(self) -> dict:
        return {"P2": self.p_num.degree, "P3": self.p_den.degree, "Q2": self.q_num.degree}


def z_compose(parts: Sequence[BivarPoly], g_powers, dg: PowerPoly) -> PowerPoly:
    acc = PowerPoly((0,))
    for k in range(len(parts) - 1, -1, -1):
        acc = acc * dg + parts[k].compose(g_powers)
    return acc


def linearization_parts(data: PhiData | None = None) -> tuple[tuple, tuple]:
    """Bivariate z-coefficients of P2 and Q2 with (1-x^2) divided out."""
    d = data or phi_data()
    xpoly = BivarPoly((PowerPoly((0, 8)),))
    # Phi_1 + 8 x Psi_hat vanishes at x = +-1
    p0 = (d.phi[1] + xpoly * d.psi_hat).divide_exact(ONE_MINUS_X2, "Phi_1 + 8x Psi_hat")
    p_parts = (p0, d.phi2_hat * 2)
    ph, dph = d.psi_hat, d.psi_hat.d_dy()
    n = [ph * p.d_dy() - dph * p for p in d.phi]
    q0 = (n[0] - ph * ph * 4).divide_exact(ONE_MINUS_X2, "N_0 - 4 Psi_hat^2")
    q_parts = (q0,) + tuple(n[k].divide_exact(ONE_MINUS_X2, f"N_{k}") for k in (1, 2))
    return p_parts, q_parts


def linearization_coeffs(g_T: ChebSeries, data: PhiData | None = None) -> LinearizationCoeffs:
    d = data or phi_data()
    p_parts, q_parts = linearization_parts(d)
    g = g_T.to_power()
    dg = g.derivative()
    top = max(b.y_degree for b in p_parts + q_parts + (d.psi_hat,))
    powers = [PowerPoly((1,))]
    for _ in range(top):
        powers.append(powers[-1] * g)
    P2 = z_compose(p_parts, powers, dg)
    P3 = d.psi_hat.compose(powers)
    Q2 = z_compose(q_parts, powers, dg)
    return LinearizationCoeffs(P2, P3, Q2, P3 * P3, p_parts, q_parts)


# ---------------------------------------------------------------------------
# coordinates and Frobenius data
# ---------------------------------------------------------------------------
def r_to_x(r) -> Rational:
    r = parse_rational(r)
    if r < 0:
        raise DomainError("r must be nonnegative")
    return (r - 1) / (r + 1)


def x_to_r(x) -> Rational:
    x = parse_rational(x)
    if x == 1:
        raise DomainError("x = 1 corresponds to r = infinity")
    if not (-1 <= x < 1):
        raise DomainError("x must lie in [-1, 1)")
    return (1 + x) / (1 - x)


@dataclass(frozen=True)
class FrobeniusData:
    endpoint: int
    p0: Rational
    q0: Rational
    indices: tuple


def frobenius_indices(endpoint: int) -> FrobeniusData:
    """Indicial roots of L at x = endpoint.

    p and q are regular at the endpoints, so only L0 enters. With t the
    distance to the endpoint, t a(x) -> p0 and t^2 b(x) -> q0 where
    a = -8x/(1-x^2), b = 4/(1-x^2); the indices solve r(r-1) + p0 r + q0 = 0.
    """
    if endpoint not in (-1, 1):
        raise ValueError("endpoint must be -1 or 1")
    s = Rational(endpoint)
    t_factor = ONE_PLUS_X if endpoint == -1 else ONE_MINUS_X
    cofactor, rem = ONE_MINUS_X2.divmod(t_factor)
    assert rem.is_zero()
    orient = 1 if endpoint == -1 else -1  # d/dx = orient * d/dt
    a_num, b_num = PowerPoly((0, -8)), PowerPoly((4,))
    p0 = orient * a_num(s) / cofactor(s)
    # b = b_num / (t * cofactor) has a simple pole, so t^2 b -> 0
    q0 = ZERO
    b, c = p0 - 1, q0
    disc = b * b - 4 * c
    if disc.denominator != 1 or disc < 0:
        raise ValueError("indicial roots are not rational")
    root = Rational(int(gmpy2.isqrt(disc.numerator)))
    if root * root != disc:
        raise ValueError("indicial roots are irrational")
    return FrobeniusData(endpoint, p0, q0, ((-b - root) / 2, (-b + root) / 2))


def regularity_defect(g, endpoint: int) -> Rational:
    """g'(-1) + g(-1)/2 at -1, or g'(1) - g(1)/2 at 1."""
    g0, g1, _ = _derivs(g)
    e = Rational(endpoint)
    return parse_rational(g1(e)) - e * parse_rational(g0(e)) / 2
