"""Spectral criterion: potential envelopes, the weighted integral and GGMT.

The certified integral bound is an adaptive upper Riemann sum over rational
interval enclosures of the integrand in the compactified variable
x = (r-1)/(r+1).  Constants involving Gamma are exact factorial arithmetic;
pi only ever appears as a symbolic factor.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

from .bounds import Box, Subdivision, interval_range
from .chebyshev import ChebSeries, PowerPoly
from .errors import (
    BoundNotAchieved,
    DenominatorSignUncertified,
    EnvelopeOrderViolated,
    UnsupportedExponent,
)
from .exact_arith import ONE, ZERO, RatInterval, Rational, interval_pow, parse_rational
from .proof_pipeline import (
    RADIUS,
    Certificate,
    ProofContext,
    Stage,
    _Enclosable,
    _emit,
    _require,
    _status,
    default_context,
)
from .skyrme_model import ONE_MINUS_X, ONE_PLUS_X, BivarPoly

Q = Rational
INTEGRAL_BOUND = Q(130)


# ---------------------------------------------------------------------------
# envelopes
# ---------------------------------------------------------------------------
def _bivar(*coeffs_in_y: PowerPoly) -> BivarPoly:
    return BivarPoly(coeffs_in_y)


@dataclass(frozen=True, eq=False)
class PotentialEnvelope:
    """|a| <= A and |a| >= B for a = sin(F_0)/r, written in x.

    With r = (1+x)/(1-x) and G = g_T(x):
        A = 4(1-x)^3 (G+e) / ((1-x)^4 + 4(1+x)^2 (G-e)^2)
        B = 4(1-x)^3 (G-e) / ((1-x)^4 + 4(1+x)^2 (G+e)^2)
    where e is the radius of the correction ball.
    """

    g: ChebSeries
    radius: Rational
    A_num: BivarPoly
    A_den: BivarPoly
    B_num: BivarPoly
    B_den: BivarPoly
    substitution: str = "r = (1+x)/(1-x), x = (r-1)/(r+1)"

    def _at(self, num: BivarPoly, den: BivarPoly, x) -> Rational:
        x = parse_rational(x)
        y = self.g(x)
        return num(x, y) / den(x, y)

    def A(self, x) -> Rational:
        return self._at(self.A_num, self.A_den, x)

    def B(self, x) -> Rational:
        return self._at(self.B_num, self.B_den, x)

    def univariate(self) -> dict:
        """Numerators and denominators composed with g_T, as polynomials in x."""
        gp = self.g.to_power()
        powers = [PowerPoly((1,)), gp, gp * gp]
        return {k: getattr(self, k).compose(powers) for k in ("A_num", "A_den", "B_num", "B_den")}


def build_envelopes(g: ChebSeries | None = None, radius=RADIUS) -> PotentialEnvelope:
    g = g if g is not None else default_context().g_T
    e = parse_rational(radius)
    if e < 0:
        raise ValueError("radius must be nonnegative")
    om3 = ONE_MINUS_X ** 3 * 4
    om4 = ONE_MINUS_X ** 4
    op2 = ONE_PLUS_X ** 2 * 4

    def den(shift):
        # (1-x)^4 + 4(1+x)^2 (y + shift)^2
        return _bivar(om4 + op2 * (shift * shift), op2 * (2 * shift), op2)

    return PotentialEnvelope(
        g, e,
        A_num=_bivar(om3 * e, om3), A_den=den(-e),
        B_num=_bivar(om3 * (-e), om3), B_den=den(e),
    )


def _range_box(lo, hi) -> Box:
    return Box(("x", "y"), (RatInterval(-1, 1), RatInterval(lo, hi)))


def certify_envelopes(ctx: ProofContext | None = None) -> Certificate:
    """0 <= B <= A on [-1, 1), from the certified range of g_T."""
    ctx = ctx or default_context()
    store = ctx.store
    inputs = ("skyrmion-existence", "gT-range")
    _require(store, inputs)
    env = build_envelopes(ctx.g_T, RADIUS)
    Y = store["gT-range"].bound
    if not Y.lo > env.radius:
        raise EnvelopeOrderViolated("g_T - radius is not certified positive")
    box = _range_box(Y.lo, Y.hi)
    big = Q(10) ** 6
    # (y+e) B_den - (y-e) A_den >= 0 gives A >= B once both denominators are positive
    y = _bivar(PowerPoly((0,)), PowerPoly((1,)))
    order = (y + env.radius) * env.B_den - (y - env.radius) * env.A_den
    checks = {
        "A denominator > 0": (env.A_den, RatInterval(Q(1, 100), big)),
        "B denominator > 0": (env.B_den, RatInterval(Q(1, 100), big)),
        "A - B numerator >= 0": (order, RatInterval(ZERO, big)),
    }
    results = {}
    for name, (poly, target) in checks.items():
        rc = interval_range(_Enclosable(poly), box,
                            Subdivision(target=target, max_depth=16, workers=ctx.workers), name)
        if rc.status == "failed":
            raise EnvelopeOrderViolated(f"{name}: witness {rc.witness}")
        results[name] = rc
    ok = all(rc.status == "verified" for rc in results.values())
    # B's numerator vanishes at x = 1, where enclosures cannot close; it factors instead
    results["B numerator >= 0"] = {"factored": "4 (1-x)^3 (y - radius)",
                                   "y - radius >=": Y.lo - env.radius}
    x0 = -ONE
    at_origin = {"A": env.A(x0), "B": env.B(x0),
                 "2(g(-1)+e)": 2 * (ctx.g_T(x0) + env.radius),
                 "2(g(-1)-e)": 2 * (ctx.g_T(x0) - env.radius)}
    cert = Certificate(
        "envelopes", "0 <= B <= A on [-1, 1) for the amplitude envelopes of radius 1/150",
        "sec:potential", env.radius, "<=", _status(ok, store, inputs), inputs,
        {"radius": env.radius, "substitution": env.substitution},
        {"enclosures": results, "values_at_r0": at_origin})
    return _emit(store, cert)


# ---------------------------------------------------------------------------
# the weighted potential integral
# ---------------------------------------------------------------------------
_SHIFT = 64


def _floor(v: Rational) -> int:
    v = parse_rational(v)
    return int(v.numerator // v.denominator)


def _down(v: Rational) -> Rational:
    return Q(_floor(v * (1 << _SHIFT)), 1 << _SHIFT)


def _up(v: Rational) -> Rational:
    return Q(-_floor(-v * (1 << _SHIFT)), 1 << _SHIFT)


def integrand_enclosure(X: RatInterval, G: RatInterval, radius) -> RatInterval:
    """Enclosure of (dr/dx) r^7 [4A^2(1+3A^2+3A^4)/(1+2B^2)^2]^4 over X x G.

    Substituting r = (1+x)/(1-x) and A = (1-x)^3 A_hat gives
    512 (1+x)^7 (1-x)^15 A_hat^8 (1+3A^2+3A^4)^4 / (1+2B^2)^8.
    Endpoints are rounded outward to multiples of 2^-64.
    """
    e = parse_rational(radius)
    om, op = 1 - X, 1 + X
    gp, gm = G + e, G - e
    om4, op2 = interval_pow(om, 4), interval_pow(op, 2)
    a_hat = 4 * gp / (om4 + 4 * op2 * interval_pow(gm, 2))
    A2 = interval_pow(om, 6) * interval_pow(a_hat, 2)
    B = 4 * interval_pow(om, 3) * gm / (om4 + 4 * op2 * interval_pow(gp, 2))
    core = 1 + 3 * A2 + 3 * interval_pow(A2, 2)
    v = (512 * interval_pow(op, 7) * interval_pow(om, 15) * interval_pow(a_hat, 8)
         * interval_pow(core, 4) / interval_pow(1 + 2 * interval_pow(B, 2), 8))
    return RatInterval(_down(v.lo), _up(v.hi))


def integrand_r_form(x, y, radius) -> Rational:
    """The same integrand evaluated literally in r, for cross-checks."""
    x, y, e = parse_rational(x), parse_rational(y), parse_rational(radius)
    r = (1 + x) / (1 - x)
    A = 2 * (1 + r) * (y + e) / (1 + r * r * (1 + r) ** 2 * (y - e) ** 2)
    B = 2 * (1 + r) * (y - e) / (1 + r * r * (1 + r) ** 2 * (y + e) ** 2)
    V = 4 * A * A * (1 + 3 * A * A + 3 * A ** 4) / (1 + 2 * B * B) ** 2
    return 2 / (1 - x) ** 2 * r ** 7 * V ** 4


def jacobian_identity_holds() -> bool:
    """d/dx (1+x)/(1-x) = 2/(1-x)^2 via the quotient rule on polynomials."""
    num, den = ONE_PLUS_X, ONE_MINUS_X
    return num.derivative() * den - num * den.derivative() == PowerPoly((2,))


@dataclass
class RiemannResult:
    lower: Rational
    upper: Rational
    cells: int
    refinements: int


def riemann_enclosure(g: ChebSeries, dg_bound, radius, *, gap=Q(2), max_cells: int = 20000,
                      initial: int = 256, target=None) -> RiemannResult:
    """Lower and upper sums; cells with the widest contribution are halved first.

    Refinement stops when upper - lower <= gap or the cell budget is spent.
    On each cell g is enclosed by its midpoint value +- dg_bound * width / 2.
    """
    L = parse_rational(dg_bound)
    gap = parse_rational(gap)

    def cell(a, b):
        m, w = (a + b) / 2, b - a
        gm = g(m)
        G = RatInterval(_down(gm - L * w / 2), _up(gm + L * w / 2))
        v = integrand_enclosure(RatInterval(a, b), G, radius)
        return v.lo * w, v.hi * w

    heap = []
    lo = hi = ZERO
    for k in range(initial):
        a = Q(-1) + Q(2 * k, initial)
        b = a + Q(2, initial)
        cl, ch = cell(a, b)
        lo, hi = lo + cl, hi + ch
        heap.append((-(ch - cl), a, b, cl, ch))
    heapq.heapify(heap)
    steps = 0
    while hi - lo > gap and len(heap) < max_cells:
        _, a, b, cl, ch = heapq.heappop(heap)
        m = (a + b) / 2
        for u, v in ((a, m), (m, b)):
            l2, h2 = cell(u, v)
            lo, hi = lo + l2, hi + h2
            heapq.heappush(heap, (-(h2 - l2), u, v, l2, h2))
        lo, hi = lo - cl, hi - ch
        steps += 1
    return RiemannResult(lo, hi, len(heap), steps)


def verify_potential_integral(ctx: ProofContext | None = None, radius=None, gap=Q(2),
                              max_cells: int | None = None) -> Certificate:
    ctx = ctx or default_context()
    store = ctx.store
    _require(store, ["envelopes", "gT-prime-sup"])
    radius = RADIUS if radius is None else parse_rational(radius)
    if not jacobian_identity_holds():
        raise DenominatorSignUncertified("Jacobian identity of the substitution fails")
    # a cheap pointwise consistency check of the x-form against the r-form
    for x in (Q(-1, 2), Q(0), Q(1, 3), Q(7, 8)):
        y = ctx.g_T(x)
        if integrand_enclosure(RatInterval(x), RatInterval(y), radius).contains(
                integrand_r_form(x, y, radius)) is False:
            raise DenominatorSignUncertified(f"integrand forms disagree at x = {x}")
    sup_dg = parse_rational(store["gT-prime-sup"].data["value"])
    L = Q(-_floor(-sup_dg * 100), 100)
    cells = max_cells or ctx.params.integral_max_cells
    res = riemann_enclosure(ctx.g_T, L, radius, gap=gap, max_cells=cells)
    ok = res.upper <= INTEGRAL_BOUND
    cert = Certificate(
        "potential-integral", "int_0^inf r^7 |V(r)|^4 dr <= 130", "lem:intV", INTEGRAL_BOUND,
        "<=", _status(ok, store, ["envelopes", "gT-prime-sup"]), ("envelopes", "gT-prime-sup"),
        {"radius": radius, "gap": gap, "max_cells": cells, "initial_cells": 256,
         "rounding": "outward to multiples of 2^-64", "sup_g_prime_used": L},
        {"upper_sum": res.upper, "lower_sum": res.lower, "cells": res.cells,
         "refinements": res.refinements, "nonnegative": res.lower >= 0,
         "method": "adaptive upper Riemann sum of rational interval enclosures"})
    return _emit(store, cert, res.upper)


# ---------------------------------------------------------------------------
# the GGMT constant
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class GGMTParams:
    p: Rational
    ell: int

    def __init__(self, p, ell: int = 0):
        p = parse_rational(p)
        if p < Q(3, 2):
            raise UnsupportedExponent("p must be at least 3/2")
        if int(ell) != ell or ell < 0:
            raise ValueError("ell must be a nonnegative integer")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "ell", int(ell))

    @property
    def q(self) -> Rational:
        return self.p / (self.p - 1)


@dataclass(frozen=True)
class SurdValue:
    """coefficient * sqrt(radicand) * pi^pi_power, exact."""

    coefficient: Rational
    radicand: Rational = ONE
    pi_power: int = 0

    def __float__(self) -> float:
        return float(self.coefficient) * math.sqrt(float(self.radicand)) * math.pi ** self.pi_power

    def __mul__(self, other) -> "SurdValue":
        if isinstance(other, SurdValue):
            return SurdValue(self.coefficient * other.coefficient, self.radicand * other.radicand,
                             self.pi_power + other.pi_power)
        return SurdValue(self.coefficient * parse_rational(other), self.radicand, self.pi_power)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        from .exact_arith import format_rational

        return {"coefficient": format_rational(self.coefficient),
                "sqrt": format_rational(self.radicand), "pi_power": self.pi_power}


def _gamma_int(n: int) -> int:
    return math.factorial(n - 1)


def _gamma_half(k: int) -> Rational:
    """Gamma(k + 1/2) / sqrt(pi) = (2k)! / (4^k k!)."""
    return Q(math.factorial(2 * k), 4 ** k * math.factorial(k))


def _kind(p: Rational) -> str:
    if p.denominator == 1:
        return "integer"
    if p.denominator == 2:
        return "half"
    raise UnsupportedExponent(f"p = {p} is neither an integer nor a half-integer")


def ggmt_constant(params: GGMTParams | tuple):
    """(p-1)^(p-1) Gamma(2p) / ((2l+1)^(2p-1) p^p Gamma(p)^2).

    Rational for integer p; a SurdValue (rational * sqrt * pi^-1) for
    half-integer p.
    """
    if not isinstance(params, GGMTParams):
        params = GGMTParams(*params)
    p, ell = params.p, params.ell
    if _kind(p) == "integer":
        n = int(p)
        return (Q(n - 1) ** (n - 1) * _gamma_int(2 * n)
                / (Q(2 * ell + 1) ** (2 * n - 1) * Q(n) ** n * _gamma_int(n) ** 2))
    k = int(p - Q(1, 2))  # p = k + 1/2
    # (k-1/2)^(k-1/2) / (k+1/2)^(k+1/2) = (k-1/2)^(k-1) / (k+1/2)^k * sqrt((k-1/2)/(k+1/2))
    a, b = p - 1, p
    coeff = (a ** (k - 1) / b ** k * _gamma_int(2 * k + 1)
             / (Q(2 * ell + 1) ** (2 * k) * _gamma_half(k) ** 2))
    return SurdValue(coeff, a / b, -1)


# rational enclosure of pi for comparisons involving half-integer p
PI_LO, PI_HI = Q(3141592653, 10 ** 9), Q(3141592654, 10 ** 9)


def _less_than_one(v) -> str:
    if isinstance(v, SurdValue):
        if v.coefficient <= 0:
            return "verified"
        # c sqrt(s) pi^-1 < 1  <=>  c^2 s < pi^2
        c2s = v.coefficient ** 2 * v.radicand
        if v.pi_power != -1:
            raise UnsupportedExponent("unexpected power of pi")
        if c2s < PI_LO ** 2:
            return "verified"
        if c2s >= PI_HI ** 2:
            return "failed"
        return "inconclusive"
    return "verified" if v < 1 else "failed"


def check_no_eigenvalues(params: GGMTParams | tuple, integral_bound, inputs: Sequence[str] = (),
                         store=None) -> Certificate:
    """GGMT: C(p, l) * int r^(2p-1) |V|^p dr < 1 excludes eigenvalues in channel l."""
    if not isinstance(params, GGMTParams):
        params = GGMTParams(*params)
    bound = parse_rational(integral_bound)
    C = ggmt_constant(params)
    value = C * bound
    status = _less_than_one(value)
    if store is not None and status == "verified" and not all(store.verified(i) for i in inputs):
        status = "inconclusive"
    data = {"p": params.p, "ell": params.ell, "integral_bound": bound}
    if isinstance(value, SurdValue):
        data.update({"constant": C.to_json(), "value": value.to_json(),
                     "pi_enclosure": [PI_LO, PI_HI]})
    else:
        data.update({"constant": C, "value": value, "margin": 1 - value})
    cert = Certificate(
        "no-eigenvalues",
        f"GGMT criterion C(p={params.p}, l={params.ell}) * integral < 1: the linearized operator "
        "has no eigenvalues, and zero is neither an eigenvalue nor a resonance",
        "thm:main", ONE, "<", status, tuple(inputs), {"p": params.p, "ell": params.ell},
        data)
    if store is not None:
        store.add(cert)
    return cert


def mu_q(p) -> Rational:
    """mu_q^p / pi = 4 (p/(p-1))^p (p-1) Gamma(p)^2 / Gamma(2p), for integer p >= 2."""
    p = parse_rational(p)
    if p.denominator != 1 or p < 2:
        raise UnsupportedExponent("mu_q is implemented for integer p >= 2")
    n = int(p)
    return 4 * Q(n, n - 1) ** n * (n - 1) * _gamma_int(n) ** 2 / _gamma_int(2 * n)


def ggmt_mu_product(p) -> Rational:
    """ggmt_constant(p, 0) * mu_q^p, as a multiple of pi (identically 4)."""
    return ggmt_constant(GGMTParams(p, 0)) * mu_q(p)


def cosh_norm_integral(b) -> float:
    """int_R cosh(x)^(-b) dx = sqrt(pi) Gamma(b/2) / Gamma((b+1)/2)."""
    b = float(b)
    if not b > 0:
        raise ValueError("b must be positive")
    return math.exp(0.5 * math.log(math.pi) + math.lgamma(b / 2) - math.lgamma((b + 1) / 2))


def minimizer(p):
    """The explicit optimizer f(x) = (q/4)^(1/(2(q-1))) cosh((q-1)x/2)^(-1/(q-1))."""
    q = float(p) / (float(p) - 1)

    scale = (q / 4) ** (1 / (2 * (q - 1)))

    def f(x: float) -> float:
        t = abs((q - 1) * x / 2)
        log_cosh = t + math.log1p(math.exp(-2 * t)) - math.log(2)
        return scale * math.exp(-log_cosh / (q - 1))

    return f


# ---------------------------------------------------------------------------
# pipeline stages
# ---------------------------------------------------------------------------
def _integral_stage(ctx: ProofContext) -> Certificate:
    return verify_potential_integral(ctx)


def _no_eigenvalue_stage(ctx: ProofContext) -> Certificate:
    store = ctx.store
    _require(store, ["potential-integral"])
    integral = store["potential-integral"]
    cert = check_no_eigenvalues(GGMTParams(4, 1), integral.bound, ("potential-integral",), store)
    if cert.status == "failed":
        raise BoundNotAchieved("GGMT criterion fails", cert.data.get("value"))
    return cert


STAGES = (
    Stage("envelopes", certify_envelopes, ("contraction", "range"), "envelopes"),
    Stage("integral", _integral_stage, ("envelopes",), "potential-integral"),
    Stage("no-eigenvalues", _no_eigenvalue_stage, ("integral",), "no-eigenvalues"),
)

__all__ = [
    "PotentialEnvelope",
    "GGMTParams",
    "SurdValue",
    "build_envelopes",
    "certify_envelopes",
    "integrand_enclosure",
    "integrand_r_form",
    "jacobian_identity_holds",
    "riemann_enclosure",
    "verify_potential_integral",
    "ggmt_constant",
    "check_no_eigenvalues",
    "mu_q",
    "ggmt_mu_product",
    "cosh_norm_integral",
    "minimizer",
    "STAGES",
]
