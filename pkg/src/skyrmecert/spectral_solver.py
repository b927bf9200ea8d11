"""Floating-point pseudospectral search for the approximate solutions.

Nothing here is on the certified path: the outputs are rationalized and
then have to pass the exact certificates like any other input.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import chebyshev as C

from .errors import JacobianSingular, LinearSystemSingular, NewtonDivergence, TargetVanishes
from .exact_arith import Rational, parse_rational
from .skyrme_model import PhiData, phi_data


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-11
    max_iter: int = 40
    analytic_jacobian: bool = True
    fd_step: float = 1e-7
    initial_guess: float = 0.8  # g = 4/5 in the interior

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class CollocationProblem:
    basis: str
    N: int
    residual: Callable
    normalization: tuple = ()

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")


@dataclass
class SolveResult:
    coefficients: np.ndarray  # indexed from first_index
    first_index: int
    residual_norms: list = field(default_factory=list)
    iterations: int = 0
    collocation_residual: float = 0.0
    c1: float | None = None  # normalization-fixed coefficient (fundamental system)

    def rationalized(self, denominator_cap: int = 10**9) -> list[Rational]:
        return [rationalize(float(c), denominator_cap) for c in self.coefficients]


def gauss_lobatto(N: int) -> np.ndarray:
    """Interior Gauss-Lobatto points cos(k pi / N), k = 1 .. N-1."""
    if N < 2:
        raise ValueError("N must be at least 2")
    k = np.arange(1, N)
    pts = np.cos(k * np.pi / N)
    pts[np.abs(pts) < 1e-15] = 0.0
    return pts


def rationalize(v: float, denominator_cap: int = 10**9) -> Rational:
    """Best rational approximation with denominator <= cap."""
    if denominator_cap < 1:
        raise ValueError("denominator cap must be >= 1")
    f = Fraction(v).limit_denominator(denominator_cap)
    return Rational(f.numerator, f.denominator)


# ---------------------------------------------------------------------------
# float model of Phi
# ---------------------------------------------------------------------------
class FloatPhi:
    """Phi and its first partials in double precision."""

    def __init__(self, data: PhiData | None = None):
        d = data or phi_data()
        conv = lambda b: [np.array([float(c) for c in p.coeffs]) for p in b.coeffs]  # noqa: E731
        self.phi = [conv(b) for b in d.phi]
        self.psi = conv(d.psi)

    @staticmethod
    def _eval(coeffs, x, y):
        vals = [np.polynomial.polynomial.polyval(x, c) for c in coeffs]
        f = np.zeros_like(np.asarray(y, dtype=float))
        fy = np.zeros_like(f)
        for k in range(len(vals) - 1, -1, -1):
            fy = fy * y + f
            f = f * y + vals[k]
        return f, fy

    def __call__(self, x, y, z):
        (p0, p0y), (p1, p1y), (p2, p2y) = (self._eval(c, x, y) for c in self.phi)
        s, sy = self._eval(self.psi, x, y)
        num = p0 + z * (p1 + z * p2)
        num_y = p0y + z * (p1y + z * p2y)
        phi = num / s
        phi_y = (num_y * s - num * sy) / s**2
        phi_z = (p1 + 2 * z * p2) / s
        return phi, phi_y, phi_z


def _cheb_derivs(x: np.ndarray, nmax: int):
    """Values, first and second derivatives of T_0..T_nmax at x."""
    T = np.zeros((nmax + 1, len(x)))
    d1 = np.zeros_like(T)
    d2 = np.zeros_like(T)
    for n in range(nmax + 1):
        e = np.zeros(n + 1)
        e[n] = 1.0
        T[n] = C.chebval(x, e)
        d1[n] = C.chebval(x, C.chebder(e))
        d2[n] = C.chebval(x, C.chebder(e, 2))
    return T, d1, d2


def phi_basis_matrices(x: np.ndarray, N0: int):
    """phi_n, phi_n', phi_n'' for n = 2..N0 at the points x."""
    T, d1, d2 = _cheb_derivs(x, N0)
    n = np.arange(2, N0 + 1)
    b = n**2 - 0.5
    a = np.where(n % 2 == 0, b, -b)
    B = T[2:] + (a + b)[:, None] + (a - b)[:, None] * x[None, :]
    B1 = d1[2:] + (a - b)[:, None]
    B2 = d2[2:]
    return B.T, B1.T, B2.T


def solve_skyrmion_collocation(N0: int = 43, cfg: SolverConfig = SolverConfig(), model: FloatPhi | None = None) -> SolveResult:
    """Newton iteration for R(sum c_n phi_n)(x_k) = 0, k = 1..N0-1."""
    if N0 < 3:
        raise ValueError("N0 must be at least 3 (phi_0 = phi_1 = 0)")
    model = model or FloatPhi()
    x = gauss_lobatto(N0)
    B, B1, B2 = phi_basis_matrices(x, N0)
    # initial guess: interpolate the constant at the nodes
    try:
        c = np.linalg.solve(B, np.full(len(x), cfg.initial_guess))
    except np.linalg.LinAlgError as exc:
        raise JacobianSingular(str(exc)) from exc

    def F(c):
        g, g1, g2 = B @ c, B1 @ c, B2 @ c
        phi, py, pz = model(x, g, g1)
        return g2 + phi, py, pz

    norms = []
    for it in range(1, cfg.max_iter + 1):
        r, py, pz = F(c)
        norms.append(float(np.max(np.abs(r))))
        if not np.all(np.isfinite(r)):
            raise NewtonDivergence("non-finite residual", norms)
        if norms[-1] < cfg.tol:
            return SolveResult(c, 2, norms, it - 1, norms[-1])
        if cfg.analytic_jacobian:
            J = B2 + py[:, None] * B + pz[:, None] * B1
        else:
            J = np.empty((len(x), len(c)))
            for j in range(len(c)):
                e = np.zeros_like(c)
                e[j] = cfg.fd_step
                J[:, j] = (F(c + e)[0] - r) / cfg.fd_step
        try:
            c = c - np.linalg.solve(J, r)
        except np.linalg.LinAlgError as exc:
            raise JacobianSingular(str(exc)) from exc
        if len(norms) > 3 and norms[-1] > 1e6 * min(norms):
            raise NewtonDivergence("residual grew by six orders of magnitude", norms)
    r = F(c)[0]
    final = float(np.max(np.abs(r)))
    norms.append(final)
    if final < max(cfg.tol, 1e-10):
        return SolveResult(c, 2, norms, cfg.max_iter, final)
    raise NewtonDivergence(f"no convergence after {cfg.max_iter} iterations", norms)


def skyrmion_float(coeffs: Sequence[float]):
    """(g, g', g'') callables for g = sum_{n>=2} c_n phi_n in floats."""
    coeffs = np.asarray([float(c) for c in coeffs])
    N0 = len(coeffs) + 1

    def ev(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        B, B1, B2 = phi_basis_matrices(x, N0)
        return B @ coeffs, B1 @ coeffs, B2 @ coeffs

    return ev


def collocation_residual_sup(coeffs: Sequence[float], samples: int = 2001, model: FloatPhi | None = None) -> float:
    model = model or FloatPhi()
    x = np.cos(np.linspace(0, np.pi, samples))[1:-1]
    g, g1, g2 = skyrmion_float(coeffs)(x)
    return float(np.max(np.abs(g2 + model(x, g, g1)[0])))


# ---------------------------------------------------------------------------
# fundamental system
# ---------------------------------------------------------------------------
def psi_basis_matrices(sign: str, x: np.ndarray, N: int):
    """psi_hat_{sign,n} = psi_n / (1 +- x)^3 with two derivatives, n = 1..N."""
    T, d1, d2 = _cheb_derivs(x, N)
    n = np.arange(1, N + 1)
    k = (n**2 - 2).astype(float)
    if sign == "+":
        psi = T[1:] + k[:, None] * (1 - x)[None, :]
        psi1 = d1[1:] - k[:, None]
        s, ds = 1 + x, 1.0
    else:
        k = np.where(n % 2 == 0, k, -k)
        psi = T[1:] + k[:, None] * (1 + x)[None, :]
        psi1 = d1[1:] + k[:, None]
        s, ds = 1 - x, -1.0
    psi2 = d2[1:]
    u = psi / s**3
    u1 = psi1 / s**3 - 3 * ds * psi / s**4
    u2 = psi2 / s**3 - 6 * ds * psi1 / s**4 + 12 * psi / s**5
    return u.T, u1.T, u2.T


def linear_coefficients_float(g_coeffs: Sequence, model: FloatPhi | None = None):
    """x -> (a(x), b(x)) with L u = u'' + a u' + b u at g = g_T."""
    model = model or FloatPhi()
    ev = skyrmion_float(g_coeffs)

    def ab(x):
        g, g1, _ = ev(x)
        _, py, pz = model(x, g, g1)
        return pz, py

    return ab


def solve_fundamental_system(sign: str, N: int = 30, cfg: SolverConfig = SolverConfig(),
                             g_coeffs: Sequence | None = None, model: FloatPhi | None = None) -> SolveResult:
    """Collocate L(sum c_n psi_hat_n) = 0 with c_1 fixed by u(+-1) = 1.

    Returns c_2..c_N (first_index 2); c_1 follows from the normalization
    and is reported separately.
    """
    if sign in ("plus", "+"):
        sign = "+"
    elif sign in ("minus", "-"):
        sign = "-"
    else:
        raise ValueError("sign must be + or -")
    if g_coeffs is None:
        from .tables import skyrmion_coefficients

        g_coeffs = skyrmion_coefficients()
    model = model or FloatPhi()
    x = gauss_lobatto(N)
    U, U1, U2 = psi_basis_matrices(sign, x, N)
    a, b = linear_coefficients_float(g_coeffs, model)(x)
    Lmat = U2 + a[:, None] * U1 + b[:, None] * U
    end = np.array([_psi_end(sign, n) for n in range(1, N + 1)]) / 8.0
    # c_1 = (1 - sum_{n>=2} c_n end_n) / end_1
    A = Lmat[:, 1:] - np.outer(Lmat[:, 0], end[1:] / end[0])
    rhs = -Lmat[:, 0] / end[0]
    try:
        c = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise LinearSystemSingular(str(exc)) from exc
    if not np.all(np.isfinite(c)):
        raise LinearSystemSingular("non-finite solution")
    c1 = (1 - end[1:] @ c) / end[0]
    return SolveResult(c, 2, [], 1, float(np.max(np.abs(A @ c - rhs))), float(c1))


def _psi_end(sign: str, n: int) -> float:
    """psi_{sign,n} at the regular endpoint."""
    if sign == "+":
        return 1.0  # T_n(1) + (n^2-2)(1-1)
    return (-1.0) ** n  # T_n(-1) + (-1)^n (n^2-2)(1-1)


# ---------------------------------------------------------------------------
# reciprocal fits
# ---------------------------------------------------------------------------
def fit_reciprocal(target: Callable, degree: int, exact: bool = True) -> np.ndarray:
    """Chebyshev interpolant of 1/target at the degree+1 Lobatto points.

    ``target`` is called on Rationals when ``exact`` (values converted to
    float afterwards), otherwise on floats.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if degree == 0:
        pts = [0.0]
    else:
        pts = list(np.cos(np.arange(degree + 1) * np.pi / degree))
    vals = []
    for x in pts:
        v = float(target(rationalize(x, 10**12))) if exact else float(target(x))
        if v == 0 or not np.isfinite(v):
            raise TargetVanishes(f"target vanishes or is singular near x = {x}")
        vals.append(1.0 / v)
    signs = np.sign(vals)
    if not (np.all(signs > 0) or np.all(signs < 0)):
        raise TargetVanishes("target changes sign on the fitting points")
    if degree == 0:
        return np.array(vals)
    return C.chebfit(np.array(pts), np.array(vals), degree)


def rationalize_series(coeffs: Sequence[float], denominator_cap: int = 10**9) -> list[Rational]:
    return [rationalize(float(c), denominator_cap) for c in coeffs]


def as_float(q) -> float:
    q = parse_rational(q)
    return float(q)
