import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skyrmecert import spectral_solver as ss
from skyrmecert import tables
from skyrmecert.errors import TargetVanishes
from skyrmecert.exact_arith import Rational


@pytest.fixture(scope="module")
def skyrmion_solve():
    return ss.solve_skyrmion_collocation(43)


def test_rationalize_examples():
    assert ss.rationalize(1 / 3, 10**6) == Rational(1, 3)
    assert ss.rationalize(13039 / 72146, 10**6) == Rational(13039, 72146)
    assert ss.rationalize(0.5, 1) in (0, 1)
    with pytest.raises(ValueError):
        ss.rationalize(0.5, 0)


@given(st.integers(1, 10**5), st.data())
def test_rationalize_recovers_small_denominators(q, data):
    # any other fraction with denominator <= cap is >= 1/(q cap) away
    p = data.draw(st.integers(-10 * q, 10 * q))
    assert ss.rationalize(p / q, 10**6) == Rational(p, q)


def test_gauss_lobatto_nodes():
    x = ss.gauss_lobatto(4)
    assert np.allclose(x, [math.sqrt(2) / 2, 0.0, -math.sqrt(2) / 2])
    with pytest.raises(ValueError):
        ss.gauss_lobatto(1)


def test_newton_converges_quadratically(skyrmion_solve):
    norms = skyrmion_solve.residual_norms
    assert norms[-1] < 1e-11
    # the very last step sits at roundoff level, so leave it out
    tail = norms[-4:-1]
    assert all(b <= 10 * a * a for a, b in zip(tail, tail[1:]))
    ratios = [b / a for a, b in zip(tail, tail[1:])]
    assert ratios[1] < ratios[0]


def test_skyrmion_solve_reproduces_embedded_table(skyrmion_solve):
    ref = [float(c) for c in tables.skyrmion_coefficients()[:10]]
    got = skyrmion_solve.coefficients[:10]
    assert np.all(np.abs(got / ref - 1) < 1e-4)


def test_analytic_and_finite_difference_jacobians_agree():
    a = ss.solve_skyrmion_collocation(20)
    b = ss.solve_skyrmion_collocation(20, ss.SolverConfig(analytic_jacobian=False, tol=1e-9))
    assert np.allclose(a.coefficients, b.coefficients, atol=1e-7)


@pytest.mark.parametrize("sign,name", [("minus", "-"), ("plus", "+")])
def test_fundamental_solve_matches_tables(sign, name):
    res = ss.solve_fundamental_system(sign, 30)
    ref = [float(c) for c in tables.fundamental_coefficients(name)[:5]]
    assert np.all(np.abs(res.coefficients[:5] / ref - 1) < 1e-3)
    assert len(res.coefficients) == 29 and res.c1 is not None


def test_too_few_basis_functions():
    with pytest.raises(ValueError):
        ss.solve_skyrmion_collocation(2)
    with pytest.raises(ValueError):
        ss.SolverConfig(tol=0)
    with pytest.raises(ValueError):
        ss.solve_fundamental_system("sideways")


def test_fit_reciprocal():
    c = ss.fit_reciprocal(lambda x: 2 + x, 12, exact=False)
    xs = np.linspace(-1, 1, 41)
    assert np.max(np.abs(np.polynomial.chebyshev.chebval(xs, c) - 1 / (2 + xs))) < 1e-6
    with pytest.raises(TargetVanishes):
        ss.fit_reciprocal(lambda x: x, 4, exact=False)
