import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skyrmecert import skyrme_model as sm
from skyrmecert import spectral_solver as ss
from skyrmecert import tables
from skyrmecert.chebyshev import series_from_basis
from skyrmecert.errors import DomainError
from skyrmecert.exact_arith import RatInterval, Rational

unit = st.fractions(min_value=-1, max_value=1, max_denominator=300).map(
    lambda f: Rational(f.numerator, f.denominator))
interior = unit.filter(lambda x: abs(x) < 1)
band = st.fractions(min_value=Rational(1, 2), max_value=Rational(11, 10), max_denominator=300).map(
    lambda f: Rational(f.numerator, f.denominator))


@pytest.fixture(scope="module")
def g_T():
    return series_from_basis(tables.skyrmion_coefficients(), "phi")


def test_compactification_roundtrip():
    for r in (Rational(0), Rational(1, 3), Rational(7)):
        assert sm.x_to_r(sm.r_to_x(r)) == r
    assert sm.r_to_x(1) == 0
    with pytest.raises(DomainError):
        sm.x_to_r(1)
    with pytest.raises(DomainError):
        sm.r_to_x(-1)


@pytest.mark.parametrize("endpoint", [-1, 1])
def test_frobenius_indices(endpoint):
    assert sm.frobenius_indices(endpoint).indices == (-3, 0)


def test_embedded_skyrmion_is_regular(g_T):
    assert sm.regularity_defect(g_T, -1) == 0
    assert sm.regularity_defect(g_T, 1) == 0


def test_residual_small_on_sample(g_T):
    for k in range(-9, 10):
        assert abs(sm.residual(g_T, Rational(k, 10))) <= Rational(1, 500)


@settings(max_examples=50)
@given(interior, band, st.fractions(min_value=-1, max_value=1, max_denominator=50))
def test_phi_exact_matches_float_model(x, y, z):
    z = Rational(z.numerator, z.denominator)
    exact = float(sm.eval_phi(x, y, z))
    approx = ss.FloatPhi()(np.array([float(x)]), np.array([float(y)]), np.array([float(z)]))[0][0]
    assert exact == pytest.approx(approx, rel=1e-9, abs=1e-9)


@settings(max_examples=40)
@given(unit, band)
def test_canonical_form_is_the_same_polynomial(x, y):
    data = sm.phi_data()
    for k in range(3):
        b = data.Phi(k)
        c = b.canonical()
        assert c(x, y) == b(x, y)


@settings(max_examples=40)
@given(unit, unit, band, band)
def test_canonical_enclosure_contains_values(x1, x2, y1, y2):
    b = sm.phi_data().Phi(0)
    c = b.canonical()
    X = RatInterval(min(x1, x2), max(x1, x2))
    Y = RatInterval(min(y1, y2), max(y1, y2))
    enc = c.enclose(X, Y)
    for x in (X.lo, X.mid, X.hi):
        for y in (Y.lo, Y.mid, Y.hi):
            assert enc.contains(b(x, y))


def test_linearization_matches_float_route(g_T):
    lc = sm.linearization_coeffs(g_T)
    xs = np.array([-0.5, 0.0, 0.3, 0.9])
    a, b = ss.linear_coefficients_float(tables.skyrmion_coefficients())(xs)
    for x, ai, bi in zip(xs, a, b):
        X = Rational(*float(x).as_integer_ratio())
        # the float route includes the singular part of L0
        assert float(lc.p(X)) - 8 * x / (1 - x * x) == pytest.approx(ai, rel=1e-9)
        assert float(lc.q(X)) + 4 / (1 - x * x) == pytest.approx(bi, rel=1e-9)


def test_linearization_degrees(g_T):
    deg = sm.linearization_coeffs(g_T).degrees()
    assert deg == {"P2": 263, "P3": 264, "Q2": 526}
