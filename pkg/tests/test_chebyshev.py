import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import chebyshev as npcheb

from skyrmecert.chebyshev import (
    ChebSeries,
    PowerPoly,
    basis_phi,
    basis_psi,
    reexpand,
    series_from_basis,
    series_from_json,
    series_to_json,
    uniform_nodes,
)
from skyrmecert.errors import InconsistentOverdetermined, SingularSystem
from skyrmecert.exact_arith import RatInterval, Rational
from skyrmecert.skyrme_model import regularity_defect

small = st.fractions(min_value=-5, max_value=5, max_denominator=50).map(
    lambda f: Rational(f.numerator, f.denominator))
coeff_lists = st.lists(small, min_size=1, max_size=12)
points = st.fractions(min_value=-1, max_value=1, max_denominator=200).map(
    lambda f: Rational(f.numerator, f.denominator))


@given(coeff_lists, points)
def test_clenshaw_matches_numpy(coeffs, x):
    s = ChebSeries(coeffs)
    expected = npcheb.chebval(float(x), [float(c) for c in coeffs])
    assert float(s(x)) == pytest.approx(expected, abs=1e-9)


@given(coeff_lists)
def test_power_and_chebyshev_roundtrip(coeffs):
    s = ChebSeries(coeffs)
    assert s.to_power().to_cheb().coeffs == s.coeffs


@given(coeff_lists, points)
def test_derivative_agrees_in_both_bases(coeffs, x):
    s = ChebSeries(coeffs)
    assert s.derivative()(x) == s.to_power().derivative()(x)


@given(coeff_lists)
def test_norm_bounds_dominate_sampled_values(coeffs):
    s = ChebSeries(coeffs)
    nb = s.norm_bounds()
    d = s.derivative()
    for k in range(-10, 11):
        x = Rational(k, 10)
        assert abs(s(x)) <= nb.f_bound
        assert abs(d(x)) <= nb.df_bound


@settings(max_examples=60)
@given(st.lists(small, min_size=2, max_size=9), st.integers(0, 3))
def test_reexpansion_interpolation_identity(coeffs, extra):
    p = PowerPoly(coeffs)
    deg = len(coeffs) - 1
    nodes = uniform_nodes(2 * deg + 2, deg + 1 + extra)
    q = reexpand(p, deg, nodes)
    for x in nodes:
        assert q(x) == p(x)
    assert q.to_power().coeffs == p.coeffs


def test_reexpansion_routes_agree():
    f = lambda x: 1 / (2 + x)  # noqa: E731
    nodes = [Rational(k, 9) - Rational(1, 2) for k in range(9)]
    a = reexpand(f, 8, nodes)
    b = reexpand(f, 8, nodes, method="bareiss")
    c = reexpand(f, 8, nodes, basis="monomial")
    assert a.coeffs == b.coeffs
    assert a.to_power().coeffs == c.coeffs


def test_reexpansion_overdetermined_mismatch():
    with pytest.raises(InconsistentOverdetermined):
        reexpand(lambda x: x ** 3, 2, uniform_nodes(4))


def test_reexpansion_repeated_nodes():
    with pytest.raises(SingularSystem):
        reexpand(lambda x: x, 1, [Rational(0), Rational(0)])


@pytest.mark.parametrize("n", range(2, 12))
def test_phi_basis_is_regular_at_both_ends(n):
    phi = basis_phi(n)
    assert regularity_defect(phi, -1) == 0
    assert regularity_defect(phi, 1) == 0


@pytest.mark.parametrize("n", range(1, 8))
def test_psi_basis_values(n):
    assert basis_psi("+", n)(1) == 1
    assert basis_psi("-", n)(-1) == (-1) ** n


def test_phi_low_order_vanish():
    assert basis_phi(0).is_zero() and basis_phi(1).is_zero()


def test_series_json_roundtrip():
    doc = series_to_json([Rational(13039, 72146), Rational(-1, 3)], "phi", first=2, candidate=True)
    assert doc["coefficients"][0] == "13039/72146"
    s = series_from_json(doc)
    assert s.coeffs == series_from_basis([Rational(13039, 72146), Rational(-1, 3)], "phi").coeffs


def test_interval_evaluation_contains_values():
    s = ChebSeries([Rational(1, 3), -2, Rational(5, 7), 1])
    box = RatInterval(Rational(-1, 4), Rational(1, 2))
    enc = s.eval_interval(box)
    for x in np.linspace(-0.25, 0.5, 31):
        assert enc.contains(s(Rational(*float(x).as_integer_ratio())))
