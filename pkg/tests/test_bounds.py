import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skyrmecert.bounds import Box, Subdivision, grid_bound, grid_bound_sum_abs, grid_points, interval_range
from skyrmecert.chebyshev import ChebSeries
from skyrmecert.errors import DenominatorMayVanish
from skyrmecert.exact_arith import RatInterval, Rational

small = st.fractions(min_value=-3, max_value=3, max_denominator=20).map(
    lambda f: Rational(f.numerator, f.denominator))


class Poly2:
    """x^2 y - x + c, a toy enclosable."""

    def __init__(self, c):
        self.c = Rational(c)

    def enclose(self, X, Y):
        return X ** 2 * Y - X + self.c

    def evaluate(self, x, y):
        return x * x * y - x + self.c


class Reciprocal:
    active_dims = (0,)

    def enclose(self, X, Y):
        return 1 / X

    def evaluate(self, x, y):
        return 1 / x


def test_grid_points_are_uniform():
    pts = grid_points(4)
    assert pts == [-1, Rational(-1, 2), 0, Rational(1, 2), 1]


def test_grid_bound_simple_modes():
    f = ChebSeries([0, 1])  # f(x) = x, |f'| = 1
    up = grid_bound(f, 1, 10, "max")
    assert up.grid_extreme == 1 and up.certified_bound == 1 + Rational(1, 5)
    lo = grid_bound(f, 1, 10, "min")
    assert lo.holds(Rational(-6, 5)) and not lo.holds(-1)
    with pytest.raises(ValueError):
        grid_bound(f, -1, 10)


@settings(max_examples=80)
@given(st.lists(small, min_size=2, max_size=7), st.integers(3, 30))
def test_grid_bound_sound_against_dense_sampling(coeffs, N):
    s = ChebSeries(coeffs)
    L = s.derivative().norm_bounds().f_bound
    cert = grid_bound(s, L, N, "absmax")
    dense = grid_points(10 * N)
    assert max(abs(s(x)) for x in dense) <= cert.certified_bound
    lo = grid_bound(s, L, N, "min")
    assert min(s(x) for x in dense) >= lo.certified_bound


def test_grid_bound_sum_abs():
    f, g = ChebSeries([0, 1]), ChebSeries([Rational(1, 2)])
    cert = grid_bound_sum_abs([f, g], [1, 0], 20)
    assert cert.grid_extreme == Rational(3, 2)
    assert cert.certified_bound == Rational(3, 2) + Rational(1, 10)
    with pytest.raises(ValueError):
        grid_bound_sum_abs([f], [1, 2], 20)


def test_interval_range_verified():
    box = Box.of(x=(0, 1), y=(0, 1))
    cert = interval_range(Poly2(2), box, Subdivision(target=RatInterval(Rational(3, 4), 3)))
    assert cert.status == "verified"
    assert cert.enclosure.subset(RatInterval(Rational(3, 4), 3))


def test_interval_range_failure_has_witness():
    box = Box.of(x=(0, 1), y=(0, 1))
    cert = interval_range(Poly2(2), box, Subdivision(target=RatInterval(Rational(19, 10), 3)))
    assert cert.status == "failed"
    x, y, v = cert.witness
    assert v == x * x * y - x + 2 and v < Rational(19, 10)


def test_interval_range_inconclusive_at_depth_cap():
    # with y = 1 the minimum 7/4 is attained inside, so a sharp target is never met
    box = Box.of(x=(0, 1), y=(1, 1))
    cert = interval_range(Poly2(2), box, Subdivision(target=RatInterval(Rational(7, 4), 3), max_depth=2))
    assert cert.status == "inconclusive" and cert.unresolved > 0


def test_interval_range_uniform_rounds_and_active_dims():
    box = Box.of(x=(1, 2), y=(-5, 5))
    cert = interval_range(Reciprocal(), box, Subdivision(uniform_rounds=3))
    assert cert.status == "verified"
    assert cert.depth_per_dim[1] == 0
    assert cert.enclosure.contains(Rational(1, 2)) and cert.enclosure.contains(1)


def test_interval_range_vanishing_denominator():
    box = Box.of(x=(-1, 1), y=(0, 1))
    with pytest.raises(DenominatorMayVanish):
        interval_range(Reciprocal(), box, Subdivision(target=RatInterval(-100, 100), max_depth=3))


def test_parallel_matches_sequential():
    box = Box.of(x=(0, 1), y=(0, 1))
    strat = dict(target=RatInterval(Rational(3, 4), 3))
    a = interval_range(Poly2(2), box, Subdivision(**strat, uniform_rounds=0))
    b = interval_range(Poly2(2), box, Subdivision(**strat, workers=2))
    assert a.enclosure == b.enclosure and a.leaves == b.leaves
