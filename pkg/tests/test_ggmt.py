import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from skyrmecert import ggmt
from skyrmecert.errors import UnsupportedExponent
from skyrmecert.exact_arith import RatInterval, Rational
from skyrmecert.proof_pipeline import RADIUS

Q = Rational


def test_ggmt_constant_values():
    assert ggmt.ggmt_constant((4, 0)) == Q(945, 64)
    assert ggmt.ggmt_constant((4, 1)) == Q(35, 5184)
    assert ggmt.ggmt_constant((4, 1)) * 130 == Q(2275, 2592)


@given(st.integers(2, 9), st.integers(0, 6))
def test_angular_momentum_scaling(p, ell):
    lhs = ggmt.ggmt_constant((p, ell))
    assert lhs == ggmt.ggmt_constant((p, 0)) / Q(2 * ell + 1) ** (2 * p - 1)


@given(st.integers(1, 8), st.integers(0, 4))
def test_half_integer_scaling(k, ell):
    p = Q(2 * k + 1, 2)
    a, b = ggmt.ggmt_constant((p, ell)), ggmt.ggmt_constant((p, 0))
    assert a.radicand == b.radicand and a.pi_power == b.pi_power == -1
    assert a.coefficient == b.coefficient / Q(2 * ell + 1) ** (2 * k)


@pytest.mark.parametrize("p", [Q(3, 2), Q(5, 2), Q(7, 2), 2, 3, 4, 5])
def test_constant_against_gamma(p):
    pf = float(p)
    expected = math.exp((pf - 1) * math.log(pf - 1) + math.lgamma(2 * pf)
                        - pf * math.log(pf) - 2 * math.lgamma(pf)) if pf > 1 else None
    assert float(ggmt.ggmt_constant((p, 0))) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("p", range(2, 10))
def test_constant_times_mu_is_four_pi(p):
    assert ggmt.ggmt_mu_product(p) == 4


@pytest.mark.parametrize("p", range(2, 7))
def test_mu_q_quadrature(p):
    q = p / (p - 1)
    f = ggmt.minimizer(p)
    integral, _ = integrate.quad(lambda x: f(x) ** (2 * q), -math.inf, math.inf,
                                 epsabs=1e-14, epsrel=1e-13)
    assert 4 * integral == pytest.approx(float(ggmt.mu_q(p)), rel=1e-8)
    # u = (q-1) x / 2 contributes the factor 2/(q-1)
    closed = 4 * (q / 4) ** (q / (q - 1)) * 2 / (q - 1) * ggmt.cosh_norm_integral(2 * q / (q - 1))
    assert closed == pytest.approx(float(ggmt.mu_q(p)), rel=1e-12)


@pytest.mark.parametrize("p", range(2, 7))
def test_minimizer_attains_rayleigh_quotient(p):
    q = p / (p - 1)
    f = ggmt.minimizer(p)
    k, m = (q - 1) / 2, 1 / (q - 1)

    def df(x):
        return -m * k * math.tanh(k * x) * f(x)

    energy, _ = integrate.quad(lambda x: df(x) ** 2 + f(x) ** 2 / 4, -math.inf, math.inf, epsrel=1e-12)
    norm, _ = integrate.quad(lambda x: f(x) ** (2 * q), -math.inf, math.inf, epsrel=1e-12)
    quotient = (4 * math.pi) ** (1 / p) * energy / norm ** (1 / q)
    mu = (float(ggmt.mu_q(p)) * math.pi) ** (1 / p)
    assert quotient == pytest.approx(mu, rel=1e-8)


def test_unsupported_exponents():
    with pytest.raises(UnsupportedExponent):
        ggmt.GGMTParams(1, 0)
    with pytest.raises(UnsupportedExponent):
        ggmt.ggmt_constant((Q(7, 3), 0))
    with pytest.raises(UnsupportedExponent):
        ggmt.mu_q(Q(5, 2))
    with pytest.raises(ValueError):
        ggmt.GGMTParams(4, -1)


def test_check_no_eigenvalues_final_value():
    cert = ggmt.check_no_eigenvalues((4, 1), 130)
    assert cert.status == "verified"
    assert cert.data["value"] == Q(2275, 2592)
    assert cert.data["margin"] == Q(317, 2592)


def test_check_no_eigenvalues_can_fail():
    cert = ggmt.check_no_eigenvalues((4, 0), 130)
    assert cert.status == "failed"
    assert cert.data["value"] > 1


def test_half_integer_criterion_uses_pi_enclosure():
    # C(3/2, 0) = (1/2)^(1/2) Gamma(3) / ((3/2)^(3/2) Gamma(3/2)^2) = (16/3) sqrt(1/3) / pi
    C = ggmt.ggmt_constant((Q(3, 2), 0))
    assert (C.coefficient, C.radicand) == (Q(16, 3), Q(1, 3))
    assert ggmt.check_no_eigenvalues((Q(3, 2), 0), Q(1, 10)).status == "verified"
    assert ggmt.check_no_eigenvalues((Q(3, 2), 0), 10).status == "failed"
    # an integral bound putting C I within the rational enclosure of pi cannot be decided
    I = Q(round(math.pi * math.sqrt(27) / 16 * 10**12), 10**12)
    assert ggmt.check_no_eigenvalues((Q(3, 2), 0), I).status == "inconclusive"


def test_cosh_norm_integral():
    assert ggmt.cosh_norm_integral(2) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        ggmt.cosh_norm_integral(0)


@pytest.fixture(scope="module")
def envelope():
    return ggmt.build_envelopes()


def test_envelope_values_at_origin(envelope):
    g0 = envelope.g(-1)
    assert envelope.A(-1) == 2 * (g0 + RADIUS)
    assert envelope.B(-1) == 2 * (g0 - RADIUS)


@given(st.integers(-99, 99))
def test_envelope_ordering_pointwise(k):
    env = ggmt.build_envelopes()
    x = Q(k, 100)
    assert 0 <= env.B(x) <= env.A(x)


@given(st.integers(-99, 99), st.integers(0, 149))
def test_smaller_radius_narrows_the_envelope(k, n):
    x = Q(k, 100)
    wide = ggmt.build_envelopes(radius=RADIUS)
    narrow = ggmt.build_envelopes(radius=Q(n, 150 * 150))
    assert narrow.A(x) - narrow.B(x) <= wide.A(x) - wide.B(x)


def test_zero_radius_envelopes_coincide(envelope):
    env = ggmt.build_envelopes(radius=0)
    x = Q(1, 7)
    assert env.A(x) == env.B(x)
    # sin(F_0)/r with F_0 = 2 arctan(r g): A = 2 (1+r) g / (1 + r^2 (1+r)^2 g^2)
    r = (1 + x) / (1 - x)
    g = env.g(x)
    assert env.A(x) == 2 * (1 + r) * g / (1 + r * r * (1 + r) ** 2 * g * g)


def test_univariate_forms_agree(envelope):
    u = envelope.univariate()
    x = Q(-3, 11)
    assert u["A_num"](x) / u["A_den"](x) == envelope.A(x)
    assert u["B_num"](x) / u["B_den"](x) == envelope.B(x)


def test_jacobian_identity():
    assert ggmt.jacobian_identity_holds()


@given(st.integers(-99, 99), st.integers(56, 104))
def test_integrand_forms_agree(k, m):
    x, y = Q(k, 100), Q(m, 100)
    enc = ggmt.integrand_enclosure(RatInterval(x), RatInterval(y), RADIUS)
    assert enc.contains(ggmt.integrand_r_form(x, y, RADIUS))


def test_integrand_enclosure_is_monotone_in_the_box():
    X, G = RatInterval(Q(-1, 2), Q(-1, 4)), RatInterval(Q(7, 10), Q(8, 10))
    outer = ggmt.integrand_enclosure(X, G, RADIUS)
    inner = ggmt.integrand_enclosure(RatInterval(Q(-3, 8)), RatInterval(Q(3, 4)), RADIUS)
    assert inner.subset(outer)


def test_riemann_bound_monotone_in_radius(envelope):
    wide = ggmt.riemann_enclosure(envelope.g, Q(52, 100), RADIUS, gap=Q(10), max_cells=4000)
    none = ggmt.riemann_enclosure(envelope.g, Q(52, 100), 0, gap=Q(10), max_cells=4000)
    assert none.upper < wide.upper
    assert none.lower <= none.upper and wide.lower <= wide.upper
    assert wide.upper - wide.lower <= 10


def test_zero_integral_gives_full_margin():
    cert = ggmt.check_no_eigenvalues((7, 2), 0)
    assert cert.status == "verified" and cert.data["margin"] == 1


def test_mu_q_closed_form_at_four():
    assert ggmt.mu_q(4) == Q(256, 945)


@pytest.mark.parametrize("b", [1.0, 10 / 3, 2.5, 7.0])
def test_cosh_norm_integral_against_quadrature(b):
    val, _ = integrate.quad(lambda x: math.exp(-b * (abs(x) + math.log1p(math.exp(-2 * abs(x))) - math.log(2))),
                            -math.inf, math.inf, epsabs=1e-13, epsrel=1e-12)
    assert ggmt.cosh_norm_integral(b) == pytest.approx(val, rel=1e-10)
    if b == 1.0:
        assert ggmt.cosh_norm_integral(b) == pytest.approx(math.pi, rel=1e-14)
