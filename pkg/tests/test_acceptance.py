"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
The certified pipeline runs once per session (about ten minutes on one core).
"""
import math
import random
import time

import numpy as np
import pytest
from scipy import integrate

from conftest import ACCEPTANCE
from skyrmecert import ggmt
from skyrmecert import proof_pipeline as pp
from skyrmecert import spectral_solver as ss
from skyrmecert import tables
from skyrmecert.bounds import grid_bound, grid_points
from skyrmecert.chebyshev import ChebSeries, reexpand, uniform_nodes
from skyrmecert.exact_arith import RatInterval, Rational, interval_pow

Q = Rational


def record(n, checks: dict):
    ok = all(bool(v) for v in checks.values())
    failed = [k for k, v in checks.items() if not v]
    detail = "all checks hold" if ok else "failed: " + ", ".join(failed)
    ACCEPTANCE[n] = (ok, detail)
    assert ok, detail


def claim(cert, name):
    return cert.data["stated_constants"][name]


@pytest.fixture(scope="module")
def run(full_run):
    return full_run


def test_criterion_1_residual(run):
    _, store, _ = run
    c = store["residual"]
    record(1, {
        "residual verified <= 1/500": c.verified and c.bound == Q(1, 500),
        "sum |p_hat| <= 12/10000": c.data["sum_abs_p_hat"] <= Q(12, 10000)
        and claim(c, "sum |p_hat_n|")["stated"] == Q(12, 10000),
        "min Q_hat >= 4/5": claim(c, "min Q_hat")["holds"] and c.data["grid"].certified_bound >= Q(4, 5),
        "chain gives 3/2000": c.data["stated_chain"]["bound"] == Q(3, 2000) and c.data["stated_chain"]["valid"],
        "exact bound <= 3/2000": c.data["certified_bound"] <= Q(3, 2000),
    })


def test_criterion_2_range(run):
    _, store, _ = run
    lo, hi = Q(11, 20) + Q(1, 100), Q(21, 20) - Q(1, 100)
    checks = {
        "g_T range": store["gT-range"].verified and store["gT-range"].bound == RatInterval(lo, hi),
        "g_T lower": store["gT-lower"].verified and store["gT-lower"].bound == lo,
        "g_T upper": store["gT-upper"].verified and store["gT-upper"].bound == hi,
        "g_T' lower": store["gT-prime-lower"].verified and store["gT-prime-lower"].bound == Q(-11, 20) + Q(1, 100),
        "g_T' upper": store["gT-prime-upper"].verified and store["gT-prime-upper"].bound == Q(1, 2) - Q(1, 100),
        "grid sizes 7200/200": store["gT-prime-upper"].parameters["N"] == 7200
        and store["gT-upper"].parameters["N"] == 200,
    }
    record(2, checks)


def test_criterion_3_hessian(run):
    _, store, _ = run
    checks = {}
    for key, b in (("yy", 70), ("yz", 22), ("zz", 8)):
        c = store[f"hessian-{key}"]
        enc = c.data["enclosure"]
        checks[f"{key} within {b} at depth {enc.depth_per_dim}"] = (
            c.verified and c.bound == b and enc.enclosure.subset(RatInterval(-b, b)))
    checks["summary"] = store["hessian"].verified
    record(3, checks)


def test_criterion_4_nonlinearity(run):
    _, store, _ = run
    c = store["nonlinearity-constant"]
    record(4, {
        "M = 39 verified": c.verified and c.bound == 39,
        "5932 <= 6084": c.data["sum_of_squares"] == 5932 and c.data["squared_bound"] == 6084,
    })


def test_criterion_5_linear(run):
    _, store, _ = run
    record(5, {
        "W0 <= -1/2": store["wronskian"].verified and store["wronskian"].bound == Q(-1, 2),
        "|p - p~| <= 3/100": store["perturbation-p"].verified and store["perturbation-p"].bound == Q(3, 100),
        "|q - q~| <= 1/20": store["perturbation-q"].verified and store["perturbation-q"].bound == Q(1, 20),
        "Green value <= 7/10": store["green-value"].verified and store["green-value"].bound == Q(7, 10),
        "Green derivative <= 1/2": store["green-derivative"].verified
        and store["green-derivative"].bound == Q(1, 2),
        "74/100 <= 1": store["inverse-bound"].verified
        and store["inverse-bound"].data["sum_of_squares"] == Q(74, 100),
    })


def test_criterion_6_contraction(run):
    _, store, _ = run
    c = store["contraction"]
    record(6, {
        "Lipschitz 3/5": c.data["lipschitz"] == Q(3, 5),
        "self-map 192/45000 <= 300/45000": c.data["self_map"] == Q(192, 45000) <= Q(300, 45000),
        "verified": c.verified and store["skyrmion-existence"].verified,
    })


def test_criterion_7_spectral(run):
    _, store, lines = run
    integral = store["potential-integral"]
    final = store["no-eigenvalues"]
    record(7, {
        "C(4,1) * 130 = 2275/2592": ggmt.ggmt_constant((4, 1)) * 130 == Q(2275, 2592),
        "integral certified <= 130": integral.verified and integral.data["upper_sum"] <= 130,
        "no-eigenvalues verified": final.verified and final.data["value"] == Q(2275, 2592),
        "run ends with the criterion": lines[-1] == "no-eigenvalues: verified, 2275/2592 < 1",
    })


def test_criterion_8_regeneration():
    sky = ss.solve_skyrmion_collocation(43)
    ref = np.array([float(c) for c in tables.skyrmion_coefficients()[:10]])
    checks = {"skyrmion table, first 10 within 1e-4": bool(np.all(np.abs(sky.coefficients[:10] / ref - 1) < 1e-4))}
    for sign, key in (("minus", "-"), ("plus", "+")):
        fs = ss.solve_fundamental_system(sign, 30)
        ref = np.array([float(c) for c in tables.fundamental_coefficients(key)[:5]])
        checks[f"fundamental {sign} first 5 within 1e-3"] = bool(
            np.all(np.abs(fs.coefficients[:5] / ref - 1) < 1e-3))
    ctx = pp.ProofContext(sky.rationalized(10**9), source="candidates")
    store = pp.run_pipeline(["residual"], ctx)
    checks["fresh coefficients pass range"] = store["gT-range"].verified
    checks["fresh coefficients pass residual"] = store["residual"].verified
    record(8, checks)


def _interval_fuzz(cases: int) -> int:
    rng = random.Random(20240229)
    bad = 0

    def frac():
        return Q(rng.randint(-5000, 5000), rng.randint(1, 997))

    for _ in range(cases):
        a, b, c, d = frac(), frac(), frac(), frac()
        I, J = RatInterval(min(a, b), max(a, b)), RatInterval(min(c, d), max(c, d))
        x = I.lo + Q(rng.randint(0, 64), 64) * I.width
        y = J.lo + Q(rng.randint(0, 64), 64) * J.width
        n = rng.randint(0, 5)
        ok = ((I + J).contains(x + y) and (I - J).contains(x - y) and (I * J).contains(x * y)
              and interval_pow(I, n).contains(x ** n))
        if J.excludes_zero():
            ok = ok and (I / J).contains(x / y)
        bad += not ok
    return bad


def test_criterion_9_properties():
    checks = {"interval fuzzing 10^4 cases, no violation": _interval_fuzz(10_000) == 0}

    rng = random.Random(7)
    sound = True
    for _ in range(30):
        s = ChebSeries([Q(rng.randint(-30, 30), rng.randint(1, 10)) for _ in range(rng.randint(2, 8))])
        N = rng.randint(5, 40)
        cert = grid_bound(s, s.derivative().norm_bounds().f_bound, N, "absmax")
        sound &= max(abs(s(x)) for x in grid_points(10 * N)) <= cert.certified_bound
    checks["grid bound vs 10x dense sampling"] = sound

    identity = True
    for deg in range(1, 12):
        p = ChebSeries([Q(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(deg + 1)])
        nodes = uniform_nodes(2 * deg, deg + 3)
        q = reexpand(p, deg, nodes)
        identity &= all(q(x) == p(x) for x in nodes) and q.coeffs == p.coeffs
    checks["re-expansion interpolation identity"] = identity

    quad = True
    for p in range(2, 7):
        q = p / (p - 1)
        f = ggmt.minimizer(p)
        val, _ = integrate.quad(lambda x: f(x) ** (2 * q), -math.inf, math.inf, epsabs=1e-14, epsrel=1e-13)
        quad &= abs(4 * val / float(ggmt.mu_q(p)) - 1) < 1e-8
        quad &= ggmt.ggmt_mu_product(p) == 4
    checks["mu_q quadrature p = 2..6 within 1e-8"] = quad
    record(9, checks)
