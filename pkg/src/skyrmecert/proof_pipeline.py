"""The certified stages of the stability proof.

Each stage consumes exact data (the embedded tables, or rationalized
candidates), discharges its preconditions through named input certificates
and emits an immutable :class:`Certificate`.  Floats never enter here.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from functools import cached_property
from typing import Callable, Iterable, Sequence

from . import tables
from .bounds import (
    Box,
    GridBoundCert,
    RangeEnclosureCert,
    Subdivision,
    default_workers,
    grid_bound,
    grid_bound_sum_abs,
    interval_range,
)
from .chebyshev import (
    ChebSeries,
    PowerPoly,
    abs_sum,
    basis_psi,
    norm_bounds,
    reexpand,
    series_from_basis,
    uniform_nodes,
)
from .errors import (
    BoundNotAchieved,
    CancellationFailure,
    CertificationError,
    ContractionFails,
    DegreeBoundViolated,
    DenominatorMayVanish,
    DualRouteMismatch,
    MissingCertificates,
)
from .exact_arith import (
    ONE,
    ZERO,
    RatInterval,
    Rational,
    format_rational,
    parse_rational,
    sum_squares_le,
)
from .skyrme_model import (
    ONE_MINUS_X,
    ONE_MINUS_X2,
    ONE_PLUS_X,
    BivarCanonical,
    BivarPoly,
    linearization_coeffs,
    phi_data,
    phi_partials,
    z_compose,
)

Q = Rational
RELATIONS = ("<=", ">=", "<", "nonzero-sign")
STATUSES = ("verified", "failed", "inconclusive")
RADIUS = Q(1, 150)
OMEGA = Box(("x", "y", "z"), (RatInterval(-1, 1), RatInterval(Q(11, 20), Q(21, 20)),
                              RatInterval(Q(-11, 20), Q(1, 2))))


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------
def to_jsonable(v):
    """Exact values become "p/q" strings, intervals ["lo", "hi"]."""
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Rational) or type(v).__name__ == "mpz":
        return format_rational(v)
    if isinstance(v, RatInterval):
        return v.to_json()
    if isinstance(v, (GridBoundCert, RangeEnclosureCert)):
        return v.to_json()
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    raise TypeError(f"cannot serialize {type(v).__name__} on the certified path")


@dataclass(frozen=True, eq=False)
class Certificate:
    id: str
    statement: str
    anchor: str
    bound: object  # Rational, RatInterval or None
    relation: str
    status: str
    inputs: tuple = ()
    parameters: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}")
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}")

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "statement": self.statement,
            "anchor": self.anchor,
            "bound": to_jsonable(self.bound),
            "relation": self.relation,
            "status": self.status,
            "inputs": list(self.inputs),
            "parameters": to_jsonable(self.parameters),
            "data": to_jsonable(self.data),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, d: dict) -> "Certificate":
        b = d.get("bound")
        if isinstance(b, str):
            b = parse_rational(b)
        elif isinstance(b, list):
            b = RatInterval.from_json(b)
        return cls(d["id"], d["statement"], d["anchor"], b, d["relation"], d["status"],
                   tuple(d.get("inputs", ())), d.get("parameters", {}), d.get("data", {}))


@dataclass(frozen=True)
class SobolevBound:
    """sup|f| and sup|f'|; the W^{1,inf} norm is the root of the sum of squares."""

    sup_f: Rational
    sup_df: Rational

    def squared(self) -> Rational:
        return self.sup_f ** 2 + self.sup_df ** 2

    def norm_le(self, bound) -> bool:
        return sum_squares_le((self.sup_f, self.sup_df), bound)


class CertificateStore:
    """Insertion-ordered certificates; inputs must be present before use."""

    def __init__(self):
        self._certs: dict[str, Certificate] = {}

    def __contains__(self, cid) -> bool:
        return cid in self._certs

    def __getitem__(self, cid) -> Certificate:
        return self._certs[cid]

    def __iter__(self):
        return iter(self._certs.values())

    def __len__(self):
        return len(self._certs)

    def ids(self) -> list[str]:
        return list(self._certs)

    def add(self, cert: Certificate) -> Certificate:
        missing = [i for i in cert.inputs if i not in self._certs]
        if missing:
            raise MissingCertificates(f"{cert.id}: inputs not in store: {missing}")
        if cert.verified and not all(self._certs[i].verified for i in cert.inputs):
            raise CertificationError(f"{cert.id}: verified certificate with unverified inputs")
        self._certs[cert.id] = cert
        return cert

    def verified(self, cid: str) -> bool:
        return cid in self._certs and self._certs[cid].verified

    def check_dag(self) -> None:
        seen = set()
        for c in self._certs.values():
            for i in c.inputs:
                if i not in seen:
                    raise CertificationError(f"{c.id} precedes its input {i}")
                if c.verified and not self._certs[i].verified:
                    raise CertificationError(f"{c.id} is verified but input {i} is not")
            seen.add(c.id)

    def write(self, directory: str) -> list[str]:
        os.makedirs(directory, exist_ok=True)
        files = []
        index = []
        for c in self._certs.values():
            name = f"{c.id}.json"
            with open(os.path.join(directory, name), "w", encoding="utf-8") as fh:
                fh.write(c.dumps())
            files.append(name)
            index.append({"id": c.id, "file": name, "status": c.status, "inputs": list(c.inputs)})
        with open(os.path.join(directory, "index.json"), "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"certificates": index}, indent=2, sort_keys=True) + "\n")
        return files

    @classmethod
    def load(cls, directory: str) -> "CertificateStore":
        path = os.path.join(directory, "index.json")
        if not os.path.isfile(path):
            raise MissingCertificates(f"no certificate index in {directory!r}")
        with open(path, encoding="utf-8") as fh:
            index = json.load(fh)["certificates"]
        if not index:
            raise MissingCertificates(f"certificate index in {directory!r} is empty")
        store = cls()
        for entry in index:
            with open(os.path.join(directory, entry["file"]), encoding="utf-8") as fh:
                store.add(Certificate.from_json(json.load(fh)))
        return store

    def report(self) -> str:
        lines = ["# Certificate report", "",
                 "| id | status | claim | anchor |", "|---|---|---|---|"]
        for c in self._certs.values():
            b = to_jsonable(c.bound)
            claim = f"{c.relation} {b}" if b is not None else c.relation
            lines.append(f"| {c.id} | {c.status} | {claim} | {c.anchor} |")
        lines.append("")
        for c in self._certs.values():
            lines += [f"## {c.id}", "", c.statement, "",
                      f"- anchor: {c.anchor}", f"- status: {c.status}"]
            if c.inputs:
                lines.append(f"- inputs: {', '.join(c.inputs)}")
            lines.append("")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# parameters and context
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class StageParams:
    gT_prime_N: int = 7200
    gT_N: int = 200
    residual_nodes: int = 333
    residual_N: int = 500
    hessian_depth: int = 14
    wronskian_N: int = 2000
    perturbation_nodes: int = 376
    perturbation_N: int = 1000
    q_prefactor_power: int = 8
    q_den_N: int = 1000
    q_num_N: int = 8000
    green_w_N: int = 600
    green_rw0_nodes: int = 83
    green_rw0_N: int = 600
    green_P_N: int = 1000
    green_Q_N: int = 800
    integral_max_cells: int = 20000

    def override(self, **kw) -> "StageParams":
        known = {f.name for f in fields(self)}
        bad = sorted(set(kw) - known)
        if bad:
            raise ValueError(f"unknown stage parameters: {bad}")
        return replace(self, **{k: int(v) for k, v in kw.items()})


def fundamental_series(sign: str, coeffs: Sequence) -> tuple[ChebSeries, Rational]:
    """w = sum_{n>=1} c_n psi_{sign,n} with c_1 fixed by w(+-1) = 8."""
    s = "+" if sign in ("+", "plus") else "-"
    tail = series_from_basis(coeffs, "psi-plus" if s == "+" else "psi-minus", first=2)
    end = ONE if s == "+" else -ONE
    psi1 = basis_psi(s, 1)
    c1 = (8 - tail(end)) / psi1(end)
    return tail + psi1 * c1, c1


class ProofContext:
    """Exact inputs, parameters, cached intermediate objects and the store."""

    def __init__(self, skyrmion=None, minus=None, plus=None, *, reciprocals=None,
                 params: StageParams | None = None, workers: int | None = None,
                 source: str = "embedded"):
        self.skyrmion = [parse_rational(c) for c in (skyrmion or tables.skyrmion_coefficients())]
        self.minus = [parse_rational(c) for c in (minus or tables.fundamental_coefficients("-"))]
        self.plus = [parse_rational(c) for c in (plus or tables.fundamental_coefficients("+"))]
        rec = {
            "residual": tables.reciprocal_q(),
            "p5": tables.reciprocal_p5(),
            "qchain": tables.reciprocal_qchain(),
            "w0": tables.reciprocal_w0(),
        }
        rec.update({k: [parse_rational(c) for c in v] for k, v in (reciprocals or {}).items()})
        self.reciprocals = rec
        self.params = params or StageParams()
        self.workers = workers if workers is not None else default_workers()
        self.source = source
        self.store = CertificateStore()

    def provenance(self) -> dict:
        return {"coefficients": self.source}

    @cached_property
    def g_T(self) -> ChebSeries:
        return series_from_basis(self.skyrmion, "phi")

    @cached_property
    def g_powers(self) -> list[PowerPoly]:
        g = self.g_T.to_power()
        out = [PowerPoly((1,))]
        for _ in range(16):
            out.append(out[-1] * g)
        return out

    @cached_property
    def w_minus(self) -> ChebSeries:
        return fundamental_series("-", self.minus)[0]

    @cached_property
    def w_plus(self) -> ChebSeries:
        return fundamental_series("+", self.plus)[0]

    @cached_property
    def fundamental(self) -> "FundamentalSystem":
        return FundamentalSystem(self.w_minus.to_power(), self.w_plus.to_power())

    @cached_property
    def linearization(self):
        return linearization_coeffs(self.g_T)

    @cached_property
    def partials(self):
        return phi_partials()

    def reciprocal(self, name: str) -> ChebSeries:
        return ChebSeries(self.reciprocals[name])


_DEFAULT: ProofContext | None = None


def default_context() -> ProofContext:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = ProofContext()
    return _DEFAULT


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------
def _claim(value, relation: str, stated) -> dict:
    value, stated = parse_rational(value), parse_rational(stated)
    holds = value <= stated if relation == "<=" else value >= stated
    return {"value": value, "relation": relation, "stated": stated, "holds": holds}


def _status(ok: bool, store: CertificateStore, inputs: Iterable[str]) -> str:
    if not all(store.verified(i) for i in inputs):
        return "inconclusive"
    return "verified" if ok else "failed"


def _emit(store: CertificateStore, cert: Certificate, offending=None) -> Certificate:
    store.add(cert)
    if cert.status == "failed":
        raise BoundNotAchieved(f"{cert.id}: {cert.statement}", offending)
    return cert


def _require(store: CertificateStore, ids: Sequence[str]) -> None:
    missing = [i for i in ids if i not in store]
    if missing:
        raise MissingCertificates(f"run these stages first: {missing}")


def _check_degree(p, bound: int, name: str) -> int:
    if p.degree > bound:
        raise DegreeBoundViolated(f"deg {name} = {p.degree} exceeds {bound}")
    return p.degree


def _divide(p: PowerPoly, d: PowerPoly, what: str) -> PowerPoly:
    quo, rem = p.divmod(d)
    if not rem.is_zero():
        raise CancellationFailure(f"{what} is not divisible")
    return quo


def _dual(a, b, what: str) -> None:
    if a != b:
        raise DualRouteMismatch(f"{what}: assembled and re-expanded forms differ")


def _d_bound(s: ChebSeries) -> Rational:
    return norm_bounds(s).df_bound


# ---------------------------------------------------------------------------
# fundamental system algebra
# ---------------------------------------------------------------------------
class FundamentalSystem:
    """u_- = w_-/(1-x)^3, u_+ = w_+/(1+x)^3 with polynomial w_+-.

    With s = 1-x (minus) or 1+x (plus) and e = +1 / -1:
      u' = B / s^4,            B = s w' + 3 e w
      (1-x^2) s^5 L0 u = A,    A = (1-x^2)(s^2 w'' + 6 e s w' + 12 w)
                                   - 8x (s^2 w' + 3 e s w) + 4 s^2 w,
    and A is divisible by s^2 because -3 is an indicial root at the far end.
    """

    def __init__(self, w_minus: PowerPoly, w_plus: PowerPoly):
        self.w = {"-": w_minus, "+": w_plus}
        self.s = {"-": ONE_MINUS_X, "+": ONE_PLUS_X}
        self.A_hat = {}
        self.B = {}
        for sign, e in (("-", 1), ("+", -1)):
            w, s = self.w[sign], self.s[sign]
            w1 = w.derivative()
            w2 = w1.derivative()
            x = PowerPoly((0, 1))
            A = (ONE_MINUS_X2 * (s * s * w2 + s * w1 * (6 * e) + w * 12)
                 - x * 8 * (s * s * w1 + s * w * (3 * e)) + s * s * w * 4)
            self.A_hat[sign] = _divide(A, s * s, f"(1-x^2) s^5 L0 u_{sign}")
            self.B[sign] = s * w1 + w * (3 * e)

    @staticmethod
    def wronskian_numerator(wm: PowerPoly, wp: PowerPoly) -> PowerPoly:
        """(1-x^2)^4 W(u_-, u_+) for u_+- = w_+-/(1+-x)^3."""
        bm = ONE_MINUS_X * wm.derivative() + wm * 3
        bp = ONE_PLUS_X * wp.derivative() - wp * 3
        return wm * bp * ONE_MINUS_X - bm * wp * ONE_PLUS_X

    @cached_property
    def W0(self) -> PowerPoly:
        return self.wronskian_numerator(self.w["-"], self.w["+"])

    @cached_property
    def P1(self) -> PowerPoly:
        """(1-x^2)^4 (u_+ L0 u_- - u_- L0 u_+)."""
        return self.w["+"] * self.A_hat["-"] - self.w["-"] * self.A_hat["+"]

    @cached_property
    def Q1(self) -> PowerPoly:
        """(1-x^2)^4 (u_-' L0 u_+ - u_+' L0 u_-)."""
        num = (self.B["-"] * self.A_hat["+"] * ONE_PLUS_X
               - self.B["+"] * self.A_hat["-"] * ONE_MINUS_X)
        return _divide(num, ONE_MINUS_X2, "Q1 numerator")


# ---------------------------------------------------------------------------
# stages: range and residual
# ---------------------------------------------------------------------------
def verify_gT_range(ctx: ProofContext | None = None) -> Certificate:
    ctx = ctx or default_context()
    store, par, g = ctx.store, ctx.params, ctx.g_T
    nb = norm_bounds(g)
    d2 = _claim(nb.d2f_bound, "<=", 36)
    store.add(Certificate(
        "gT-second-derivative", "sup|g_T''| <= 36 from sum n^2(n^2-1)/3 |c_n|", "prop:Rem",
        Q(36), "<=", "verified" if d2["holds"] else "failed",
        data={"claim": d2}))
    d2_used = Q(36) if d2["holds"] else nb.d2f_bound
    dg = g.derivative()
    gp_max = grid_bound(dg, d2_used, par.gT_prime_N, "max", "g_T'")
    gp_min = grid_bound(dg, d2_used, par.gT_prime_N, "min", "g_T'")
    up, lo = Q(1, 2) - Q(1, 100), Q(-11, 20) + Q(1, 100)
    parts = [("gT-prime-upper", f"g_T' <= 1/2 - 1/100", gp_max, up, "<="),
             ("gT-prime-lower", f"g_T' >= -11/20 + 1/100", gp_min, lo, ">=")]
    for cid, text, gc, bnd, rel in parts:
        store.add(Certificate(
            cid, text, "prop:Rem", bnd, rel,
            _status(gc.holds(bnd), store, ["gT-second-derivative"]),
            ("gT-second-derivative",), {"N": gc.N}, {"grid": gc}))
    sup_dg = max(abs(gp_max.certified_bound), abs(gp_min.certified_bound))
    store.add(Certificate(
        "gT-prime-sup", "sup|g_T'| <= 1", "prop:Rem", ONE, "<=",
        _status(sup_dg <= 1, store, ["gT-prime-upper", "gT-prime-lower"]),
        ("gT-prime-upper", "gT-prime-lower"), data={"value": sup_dg}))
    g_max = grid_bound(g, ONE, par.gT_N, "max", "g_T")
    g_min = grid_bound(g, ONE, par.gT_N, "min", "g_T")
    up, lo = Q(21, 20) - Q(1, 100), Q(11, 20) + Q(1, 100)
    for cid, text, gc, bnd, rel in [("gT-upper", "g_T <= 21/20 - 1/100", g_max, up, "<="),
                                    ("gT-lower", "g_T >= 11/20 + 1/100", g_min, lo, ">=")]:
        store.add(Certificate(
            cid, text, "prop:Rem", bnd, rel,
            _status(gc.holds(bnd), store, ["gT-prime-sup"]),
            ("gT-prime-sup",), {"N": gc.N}, {"grid": gc}))
    inputs = ("gT-prime-upper", "gT-prime-lower", "gT-upper", "gT-lower")
    ok = all(store.verified(i) for i in inputs)
    stated = {
        "g_T' grid max": _claim(gp_max.grid_extreme, "<=", Q(47, 100)),
        "g_T' grid min": _claim(gp_min.grid_extreme, ">=", Q(-51, 100)),
        "g_T grid max": _claim(g_max.grid_extreme, "<=", Q(101, 100)),
        "g_T grid min": _claim(g_min.grid_extreme, ">=", Q(58, 100)),
    }
    cert = Certificate(
        "gT-range",
        "11/20 + 1/100 <= g_T <= 21/20 - 1/100 and -11/20 + 1/100 <= g_T' <= 1/2 - 1/100 on [-1, 1]",
        "prop:Rem", RatInterval(Q(11, 20) + Q(1, 100), Q(21, 20) - Q(1, 100)), "<=",
        "verified" if ok else "failed", inputs,
        {"N_g_prime": par.gT_prime_N, "N_g": par.gT_N},
        {"stated_constants": stated, "provenance": ctx.provenance()})
    return _emit(store, cert, [gp_max.certified_bound, gp_min.certified_bound,
                               g_max.certified_bound, g_min.certified_bound])


class _Enclosable:
    """Adapter giving a bivariate polynomial the interval_range interface."""

    active_dims = (0, 1)

    def __init__(self, poly: BivarPoly):
        self.poly = poly
        self.canonical = BivarCanonical.from_bivar(poly)

    def evaluate(self, x, y):
        return self.poly(x, y)

    def enclose(self, X, Y):
        return self.canonical.enclose(X, Y)

    def __getstate__(self):
        return self.poly

    def __setstate__(self, poly):
        self.__init__(poly)


def verify_psi_hat_positivity(ctx: ProofContext | None = None) -> Certificate:
    ctx = ctx or default_context()
    store = ctx.store
    f = _Enclosable(phi_data().psi_hat)
    Y = OMEGA.sides[1]
    pieces = [(RatInterval(-1, 0), RatInterval(Q(1, 1000), 13)),
              (RatInterval(0, 1), RatInterval(Q(1, 10000), 2))]
    encl = []
    ok = True
    for X, target in pieces:
        c = interval_range(f, Box(("x", "y"), (X, Y)),
                           Subdivision(target=target, max_depth=ctx.params.hessian_depth,
                                       workers=ctx.workers), "Psi_hat")
        encl.append(c)
        ok = ok and c.status == "verified"
    cert = Certificate(
        "psi-hat-positive",
        "Psi_hat([-1,0] x [11/20,21/20]) in [1/1000, 13] and Psi_hat([0,1] x [11/20,21/20]) in [1/10000, 2]",
        "prop:Rem", RatInterval(Q(1, 10000), 13), "<=", "verified" if ok else "failed",
        (), {"max_depth": ctx.params.hessian_depth}, {"enclosures": encl})
    return _emit(store, cert, [c.enclosure for c in encl])


RESIDUAL_PREFACTOR = PowerPoly((Q(21, 10), Q(1, 3), -1)) ** 7


def verify_residual_bound(ctx: ProofContext | None = None) -> Certificate:
    ctx = ctx or default_context()
    store, par = ctx.store, ctx.params
    _require(store, ["gT-range", "psi-hat-positive"])
    d = phi_data()
    g = ctx.g_T
    gp, powers = g.to_power(), ctx.g_powers
    dgp = gp.derivative()
    d2gp = dgp.derivative()
    R = ctx.reciprocal("residual")
    pref = RESIDUAL_PREFACTOR
    # route 1: explicit polynomial algebra
    S = _divide(z_compose(list(d.phi), powers, dgp), ONE_MINUS_X2, "sum Phi_k(x, g) g'^k")
    P = pref * S
    Qp = pref * d.psi_hat.compose(powers)
    degrees = {"P": _check_degree(P, 319, "P"), "Q": _check_degree(Qp, 278, "Q")}
    Rp = R.to_power()
    P_hat = Rp * (Qp * d2gp + P)
    Q_hat = Rp * Qp
    degrees["P_hat"] = _check_degree(P_hat, 333, "P_hat")
    degrees["Q_hat"] = _check_degree(Q_hat, 292, "Q_hat")
    # route 2: exact samples at x_k = -1/2 + k/333 and re-expansion
    dg, d2g = g.derivative(), g.derivative().derivative()

    def q_sample(x):
        return R(x) * pref(x) * d.psi_hat(x, g(x))

    def p_sample(x):
        y, z = g(x), dg(x)
        num = d.phi[0](x, y) + z * (d.phi[1](x, y) + z * d.phi[2](x, y))
        return R(x) * pref(x) * (d.psi_hat(x, y) * d2g(x) + num / (1 - x * x))

    D = par.residual_nodes
    nodes = uniform_nodes(D)
    p_hat = reexpand(p_sample, degrees["P_hat"], nodes)
    q_hat = reexpand(q_sample, degrees["Q_hat"], nodes)
    _dual(p_hat, P_hat.to_cheb(), "P_hat")
    _dual(q_hat, Q_hat.to_cheb(), "Q_hat")
    sum_p = abs_sum(p_hat.coeffs)
    dq = _d_bound(q_hat)
    qmin = grid_bound(q_hat, dq, par.residual_N, "min", "Q_hat")
    lower = qmin.certified_bound
    bound = sum_p / lower if lower > 0 else None
    ok = bound is not None and bound <= Q(1, 500)
    stated = {
        "sum |p_hat_n|": _claim(sum_p, "<=", Q(12, 10000)),
        "sum n^2 |q_hat_n|": _claim(dq, "<=", 22),
        "grid min Q_hat": _claim(qmin.grid_extreme, ">=", Q(93, 100)),
        "min Q_hat": _claim(lower, ">=", Q(4, 5)),
    }
    chain_holds = all(c["holds"] for c in stated.values())
    cert = Certificate(
        "residual", "sup|R(g_T)| <= 1/500 on [-1, 1]", "prop:Rem", Q(1, 500), "<=",
        _status(ok, store, ["gT-range", "psi-hat-positive"]), ("gT-range", "psi-hat-positive"),
        {"nodes": f"-1/2 + k/{D}", "N": par.residual_N},
        {"degrees": degrees, "dual_route": "agree", "sum_abs_p_hat": sum_p,
         "sum_n2_abs_q_hat": dq, "grid": qmin, "certified_bound": bound,
         "stated_constants": stated,
         "stated_chain": {"bound": Q(5, 4) * Q(12, 10000), "valid": chain_holds},
         "provenance": ctx.provenance()})
    return _emit(store, cert, bound)


# ---------------------------------------------------------------------------
# stages: Hessian enclosures and the nonlinearity constant
# ---------------------------------------------------------------------------
HESSIAN_TARGETS = (("d_yy", "hessian-yy", 70), ("d_yz", "hessian-yz", 22), ("d_zz", "hessian-zz", 8))


def verify_hessian_bounds(ctx: ProofContext | None = None) -> Certificate:
    ctx = ctx or default_context()
    store = ctx.store
    _require(store, ["psi-hat-positive"])
    pp = ctx.partials
    depth = ctx.params.hessian_depth
    ids = []
    for attr, cid, b in HESSIAN_TARGETS:
        strat = Subdivision(target=RatInterval(-b, b), max_depth=depth, workers=ctx.workers)
        try:
            rc = interval_range(getattr(pp, attr), OMEGA, strat, attr)
            status, data = rc.status, {"enclosure": rc}
        except DenominatorMayVanish as exc:
            status, data = "inconclusive", {"reason": str(exc)}
        if status == "verified":
            status = _status(True, store, ["psi-hat-positive"])
        store.add(Certificate(
            cid, f"|{attr} Phi| <= {b} on Omega", "lem:pwN", Q(b), "<=", status,
            ("psi-hat-positive",), {"max_depth": depth, "strategy": strat.describe()}, data))
        ids.append(cid)
    statuses = [store[i].status for i in ids]
    status = "failed" if "failed" in statuses else ("inconclusive" if "inconclusive" in statuses
                                                    else "verified")
    cert = Certificate(
        "hessian", "|d_yy Phi| <= 70, |d_yz Phi| <= 22, |d_zz Phi| <= 8 on Omega", "lem:pwN",
        None, "<=", status, tuple(ids), {"max_depth": depth},
        {"omega": OMEGA.to_json(), "bounds": {"yy": 70, "yz": 22, "zz": 8}})
    return _emit(store, cert)


def nonlinearity_constant_holds(yy, yz, zz, M) -> tuple[bool, Rational, Rational]:
    """M >= (1/2) sqrt(yy^2 + 2 yz^2 + zz^2), compared on squares."""
    lhs = parse_rational(yy) ** 2 + 2 * parse_rational(yz) ** 2 + parse_rational(zz) ** 2
    rhs = (2 * parse_rational(M)) ** 2
    return lhs <= rhs, lhs, rhs


def compute_nonlinearity_constant(ctx: ProofContext | None = None, M=39) -> Certificate:
    ctx = ctx or default_context()
    store = ctx.store
    _require(store, ["hessian"])
    ok, lhs, rhs = nonlinearity_constant_holds(70, 22, 8, M)
    cert = Certificate(
        "nonlinearity-constant", f"|N(u)| <= {M} |u|^2_W1inf since 70^2 + 2*22^2 + 8^2 <= (2*{M})^2",
        "prop:CN", parse_rational(M), "<=", _status(ok, store, ["hessian"]), ("hessian",),
        data={"sum_of_squares": lhs, "squared_bound": rhs})
    return _emit(store, cert, lhs)


# ---------------------------------------------------------------------------
# stages: fundamental system
# ---------------------------------------------------------------------------
def verify_wronskian(ctx: ProofContext | None = None) -> Certificate:
    ctx = ctx or default_context()
    store, par = ctx.store, ctx.params
    one = PowerPoly((1,))
    symbolic = FundamentalSystem.wronskian_numerator(one, one)
    if symbolic != PowerPoly((-6,)):
        raise CancellationFailure("W(p_-, p_+) != -6 (1-x^2)^-4")
    wm, wp = ctx.w_minus, ctx.w_plus
    if wm(-1) != 8 or wp(1) != 8:
        raise CancellationFailure("normalization w_-(-1) = w_+(1) = 8 fails")
    fs = ctx.fundamental
    W0 = fs.W0
    deg = _check_degree(W0, 61, "W0")
    one_minus_x2 = ChebSeries((Q(1, 2), 0, Q(-1, 2)))
    direct = wm * wp * (-6) + one_minus_x2 * (wm * wp.derivative() - wm.derivative() * wp)
    _dual(direct, W0.to_cheb(), "W0 (Wronskian formula)")
    dwm, dwp = wm.derivative(), wp.derivative()

    def sample(x):
        a, b = wm(x), wp(x)
        return -6 * a * b + (1 - x * x) * (a * dwp(x) - dwm(x) * b)

    w0 = reexpand(sample, 61, uniform_nodes(61))
    _dual(w0, direct, "W0 (re-expansion)")
    dW = _d_bound(w0)
    gmax = grid_bound(w0, dW, par.wronskian_N, "max", "W0")
    ok = gmax.certified_bound <= Q(-1, 2)
    stated = {"sum n^2 |w0_n|": _claim(dW, "<=", 400),
              "grid max W0": _claim(gmax.grid_extreme, "<=", Q(-94, 100))}
    cert = Certificate(
        "wronskian", "W0 <= -1/2 on [-1, 1], so u_-, u_+ are independent", "prop:fs",
        Q(-1, 2), "<=", "verified" if ok else "failed", (),
        {"nodes": "-1/2 + k/61", "N": par.wronskian_N},
        {"degree": deg, "c1_minus": fundamental_series("-", ctx.minus)[1],
         "c1_plus": fundamental_series("+", ctx.plus)[1], "derivative_bound": dW,
         "grid": gmax, "symbolic_check": "W(p_-,p_+) = -6 (1-x^2)^-4",
         "dual_route": "agree", "stated_constants": stated, "provenance": ctx.provenance()})
    return _emit(store, cert, gmax.certified_bound)


PERTURBATION_PREFACTOR = PowerPoly((Q(13, 10), 0, -1))


def _ratio_chain(name, R, num, den, num_sample, den_sample, D, deg_num, deg_den):
    """Re-expand R*num and R*den at -1/2 + k/D by both routes."""
    Rp = R.to_power()
    RN, RD = Rp * num, Rp * den
    _check_degree(RN, deg_num, f"R*{name}4")
    _check_degree(RD, deg_den, f"R*{name}5")
    nodes = uniform_nodes(D)
    rn = reexpand(lambda x: R(x) * num_sample(x), RN.degree, nodes)
    rd = reexpand(lambda x: R(x) * den_sample(x), RD.degree, nodes)
    _dual(rn, RN.to_cheb(), f"R*{name}4")
    _dual(rd, RD.to_cheb(), f"R*{name}5")
    return rn, rd


def verify_perturbation_bounds(ctx: ProofContext | None = None) -> Certificate:
    ctx = ctx or default_context()
    store, par = ctx.store, ctx.params
    _require(store, ["wronskian", "gT-range"])
    d = phi_data()
    fs, lin = ctx.fundamental, ctx.linearization
    P1, Q1, W0 = fs.P1, fs.Q1, fs.W0
    P2, P3, Q2 = lin.p_num, lin.p_den, lin.q_num
    degrees = {"P1": _check_degree(P1, 66, "P1"), "P2": _check_degree(P2, 263, "P2"),
               "P3": _check_degree(P3, 264, "P3"), "Q1": Q1.degree, "Q2": Q2.degree}
    g = ctx.g_T
    dg = g.derivative()
    wm, wp = ctx.w_minus, ctx.w_plus
    fsm = {k: v.to_cheb() for k, v in (("P1", P1), ("Q1", Q1), ("W0", W0))}

    def pointwise(x):
        y, z = g(x), dg(x)
        p3 = d.psi_hat(x, y)
        p2 = lin.p_parts[0](x, y) + z * lin.p_parts[1](x, y)
        q2 = lin.q_parts[0](x, y) + z * (lin.q_parts[1](x, y) + z * lin.q_parts[2](x, y))
        return p2, p3, q2

    # p-branch
    pre8 = PERTURBATION_PREFACTOR ** 8
    P4 = pre8 * (P2 * W0 - P1 * P3)
    P5 = pre8 * P3 * W0
    degrees["P4"] = _check_degree(P4, 346, "P4")
    degrees["P5"] = _check_degree(P5, 341, "P5")

    def p4s(x):
        p2, p3, _ = pointwise(x)
        return pre8(x) * (p2 * fsm["W0"](x) - fsm["P1"](x) * p3)

    def p5s(x):
        _, p3, _ = pointwise(x)
        return pre8(x) * p3 * fsm["W0"](x)

    R = ctx.reciprocal("p5")
    rp4, rp5 = _ratio_chain("P", R, P4, P5, p4s, p5s, par.perturbation_nodes, 376, 371)
    d5 = _d_bound(rp5)
    m5 = grid_bound(rp5, d5, par.perturbation_N, "min", "R*P5")
    s4 = abs_sum(rp4.coeffs)
    p_bound = s4 / m5.certified_bound if m5.certified_bound > 0 else None
    p_ok = p_bound is not None and p_bound <= Q(3, 100)
    p_stated = {"sum n^2 |p5_n|": _claim(d5, "<=", 17),
                "grid min R*P5": _claim(m5.grid_extreme, ">=", Q(98, 100)),
                "min R*P5": _claim(m5.certified_bound, ">=", Q(94, 100)),
                "(100/94) sum |p4_n|": _claim(Q(100, 94) * s4, "<=", Q(3, 100))}
    store.add(Certificate(
        "perturbation-p", "sup|p - p_tilde| <= 3/100", "prop:fs", Q(3, 100), "<=",
        _status(p_ok, store, ["wronskian", "gT-range"]), ("wronskian", "gT-range"),
        {"prefactor": "(13/10 - x^2)^8", "nodes": f"-1/2 + k/{par.perturbation_nodes}",
         "N": par.perturbation_N},
        {"degrees": {**{k: degrees[k] for k in ("P1", "P2", "P3", "P4", "P5")},
                     "R*P4": rp4.degree, "R*P5": rp5.degree},
         "reciprocal_r0": R.coeffs[0], "derivative_bound": d5, "grid": m5,
         "sum_abs_p4": s4, "certified_bound": p_bound, "dual_route": "agree",
         "stated_constants": p_stated}))
    # q-branch: q - q_tilde = (Q2 W0 - Q1 P3^2) / (P3^2 W0)
    m = par.q_prefactor_power
    prem = PERTURBATION_PREFACTOR ** m
    Q4 = prem * (Q2 * W0 - Q1 * P3 * P3)
    Q5 = prem * P3 * P3 * W0
    degrees["Q4"], degrees["Q5"] = Q4.degree, Q5.degree

    def q4s(x):
        _, p3, q2 = pointwise(x)
        return prem(x) * (q2 * fsm["W0"](x) - fsm["Q1"](x) * p3 * p3)

    def q5s(x):
        _, p3, _ = pointwise(x)
        return prem(x) * p3 * p3 * fsm["W0"](x)

    Rq = ctx.reciprocal("qchain")
    top = max(Q4.degree, Q5.degree) + Rq.degree
    rq4, rq5 = _ratio_chain("Q", Rq, Q4, Q5, q4s, q5s, top, top, top)
    d5q = _d_bound(rq5)
    m5q = grid_bound(rq5, d5q, par.q_den_N, "min", "R*Q5")
    d4q = _d_bound(rq4)
    a4q = grid_bound(rq4, d4q, par.q_num_N, "absmax", "R*Q4")
    q_bound = a4q.certified_bound / m5q.certified_bound if m5q.certified_bound > 0 else None
    q_ok = q_bound is not None and q_bound <= Q(1, 20)
    store.add(Certificate(
        "perturbation-q", "sup|q - q_tilde| <= 1/20", "prop:fs", Q(1, 20), "<=",
        _status(q_ok, store, ["wronskian", "gT-range"]), ("wronskian", "gT-range"),
        {"prefactor": f"(13/10 - x^2)^{m}", "reciprocal_degree": Rq.degree,
         "nodes": f"-1/2 + k/{top}", "N_denominator": par.q_den_N, "N_numerator": par.q_num_N},
        {"degrees": {"Q1": degrees["Q1"], "Q2": degrees["Q2"], "Q4": Q4.degree,
                     "Q5": Q5.degree, "R*Q4": rq4.degree, "R*Q5": rq5.degree},
         "denominator_derivative_bound": d5q, "denominator_grid": m5q,
         "numerator_derivative_bound": d4q, "numerator_grid": a4q,
         "sum_abs_q4": abs_sum(rq4.coeffs), "certified_bound": q_bound,
         "dual_route": "agree"}))
    ok = store.verified("perturbation-p") and store.verified("perturbation-q")
    cert = Certificate(
        "perturbation", "sup|p - p_tilde| <= 3/100 and sup|q - q_tilde| <= 1/20", "prop:fs",
        None, "<=", "verified" if ok else "failed", ("perturbation-p", "perturbation-q"),
        data={"p_bound": p_bound, "q_bound": q_bound})
    return _emit(store, cert, [p_bound, q_bound])


# ---------------------------------------------------------------------------
# stages: perturbation, Green function and inverse bounds
# ---------------------------------------------------------------------------
def _psi_derivative_bound(coeffs: Sequence[Rational], c1: Rational) -> Rational:
    """2 sum (n^2 + 1)|c_n| bounds sup|w'| in either psi basis."""
    allc = [c1] + list(coeffs)
    return 2 * sum(((n * n + 1) * abs(c) for n, c in enumerate(allc, start=1)), ZERO)


def _vanishing_order(p: PowerPoly, at: int, count: int) -> bool:
    return all(c == 0 for c in p.taylor_at(Q(at), count))


def verify_green_bounds(ctx: ProofContext | None = None) -> Certificate:
    ctx = ctx or default_context()
    store, par = ctx.store, ctx.params
    _require(store, ["wronskian"])
    wm, wp = ctx.w_minus, ctx.w_plus
    ids = []
    for sign, w, coeffs in (("minus", wm, ctx.minus), ("plus", wp, ctx.plus)):
        c1 = fundamental_series(sign, coeffs)[1]
        dwb = _psi_derivative_bound(coeffs, c1)
        gm = grid_bound(w, dwb, par.green_w_N, "min", f"w_{sign}")
        ok = gm.certified_bound > 0 and (sign == "plus" or gm.certified_bound >= Q(1, 2))
        cid = f"green-w-{sign}-positive"
        stmt = "min w_- >= 1/2" if sign == "minus" else "w_+ > 0"
        data = {"derivative_bound": dwb, "grid": gm}
        if sign == "minus":
            data["stated_constants"] = {"sup|w_-'|": _claim(dwb, "<=", 60),
                                        "grid min w_-": _claim(gm.grid_extreme, ">=", Q(7, 10))}
        store.add(Certificate(cid, stmt, "prop:fsbounds",
                              Q(1, 2) if sign == "minus" else ZERO,
                              ">=" if sign == "minus" else "nonzero-sign",
                              "verified" if ok else "failed", (), {"N": par.green_w_N}, data))
        ids.append(cid)
    # R W0 >= 98/100
    R = ctx.reciprocal("w0")
    fs = ctx.fundamental
    W0 = fs.W0
    RW0 = R.to_power() * W0
    _check_degree(RW0, 83, "R*W0")
    w0c = W0.to_cheb()
    D = par.green_rw0_nodes
    rw0 = reexpand(lambda x: R(x) * w0c(x), D, uniform_nodes(D))
    _dual(rw0, RW0.to_cheb(), "R*W0")
    drw = _d_bound(rw0)
    rmin = grid_bound(rw0, drw, par.green_rw0_N, "min", "R*W0")
    store.add(Certificate(
        "green-rw0-lower", "R W0 >= 98/100 on [-1, 1]", "prop:fsbounds", Q(98, 100), ">=",
        _status(rmin.certified_bound >= Q(98, 100), store, ["wronskian"]), ("wronskian",),
        {"nodes": f"-1/2 + k/{D}", "N": par.green_rw0_N},
        {"derivative_bound": drw, "grid": rmin,
         "stated_constants": {"sum n^2 |a_n|": _claim(drw, "<=", 3),
                              "grid min R*W0": _claim(rmin.grid_extreme, ">=", Q(99, 100))}}))
    ids.append("green-rw0-lower")
    lower = rmin.certified_bound
    # I_+- by exact integration of P_+- = (1 -+ y)^4 (1 +- y) (-R) w_+-
    Rp = R.to_power()
    wmp, wpp = wm.to_power(), wp.to_power()
    P_minus = ONE_PLUS_X ** 4 * ONE_MINUS_X * (-Rp) * wmp
    P_plus = ONE_MINUS_X ** 4 * ONE_PLUS_X * (-Rp) * wpp
    mono = {}
    for name, P, w, s4, s1 in (("P_-", P_minus, wm, ONE_PLUS_X ** 4, ONE_MINUS_X),
                               ("P_+", P_plus, wp, ONE_MINUS_X ** 4, ONE_PLUS_X)):
        _check_degree(P, 57, name)
        re = reexpand(lambda x: s4(x) * s1(x) * (-R(x)) * w(x), 57, uniform_nodes(57),
                      basis="monomial")
        _dual(re, P, name)
        mono[name] = re
    anti_m = mono["P_-"].antiderivative()
    anti_p = mono["P_+"].antiderivative()
    I_minus = anti_m - anti_m(-ONE)
    I_plus = PowerPoly((anti_p(ONE),)) - anti_p
    orders = {"I_- at -1": _vanishing_order(I_minus, -1, 5),
              "I_+ at +1": _vanishing_order(I_plus, 1, 5)}
    if not all(orders.values()):
        raise CancellationFailure(f"I_+- do not vanish to fifth order: {orders}")
    wmp1, wpp1 = wmp.derivative(), wpp.derivative()
    Pg = (wmp * _divide(I_plus, ONE_MINUS_X ** 3, "I_+ / (1-x)^3")
          + wpp * _divide(I_minus, ONE_PLUS_X ** 3, "I_- / (1+x)^3"))
    _check_degree(Pg, 85, "P")
    Qm = (wmp1 * ONE_MINUS_X + wmp * 3) * _divide(I_plus, ONE_MINUS_X ** 4, "I_+ / (1-x)^4")
    Qp = (wpp1 * ONE_PLUS_X - wpp * 3) * _divide(I_minus, ONE_PLUS_X ** 4, "I_- / (1+x)^4")
    _check_degree(Qm, 84, "Q_-")
    _check_degree(Qp, 84, "Q_+")
    # Chebyshev forms by re-expansion of exact samples, checked against conversion
    pc = reexpand(Pg, Pg.degree, uniform_nodes(Pg.degree))
    _dual(pc, Pg.to_cheb(), "P")
    qmc = reexpand(Qm, Qm.degree, uniform_nodes(Qm.degree))
    qpc = reexpand(Qp, Qp.degree, uniform_nodes(Qp.degree))
    _dual(qmc, Qm.to_cheb(), "Q_-")
    _dual(qpc, Qp.to_cheb(), "Q_+")
    dP = _d_bound(pc)
    pmax = grid_bound(pc, dP, par.green_P_N, "absmax", "P")
    value_bound = pmax.certified_bound / lower
    dQ = (_d_bound(qmc), _d_bound(qpc))
    qsum = grid_bound_sum_abs([qmc, qpc], dQ, par.green_Q_N, "|Q_-| + |Q_+|")
    deriv_bound = qsum.certified_bound / lower
    pos = ["green-w-minus-positive", "green-w-plus-positive", "green-rw0-lower"]
    store.add(Certificate(
        "green-value", "|u_-| int_x^1 |u_+/W| + |u_+| int_-1^x |u_-/W| <= 7/10", "prop:fsbounds",
        Q(7, 10), "<=", _status(value_bound <= Q(7, 10), store, pos), tuple(pos),
        {"N": par.green_P_N},
        {"degree": Pg.degree, "derivative_bound": dP, "grid": pmax, "certified_bound": value_bound,
         "vanishing_orders": orders,
         "stated_constants": {"sup|P'|": _claim(dP, "<=", 3),
                              "grid max |P|": _claim(pmax.grid_extreme, "<=", Q(591, 1000))}}))
    store.add(Certificate(
        "green-derivative", "|u_-'| int_x^1 |u_+/W| + |u_+'| int_-1^x |u_-/W| <= 1/2",
        "prop:fsbounds", Q(1, 2), "<=", _status(deriv_bound <= Q(1, 2), store, pos), tuple(pos),
        {"N": par.green_Q_N},
        {"degrees": [Qm.degree, Qp.degree], "derivative_bounds": list(dQ), "grid": qsum,
         "certified_bound": deriv_bound,
         "stated_constants": {"sum sup|Q'|": _claim(dQ[0] + dQ[1], "<=", 20),
                              "max(|Q_-|+|Q_+|)": _claim(qsum.certified_bound, "<=", Q(46, 100))}}))
    ids += ["green-value", "green-derivative"]
    ok = all(store.verified(i) for i in ids)
    cert = Certificate(
        "green", "Green-function bounds 7/10 (value) and 1/2 (derivative)", "prop:fsbounds",
        None, "<=", "verified" if ok else "failed", tuple(ids),
        data={"value_bound": value_bound, "derivative_bound": deriv_bound})
    return _emit(store, cert, [value_bound, deriv_bound])


def inverse_bound_holds(value_bound, derivative_bound) -> tuple[bool, Rational]:
    """|L^-1 f|_W1inf <= |f| needs value^2 + derivative^2 <= 1."""
    s = parse_rational(value_bound) ** 2 + parse_rational(derivative_bound) ** 2
    return s <= 1, s


def verify_inverse_bound(ctx: ProofContext | None = None) -> Certificate:
    ctx = ctx or default_context()
    store = ctx.store
    _require(store, ["green"])
    ok, s = inverse_bound_holds(Q(7, 10), Q(1, 2))
    cert = Certificate(
        "inverse-bound", "|L_tilde^-1 f|_W1inf <= |f|_Linf since (1/2)^2 + (7/10)^2 <= 1",
        "cor:CL", ONE, "<=", _status(ok, store, ["green"]), ("green",),
        data={"sum_of_squares": s, "margin": 1 - s})
    return _emit(store, cert, s)


# ---------------------------------------------------------------------------
# stages: contraction and existence
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ContractionData:
    residual: Rational
    p_err: Rational
    q_err: Rational
    M: Rational
    radius: Rational
    inverse: Rational = ONE

    def self_map(self) -> Rational:
        r = self.radius
        return self.inverse * (self.residual + self.p_err * r + self.q_err * r + self.M * r * r)

    def lipschitz(self) -> Rational:
        return self.inverse * (self.p_err + self.q_err + 2 * self.M * self.radius)

    def contracts(self) -> bool:
        return self.self_map() <= self.radius and self.lipschitz() < 1


def verify_contraction(ctx: ProofContext | None = None) -> Certificate:
    ctx = ctx or default_context()
    store = ctx.store
    inputs = ("residual", "nonlinearity-constant", "perturbation", "inverse-bound")
    _require(store, inputs)
    cd = ContractionData(Q(1, 500), Q(3, 100), Q(1, 20), Q(39), RADIUS)
    sm, lip = cd.self_map(), cd.lipschitz()
    doubled = replace(cd, M=Q(78))
    robustness = {"M": 78, "self_map": doubled.self_map(),
                  "self_map_holds": doubled.self_map() <= RADIUS,
                  "lipschitz": doubled.lipschitz(), "lipschitz_holds": doubled.lipschitz() < 1}
    data = {"self_map": sm, "radius": RADIUS, "self_map_slack": RADIUS - sm,
            "lipschitz": lip, "robustness_doubled_M": robustness}
    status = _status(cd.contracts(), store, inputs)
    cert = Certificate(
        "contraction", "K maps the 1/150-ball of W1inf into itself with Lipschitz constant 3/5",
        "lem:contr", lip, "<", status, inputs, {"radius": RADIUS}, data)
    store.add(cert)
    if status == "failed":
        raise ContractionFails("contraction argument fails", RADIUS - sm)
    exist = Certificate(
        "skyrmion-existence",
        "F_0 = 2 arctan(r(1+r)(g_T + delta)) with |delta|_W1inf <= 1/150; smoothness and "
        "uniqueness of the Skyrmion follow from classical ODE theory",
        "cor:F0", RADIUS, "<=", _status(True, store, ("contraction", "gT-range")),
        ("contraction", "gT-range"))
    return _emit(store, exist)


# ---------------------------------------------------------------------------
# registry and runner
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Stage:
    name: str
    run: Callable
    requires: tuple
    produces: str


STAGES = (
    Stage("range", verify_gT_range, (), "gT-range"),
    Stage("psi-hat", verify_psi_hat_positivity, (), "psi-hat-positive"),
    Stage("residual", verify_residual_bound, ("range", "psi-hat"), "residual"),
    Stage("hessian", verify_hessian_bounds, ("psi-hat",), "hessian"),
    Stage("nonlinearity", compute_nonlinearity_constant, ("hessian",), "nonlinearity-constant"),
    Stage("wronskian", verify_wronskian, (), "wronskian"),
    Stage("perturbation", verify_perturbation_bounds, ("wronskian", "range"), "perturbation"),
    Stage("green", verify_green_bounds, ("wronskian",), "green"),
    Stage("inverse", verify_inverse_bound, ("green",), "inverse-bound"),
    Stage("contraction", verify_contraction,
          ("residual", "nonlinearity", "perturbation", "inverse"), "skyrmion-existence"),
)


def registry() -> dict[str, Stage]:
    from . import ggmt  # the spectral stages build on this module

    stages = list(STAGES) + list(ggmt.STAGES)
    return {s.name: s for s in stages}


def plan(targets: Sequence[str]) -> list[Stage]:
    """Stages needed for the targets, in dependency order."""
    reg = registry()
    if not targets or "all" in targets:
        targets = list(reg)
    order: list[str] = []

    def visit(name, trail=()):
        if name not in reg:
            raise ValueError(f"unknown stage {name!r}; known: {sorted(reg)}")
        if name in trail:
            raise ValueError(f"dependency cycle at {name}")
        for dep in reg[name].requires:
            visit(dep, trail + (name,))
        if name not in order:
            order.append(name)

    for t in targets:
        visit(t)
    return [reg[n] for n in order]


def run_pipeline(targets: Sequence[str] = ("all",), ctx: ProofContext | None = None,
                 log: Callable[[str], None] | None = None) -> CertificateStore:
    """Run stages in order; failures are recorded, dependents come out inconclusive."""
    ctx = ctx or ProofContext()
    for stage in plan(targets):
        if stage.produces in ctx.store:
            continue
        blocked = [r for r in stage.requires
                   if not ctx.store.verified(registry()[r].produces)]
        if blocked:
            ctx.store.add(Certificate(
                stage.produces, f"not attempted: prerequisites {blocked} not verified",
                "dependency", None, "<=", "inconclusive"))
            if log:
                log(f"{stage.produces}: inconclusive (blocked by {', '.join(blocked)})")
            continue
        try:
            stage.run(ctx)
        except (BoundNotAchieved, ContractionFails):
            pass
        if log:
            log(summary_line(ctx.store[stage.produces]))
    return ctx.store


def summary_line(c: Certificate) -> str:
    """One line per certificate, e.g. ``residual: verified (<= 1/500)``."""
    def short(v):
        if isinstance(v, RatInterval):
            return f"[{short(v.lo)}, {short(v.hi)}]"
        v = parse_rational(v)
        text = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return text if len(text) <= 32 else f"~{float(v):.6g}"

    value = c.data.get("value") if isinstance(c.data, dict) else None
    if isinstance(value, Rational) and c.bound is not None:
        return f"{c.id}: {c.status}, {short(value)} {c.relation} {short(c.bound)}"
    return f"{c.id}: {c.status}" + (f" ({c.relation} {short(c.bound)})" if c.bound is not None else "")


__all__ = [
    "summary_line",
    "Certificate",
    "CertificateStore",
    "SobolevBound",
    "StageParams",
    "ProofContext",
    "FundamentalSystem",
    "ContractionData",
    "Stage",
    "STAGES",
    "fundamental_series",
    "verify_gT_range",
    "verify_psi_hat_positivity",
    "verify_residual_bound",
    "verify_hessian_bounds",
    "compute_nonlinearity_constant",
    "nonlinearity_constant_holds",
    "verify_wronskian",
    "verify_perturbation_bounds",
    "verify_green_bounds",
    "inverse_bound_holds",
    "verify_inverse_bound",
    "verify_contraction",
    "registry",
    "plan",
    "run_pipeline",
    "to_jsonable",
    "default_context",
]
