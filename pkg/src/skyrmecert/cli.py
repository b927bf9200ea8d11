"""Command line: solve, verify, ggmt, report, tables.

Exit codes: 0 all verified, 1 a certificate failed, 2 inconclusive,
3 usage or I/O error.
"""
from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from dataclasses import dataclass, field

from . import proof_pipeline as pp
from . import tables
from .errors import CertificationError, MissingCertificates
from .exact_arith import format_rational, parse_rational

EXIT_OK, EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3

CANDIDATE_FILES = {
    "skyrmion": "skyrmion.json",
    "minus": "fundamental-minus.json",
    "plus": "fundamental-plus.json",
}


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(path: str, text: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------
def _candidate(basis: str, first_index: int, coeffs, diagnostics: dict) -> dict:
    return {"candidate": True, "basis": basis, "first_index": first_index,
            "coefficients": [format_rational(c) for c in coeffs], "diagnostics": diagnostics}


def cmd_solve(args) -> int:
    from . import spectral_solver as ss

    cfg = ss.SolverConfig(tol=args.tol)
    cap = int(args.cap)
    if args.problem == "skyrmion":
        if args.n0 < 3:
            raise UsageError("--n0 must be at least 3: phi_0 and phi_1 vanish identically")
        res = ss.solve_skyrmion_collocation(args.n0, cfg)
        coeffs = res.rationalized(cap)
        diag = {"N0": args.n0, "newton_iterations": res.iterations,
                "residual_norms": [float(r) for r in res.residual_norms],
                "collocation_residual": float(res.collocation_residual),
                "sampled_residual_sup": ss.collocation_residual_sup(res.coefficients),
                "denominator_cap": cap, "initial_guess": cfg.initial_guess}
        doc = _candidate("phi", 2, coeffs, diag)
        name = CANDIDATE_FILES["skyrmion"]
        print(f"skyrmion: {len(coeffs)} coefficients, {res.iterations} Newton steps, "
              f"sampled residual {diag['sampled_residual_sup']:.3e}")
    else:
        if args.n < 2:
            raise UsageError("--n must be at least 2")
        g = None
        if args.skyrmion:
            g = _load_candidate(args.skyrmion)
        res = ss.solve_fundamental_system(args.sign, args.n, cfg, g_coeffs=g)
        coeffs = res.rationalized(cap)
        sign = "minus" if args.sign in ("-", "minus") else "plus"
        diag = {"N": args.n, "sign": sign, "c1_float": res.c1,
                "normalization": "w(+-1) = 8, c_1 fixed exactly by the certified path",
                "collocation_residual": float(res.collocation_residual), "denominator_cap": cap}
        doc = _candidate(f"psi-{sign}", 2, coeffs, diag)
        name = CANDIDATE_FILES[sign]
        print(f"fundamental {sign}: {len(coeffs)} free coefficients, c_1 = {res.c1:.10g} "
              f"(normalization)")
    path = os.path.join(args.out, name)
    _write(path, _dump(doc))
    print(f"wrote {path}")
    return EXIT_OK


def _load_candidate(path: str) -> list:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    return [parse_rational(c) for c in doc["coefficients"]]


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------
@dataclass
class PipelineConfig:
    targets: list
    overrides: dict = field(default_factory=dict)
    workers: int | None = None
    out: str = "certificates"
    candidates: str | None = None

    def __post_init__(self):
        known = pp.registry()
        bad = [t for t in self.targets if t != "all" and t not in known]
        if bad:
            raise UsageError(f"unknown stage(s) {bad}; known: {sorted(known)}")
        try:
            self.params = pp.StageParams().override(**self.overrides)
        except (ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from exc

    def context(self) -> pp.ProofContext:
        kw = {}
        source = "embedded"
        if self.candidates:
            for key, name in CANDIDATE_FILES.items():
                path = os.path.join(self.candidates, name)
                if os.path.isfile(path):
                    kw[key] = _load_candidate(path)
            if not kw:
                raise UsageError(f"no candidate files in {self.candidates!r}")
            source = "candidates:" + ",".join(sorted(kw))
        return pp.ProofContext(**kw, params=self.params, workers=self.workers, source=source)


def _parse_overrides(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {item!r}")
        try:
            out[key.strip().replace("-", "_")] = int(value)
        except ValueError as exc:
            raise UsageError(f"--param {key}: not an integer") from exc
    return out


def exit_code(store: pp.CertificateStore) -> tuple[int, str | None]:
    for c in store:
        if c.status == "failed":
            return EXIT_FAILED, c.id
    for c in store:
        if c.status == "inconclusive":
            return EXIT_INCONCLUSIVE, c.id
    return EXIT_OK, None


def cmd_verify(args) -> int:
    overrides = _parse_overrides(args.param)
    if args.depth is not None:
        overrides["hessian_depth"] = args.depth
    cfg = PipelineConfig(args.stages, overrides, args.workers, args.out, args.use_candidates)
    ctx = cfg.context()
    stamps = []

    def log(line):
        print(line, flush=True)
        stamps.append(f"{datetime.datetime.now().isoformat(timespec='seconds')} {line}")

    store = pp.run_pipeline(cfg.targets, ctx, log)
    store.write(cfg.out)
    # timestamps stay out of the certificates so those are byte-stable
    _write(os.path.join(cfg.out, "run.log"), "\n".join(stamps) + "\n")
    code, culprit = exit_code(store)
    if culprit:
        print(f"{culprit}: {store[culprit].status}", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# ggmt
# ---------------------------------------------------------------------------
def cmd_ggmt(args) -> int:
    from . import ggmt

    inputs = ()
    store = None
    if args.integral_cert:
        try:
            with open(args.integral_cert, encoding="utf-8") as fh:
                integral = pp.Certificate.from_json(json.load(fh))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read integral certificate: {exc}") from exc
        bound = integral.bound
        store = pp.CertificateStore()
        store.add(integral)
        inputs = (integral.id,)
    else:
        bound = parse_rational(args.integral)
    params = ggmt.GGMTParams(parse_rational(args.p), args.ell)
    cert = ggmt.check_no_eigenvalues(params, bound, inputs, store)
    value = cert.data["value"]
    print(f"C(p={args.p}, l={args.ell}) = {pp.to_jsonable(cert.data['constant'])}")
    print(f"criterion value = {pp.to_jsonable(value)}")
    if "margin" in cert.data:
        print(f"margin = {pp.to_jsonable(cert.data['margin'])}")
    print(pp.summary_line(cert))
    if args.out:
        _write(args.out, cert.dumps() + "\n")
    return {"verified": EXIT_OK, "failed": EXIT_FAILED}.get(cert.status, EXIT_INCONCLUSIVE)


# ---------------------------------------------------------------------------
# report / tables
# ---------------------------------------------------------------------------
def cmd_report(args) -> int:
    store = pp.CertificateStore.load(args.dir)
    text = store.report()
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return exit_code(store)[0]


def cmd_tables(args) -> int:
    keys = list(tables.TABLES) if args.which == "all" else [args.which]
    for key in keys:
        if key not in tables.TABLES:
            raise UsageError(f"unknown table {key!r}; known: {sorted(tables.TABLES)}")
        name, entries = tables.TABLES[key]
        if args.json:
            sys.stdout.write(_dump({"table": key, "name": name, "entries": list(entries)}))
        else:
            if len(keys) > 1:
                sys.stdout.write(f"# {key} {name}\n")
            sys.stdout.write("".join(f"{e}\n" for e in entries))
    return EXIT_OK


# ---------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skyrmecert", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="float collocation solves producing candidate tables")
    s.add_argument("problem", choices=("skyrmion", "fundamental"))
    s.add_argument("--n0", type=int, default=43)
    s.add_argument("--n", type=int, default=30)
    s.add_argument("--sign", choices=("minus", "plus", "-", "+"), default="minus")
    s.add_argument("--skyrmion", help="candidate skyrmion file to linearize around")
    s.add_argument("--cap", type=float, default=1e9, help="denominator cap for rationalization")
    s.add_argument("--tol", type=float, default=1e-11)
    s.add_argument("--out", default="candidates")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="run certified stages")
    v.add_argument("stages", nargs="+")
    v.add_argument("--depth", type=int, help="subdivision depth cap for the Hessian enclosures")
    v.add_argument("--param", action="append", metavar="KEY=VALUE", help="stage parameter override")
    v.add_argument("--out", default="certificates")
    v.add_argument("--use-candidates", metavar="DIR")
    v.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: SKYRMECERT_WORKERS or CPU count)")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("ggmt", help="evaluate the GGMT criterion")
    g.add_argument("--p", default="4")
    g.add_argument("--ell", type=int, default=1)
    src = g.add_mutually_exclusive_group()
    src.add_argument("--integral-cert", metavar="FILE")
    src.add_argument("--integral", default="130")
    g.add_argument("--out", metavar="FILE")
    g.set_defaults(func=cmd_ggmt)

    r = sub.add_parser("report", help="markdown report of a certificate directory")
    r.add_argument("--dir", default="certificates")
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)

    t = sub.add_parser("tables", help="dump embedded coefficient tables")
    t.add_argument("--which", default="all")
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_tables)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, MissingCertificates, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
