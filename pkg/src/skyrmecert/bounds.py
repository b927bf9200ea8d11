"""Certified sup-norm bounds.

Two engines:

* grid bounds: sample f exactly on {-1 + 2k/N} and widen by (2/N) * sup|f'|;
* range enclosures: rational interval arithmetic over a subdivided box.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

from .errors import DenominatorMayVanish, DivisionByIntervalContainingZero
from .exact_arith import (
    ZERO,
    RatInterval,
    Rational,
    format_rational,
    hull_all,
    parse_rational,
)

MODES = ("max", "min", "absmax")


def grid_points(N: int) -> list[Rational]:
    if N < 1:
        raise ValueError("N must be at least 1")
    return [Rational(2 * k - N, N) for k in range(N + 1)]


@dataclass(frozen=True)
class GridBoundCert:
    target: str
    mode: str
    N: int
    grid_extreme: Rational
    derivative_bound: Rational
    certified_bound: Rational
    argext: Rational

    def holds(self, bound) -> bool:
        """Does the certificate imply the stated one-sided bound?"""
        bound = parse_rational(bound)
        if self.mode == "min":
            return self.certified_bound >= bound
        return self.certified_bound <= bound

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "mode": self.mode,
            "N": self.N,
            "grid_extreme": format_rational(self.grid_extreme),
            "argext": format_rational(self.argext),
            "derivative_bound": format_rational(self.derivative_bound),
            "certified_bound": format_rational(self.certified_bound),
        }


def grid_bound(
    f: Callable[[Rational], Rational],
    dbound,
    N: int,
    mode: str = "max",
    target: str = "f",
) -> GridBoundCert:
    """One-sided bound on [-1, 1] from exact values on the grid.

    ``dbound`` must bound sup|f'| on [-1, 1]; the caller certifies it.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    dbound = parse_rational(dbound)
    if dbound < 0:
        raise ValueError("derivative bound must be nonnegative")
    pts = grid_points(N)
    vals = [parse_rational(f(x)) for x in pts]
    if mode == "absmax":
        vals = [abs(v) for v in vals]
    pick = min if mode == "min" else max
    k = pick(range(len(vals)), key=vals.__getitem__)
    ext = vals[k]
    slack = Rational(2, N) * dbound
    bound = ext - slack if mode == "min" else ext + slack
    return GridBoundCert(target, mode, N, ext, dbound, bound, pts[k])


def grid_bound_sum_abs(
    fs: Sequence[Callable[[Rational], Rational]],
    dbounds: Sequence,
    N: int,
    target: str = "sum|f_i|",
) -> GridBoundCert:
    """Bound max sum_i |f_i| for piecewise C^1 sums of absolute values."""
    if len(fs) != len(dbounds):
        raise ValueError("one derivative bound per function is required")
    dsum = sum((parse_rational(d) for d in dbounds), ZERO)
    if dsum < 0 or any(parse_rational(d) < 0 for d in dbounds):
        raise ValueError("derivative bounds must be nonnegative")
    pts = grid_points(N)
    vals = [sum((abs(parse_rational(f(x))) for f in fs), ZERO) for x in pts]
    k = max(range(len(vals)), key=vals.__getitem__)
    return GridBoundCert(target, "absmax", N, vals[k], dsum, vals[k] + Rational(2, N) * dsum, pts[k])


# ---------------------------------------------------------------------------
# interval range enclosures
# ---------------------------------------------------------------------------
class Enclosable(Protocol):
    def enclose(self, *intervals: RatInterval) -> RatInterval: ...

    def evaluate(self, *point: Rational) -> Rational: ...


@dataclass(frozen=True)
class Box:
    names: tuple
    sides: tuple

    def __post_init__(self):
        if len(self.names) != len(self.sides):
            raise ValueError("one name per side")

    @classmethod
    def of(cls, **sides) -> "Box":
        return cls(tuple(sides), tuple(RatInterval.coerce(v) if not isinstance(v, tuple) else RatInterval(*v)
                                       for v in sides.values()))

    @property
    def dim(self) -> int:
        return len(self.sides)

    def bisect(self, d: int) -> tuple["Box", "Box"]:
        a, b = self.sides[d].bisect()
        left = self.sides[:d] + (a,) + self.sides[d + 1 :]
        right = self.sides[:d] + (b,) + self.sides[d + 1 :]
        return Box(self.names, left), Box(self.names, right)

    def midpoint(self) -> tuple:
        return tuple(s.mid for s in self.sides)

    def to_json(self) -> dict:
        return {n: s.to_json() for n, s in zip(self.names, self.sides)}


@dataclass(frozen=True)
class Subdivision:
    """Strategy descriptor.

    With a ``target`` interval, boxes are bisected (widest side first,
    measured relative to the initial box) only while their enclosure is not
    inside the target; ``max_depth`` caps bisections per dimension.
    Without a target, ``uniform_rounds`` rounds of bisection are applied to
    every box.
    """

    target: RatInterval | None = None
    max_depth: int = 14
    uniform_rounds: int = 0
    workers: int = 1

    def describe(self) -> dict:
        return {
            "kind": "adaptive-widest" if self.target is not None else "uniform-widest",
            "target": self.target.to_json() if self.target is not None else None,
            "max_depth_per_dim": self.max_depth,
            "uniform_rounds": self.uniform_rounds,
        }


@dataclass(frozen=True)
class RangeEnclosureCert:
    target: str
    box: Box
    subdivision: dict
    enclosure: RatInterval | None
    status: str
    depth: int
    depth_per_dim: tuple
    boxes_evaluated: int
    leaves: int
    witness: tuple | None = None
    unresolved: int = 0
    notes: tuple = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "box": self.box.to_json(),
            "subdivision": self.subdivision,
            "enclosure": self.enclosure.to_json() if self.enclosure is not None else None,
            "status": self.status,
            "depth": self.depth,
            "depth_per_dim": list(self.depth_per_dim),
            "boxes_evaluated": self.boxes_evaluated,
            "leaves": self.leaves,
            "unresolved": self.unresolved,
            "witness": [format_rational(v) for v in self.witness] if self.witness else None,
        }


def _enclose_one(args):
    f, sides = args
    try:
        return f.enclose(*sides)
    except DivisionByIntervalContainingZero:
        return None


def _map(f, boxes, workers, pool):
    jobs = [(f, b.sides) for b in boxes]
    if pool is None or len(jobs) < 4 * workers:
        return [_enclose_one(j) for j in jobs]
    chunk = max(1, len(jobs) // (8 * workers))
    return list(pool.map(_enclose_one, jobs, chunksize=chunk))


def default_workers() -> int:
    env = os.environ.get("SKYRMECERT_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1))


def interval_range(
    f: Enclosable,
    box: Box,
    strategy: Subdivision = Subdivision(),
    name: str = "f",
) -> RangeEnclosureCert:
    """Enclose f(box) by interval evaluation over an exact tiling of the box.

    Status is ``verified`` when every leaf lies in the target (or no target
    was given), ``failed`` when an exact point value violates the target and
    ``inconclusive`` when the depth cap stops refinement first.
    """
    target = strategy.target
    # functions may declare that they ignore some coordinates
    active = tuple(getattr(f, "active_dims", range(box.dim)))
    widths = [s.width for s in box.sides]
    frontier = [(box, (0,) * box.dim)]
    leaves: list[RatInterval] = []
    unresolved: list[tuple[Box, RatInterval | None]] = []
    evaluated = 0
    max_seen = [0] * box.dim
    witness = None
    workers = strategy.workers
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    rounds = 0
    try:
        while frontier:
            encl = _map(f, [b for b, _ in frontier], workers, pool)
            evaluated += len(frontier)
            nxt = []
            for (b, depths), res in zip(frontier, encl):
                if target is None:
                    done = res is not None and rounds >= strategy.uniform_rounds
                else:
                    done = res is not None and res.subset(target)
                if done:
                    leaves.append(res)
                    continue
                if target is not None and res is not None and witness is None:
                    # an exact value outside the target is a genuine failure
                    v = f.evaluate(*b.midpoint())
                    if not target.contains(v):
                        witness = b.midpoint() + (v,)
                cands = [d for d in active if depths[d] < strategy.max_depth and widths[d] > 0]
                if not cands or witness is not None:
                    unresolved.append((b, res))
                    continue
                d = max(cands, key=lambda i: (b.sides[i].width / widths[i], -i))
                nd = depths[:d] + (depths[d] + 1,) + depths[d + 1 :]
                max_seen[d] = max(max_seen[d], nd[d])
                for child in b.bisect(d):
                    nxt.append((child, nd))
            frontier = nxt
            rounds += 1
    finally:
        if pool is not None:
            pool.shutdown()
    if any(res is None for _, res in unresolved) and witness is None:
        raise DenominatorMayVanish(
            f"{name}: denominator enclosure contains 0 on a box at the depth cap"
        )
    pieces = leaves + [res for _, res in unresolved if res is not None]
    enclosure = hull_all(pieces) if pieces else None
    if witness is not None:
        status = "failed"
    elif unresolved:
        status = "inconclusive"
    else:
        status = "verified"
    return RangeEnclosureCert(
        target=name,
        box=box,
        subdivision=strategy.describe(),
        enclosure=enclosure,
        status=status,
        depth=sum(max_seen),
        depth_per_dim=tuple(max_seen),
        boxes_evaluated=evaluated,
        leaves=len(leaves) + len(unresolved),
        witness=witness,
        unresolved=len(unresolved),
    )
