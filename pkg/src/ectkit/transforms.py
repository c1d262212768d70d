"""Euler characteristic and Euler-Radon transforms as exact curves.

For a fixed direction every transform here is a function of the threshold
``t`` (or of the level ``s``) that is piecewise constant, and it can only
change at a cell's maximal height: an open convex cell contributes
``(-1)^dim`` to ``chi({x . v <= t})`` once ``t`` reaches the top of its
closure, and nothing before that.
"""
from __future__ import annotations

import bisect
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .curves import CurveError, PiecewiseLinearCurve, StepCurve
from .euler import IntervalQuery, cell_chi_contribution
from .geometry import (CellConstFunction, EmbeddedComplex, GeometryError,
                       height_summaries, to_rational)


def _sign(dim: int) -> int:
    return -1 if dim % 2 else 1


def _weighted_sweep(summaries, weights) -> StepCurve:
    jumps: dict = {}
    for c, w in zip(summaries, weights):
        if w:
            jumps[c.hi] = jumps.get(c.hi, 0) + w * _sign(c.dim)
    return StepCurve.from_jumps({b: d for b, d in jumps.items() if d}, 0)


def ect_shape(complex: EmbeddedComplex, v) -> StepCurve:
    """``t -> chi({x in K : x . v <= t})``."""
    summaries = height_summaries(complex, v)
    return _weighted_sweep(summaries, [1] * len(summaries))


def ect_constructible(g: CellConstFunction, v) -> StepCurve:
    """``t -> integral of g * 1{x . v <= t} dchi`` for integer-valued ``g``."""
    if not g.is_integer_valued:
        raise GeometryError("not constructible: ECT needs an integer-valued function")
    summaries = height_summaries(g.complex, v)
    # group by value first, then sum n * chi(g^-1(n) within the half-space)
    by_value: dict = {}
    for cid, val in enumerate(g.cell_values):
        by_value.setdefault(val, []).append(cid)
    total = StepCurve.constant(0)
    for n, ids in sorted(by_value.items()):
        if n == 0:
            continue
        level = _weighted_sweep([summaries[i] for i in ids], [1] * len(ids))
        total = total + level.scale(n)
    return total


def lect(g: CellConstFunction, v, s) -> StepCurve:
    """``t -> chi({g = s} within {x . v <= t})``."""
    s = to_rational(s)
    summaries = height_summaries(g.complex, v)
    return _weighted_sweep(summaries, [1 if val == s else 0 for val in g.cell_values])


def select(g: CellConstFunction, v, s) -> StepCurve:
    """``t -> chi({g >= s} within {x . v <= t})``."""
    s = to_rational(s)
    summaries = height_summaries(g.complex, v)
    return _weighted_sweep(summaries, [1 if val >= s else 0 for val in g.cell_values])


def select_in_s(g: CellConstFunction, v, t) -> StepCurve:
    """``s -> SELECT(g)(v, t, s)``, stored left-continuously.

    A cell belongs to ``{g >= s}`` exactly while ``s <= g(cell)``, so the
    curve drops by the cell's contribution just after its value.
    """
    q = IntervalQuery.leq(t)
    summaries = height_summaries(g.complex, v)
    contrib = [cell_chi_contribution(c, q) for c in summaries]
    drops: dict = {}
    for val, w in zip(g.cell_values, contrib):
        if w:
            drops[val] = drops.get(val, 0) - w
    return StepCurve.from_jumps({b: d for b, d in drops.items() if d},
                                base=sum(contrib), convention="left")


class _LevelSums:
    """Weighted counts of cells with value >= s or == s, by bisection."""

    def __init__(self, values, weights):
        pairs = sorted(zip(values, weights))
        self.keys = [k for k, _ in pairs]
        self.suffix = [0] * (len(pairs) + 1)
        for i in range(len(pairs) - 1, -1, -1):
            self.suffix[i] = self.suffix[i + 1] + pairs[i][1]

    def at_least(self, s) -> int:
        return self.suffix[bisect.bisect_left(self.keys, s)]

    def equal(self, s) -> int:
        return self.suffix[bisect.bisect_left(self.keys, s)] - self.suffix[bisect.bisect_right(self.keys, s)]


def _ert_from_contributions(values, contrib) -> Fraction:
    plus = _LevelSums(values, contrib)
    minus = _LevelSums([-x for x in values], contrib)
    levels = sorted({abs(x) for x in values if x != 0})
    total = Fraction(0)
    prev = Fraction(0)
    for a in levels:
        s = (prev + a) / 2
        integrand = (plus.at_least(s) - minus.at_least(s)) \
            + Fraction(minus.equal(s) - plus.equal(s), 2)
        total += (a - prev) * integrand
        prev = a
    return total


def ert_integrand(g: CellConstFunction, v, t, s) -> Fraction:
    """SELECT(g) - SELECT(-g) + (LECT(-g) - LECT(g)) / 2 at ``(v, t, s)``."""
    q = IntervalQuery.leq(t)
    contrib = [cell_chi_contribution(c, q) for c in height_summaries(g.complex, v)]
    s = to_rational(s)
    plus = _LevelSums(g.cell_values, contrib)
    minus = _LevelSums([-x for x in g.cell_values], contrib)
    return (plus.at_least(s) - minus.at_least(s)) + Fraction(minus.equal(s) - plus.equal(s), 2)


def ert_at(g: CellConstFunction, v, t) -> Fraction:
    """ERT(g)(v, t) as the integral over s > 0 of :func:`ert_integrand`.

    The integrand is a step function of ``s`` whose jumps lie in the set of
    absolute values of ``g``, so the integral is a finite sum over those
    intervals, each sampled at its midpoint.
    """
    q = IntervalQuery.leq(t)
    contrib = [cell_chi_contribution(c, q) for c in height_summaries(g.complex, v)]
    return _ert_from_contributions(g.cell_values, contrib)


def ert(g: CellConstFunction, v) -> StepCurve:
    g.check_support(g.support_bound)
    summaries = height_summaries(g.complex, v)
    thresholds = sorted({c.hi for c, val in zip(summaries, g.cell_values) if val != 0})

    def sample(t):
        q = IntervalQuery.leq(t)
        return _ert_from_contributions(g.cell_values, [cell_chi_contribution(c, q) for c in summaries])

    return StepCurve.from_samples(thresholds, sample)


def euler_integral_fc(g: CellConstFunction, v, t, n: int) -> Fraction:
    """The n-th floor/ceiling approximant of the real-valued Euler integral
    of ``g * 1{x . v <= t}``.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    q = IntervalQuery.leq(t)
    summaries = height_summaries(g.complex, v)
    floor_levels: dict = {}
    ceil_levels: dict = {}
    for c, val in zip(summaries, g.cell_values):
        w = cell_chi_contribution(c, q)
        fl, ce = math.floor(n * val), math.ceil(n * val)
        floor_levels[fl] = floor_levels.get(fl, 0) + w
        ceil_levels[ce] = ceil_levels.get(ce, 0) + w
    floor_int = sum(m * chi for m, chi in floor_levels.items())
    ceil_int = sum(m * chi for m, chi in ceil_levels.items())
    return Fraction(floor_int + ceil_int, 2 * n)


def default_window(curves) -> Fraction:
    """One more than the largest absolute breakpoint over ``curves``."""
    if isinstance(curves, StepCurve):
        curves = [curves]
    return max((abs(b) for c in curves for b in c.breakpoints), default=Fraction(0)) + 1


def sect(ect: StepCurve, W=None) -> PiecewiseLinearCurve:
    """Smoothed curve ``t -> int_{-W}^t e - (t + W) / (2W) int_{-W}^W e``."""
    if ect.convention != "right":
        raise CurveError("smoothing expects a right-continuous curve in t")
    W = default_window(ect) if W is None else to_rational(W)
    if W <= 0:
        raise CurveError("window must be positive")
    if any(not -W < b < W for b in ect.breakpoints):
        raise CurveError(f"window too small: breakpoints must lie strictly inside (-{W}, {W})")
    if ect.values[0] != 0:
        raise CurveError("curve does not vanish left of the window")
    knots = [-W, *ect.breakpoints, W]
    running = [Fraction(0)]
    for a, b in zip(knots, knots[1:]):
        running.append(running[-1] + ect((a + b) / 2) * (b - a))
    total = running[-1]
    values = [r - (k + W) / (2 * W) * total for k, r in zip(knots, running)]
    return PiecewiseLinearCurve(tuple(knots), tuple(values))


def invert_sect(s: PiecewiseLinearCurve) -> StepCurve:
    """Recover the step curve from its smoothing.

    Right slopes give the derivative at every point including knots, which
    is the right-continuous representative; subtracting the slope at the
    left end removes the centring term.
    """
    lo, hi = s.domain
    if s(lo) != 0 or s(hi) != 0:
        raise CurveError("smoothed curve must vanish at both ends of its window")
    base = s.slope(0)
    slopes = [s.slope(i) - base for i in range(len(s.knots) - 1)]
    return StepCurve(s.knots[1:-1], tuple(slopes))


def sert(ert_curve: StepCurve, W=None) -> PiecewiseLinearCurve:
    """Smoothed ERT; identical formula to :func:`sect`."""
    return sect(ert_curve, W)


def invert_sert(s: PiecewiseLinearCurve) -> StepCurve:
    return invert_sect(s)


@dataclass
class TransformBundle:
    """One curve per direction, in direction order."""

    kind: str
    directions: list
    curves: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.directions) != len(self.curves):
            raise ValueError("one curve per direction required")


_KINDS = {
    "ect": lambda target, v, p: ect_shape(target, v) if not isinstance(target, CellConstFunction)
    else ect_constructible(target, v),
    "lect": lambda g, v, p: lect(g, v, p["s"]),
    "select": lambda g, v, p: select(g, v, p["s"]),
    "ert": lambda g, v, p: ert(g, v),
}


def _one_direction(job):
    kind, target, v, params = job
    return _KINDS[kind](target, v, params)


def transform_bundle(kind: str, target, directions: Sequence, workers: int = 1,
                     params: dict | None = None, metadata: dict | None = None) -> TransformBundle:
    """Compute a step-curve transform for every direction.

    ``kind`` is one of ``ect``, ``lect``, ``select``, ``ert``. Work is
    sharded by direction; output order follows ``directions`` whatever the
    worker count.
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown transform {kind!r}")
    params = dict(params or {})
    jobs = [(kind, target, tuple(v), params) for v in directions]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            curves = list(pool.map(_one_direction, jobs))
    else:
        curves = [_one_direction(j) for j in jobs]
    meta = {"transform": kind, **{k: str(v) for k, v in params.items()}}
    meta.update(metadata or {})
    return TransformBundle(kind, [tuple(v) for v in directions], curves, meta)


def smooth_bundle(bundle: TransformBundle, W=None) -> TransformBundle:
    """SECT/SERT of every curve in a step-curve bundle, with one shared window."""
    W = default_window(bundle.curves) if W is None else to_rational(W)
    kind = {"ect": "sect", "ert": "sert"}.get(bundle.kind, "s" + bundle.kind)
    meta = dict(bundle.metadata, transform=kind, window=str(W))
    return TransformBundle(kind, list(bundle.directions), [sect(c, W) for c in bundle.curves], meta)


def invert_bundle(bundle: TransformBundle) -> TransformBundle:
    kind = {"sect": "ect", "sert": "ert", "slect": "lect", "sselect": "select"}.get(bundle.kind, bundle.kind)
    meta = {k: v for k, v in bundle.metadata.items() if k != "window"}
    meta["transform"] = kind
    return TransformBundle(kind, list(bundle.directions), [invert_sect(c) for c in bundle.curves], meta)
