"""Exact step curves and continuous piecewise-linear curves."""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .geometry import to_rational


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class StepCurve:
    """Piecewise-constant function of one variable with finitely many jumps.

    With ``convention="right"`` (the default) ``values[0]`` holds on
    ``(-inf, b_1)``, ``values[i]`` on ``[b_i, b_{i+1})`` and ``values[-1]`` on
    ``[b_m, inf)``, so the curve is right-continuous by construction. With
    ``convention="left"`` the intervals are ``(-inf, b_1]``, ``(b_i, b_{i+1}]``
    and ``(b_m, inf)``.

    Construction merges equal neighbouring values, so two curves describing
    the same function compare equal.
    """

    breakpoints: tuple
    values: tuple
    convention: str = "right"

    def __post_init__(self):
        if self.convention not in ("right", "left"):
            raise CurveError(f"unknown convention {self.convention!r}")
        bps = tuple(to_rational(b) for b in self.breakpoints)
        vals = tuple(to_rational(v) for v in self.values)
        if len(vals) != len(bps) + 1:
            raise CurveError("need exactly one more value than breakpoints")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise CurveError("breakpoints must be strictly increasing")
        keep_b, keep_v = [], [vals[0]]
        for b, v in zip(bps, vals[1:]):
            if v != keep_v[-1]:
                keep_b.append(b)
                keep_v.append(v)
        object.__setattr__(self, "breakpoints", tuple(keep_b))
        object.__setattr__(self, "values", tuple(keep_v))

    @classmethod
    def constant(cls, c=0, convention: str = "right") -> "StepCurve":
        return cls((), (c,), convention)

    @classmethod
    def from_jumps(cls, jumps: Mapping, base=0, convention: str = "right") -> "StepCurve":
        """Build from ``{position: increment}``; ``base`` is the value far left."""
        bps = sorted(jumps)
        vals = [to_rational(base)]
        for b in bps:
            vals.append(vals[-1] + jumps[b])
        return cls(tuple(bps), tuple(vals), convention)

    @classmethod
    def from_samples(cls, breakpoints: Sequence, sample, convention: str = "right") -> "StepCurve":
        """Evaluate ``sample`` once per interval of the partition ``breakpoints``.

        ``sample(x)`` is called at a point strictly left of every breakpoint
        and then at each breakpoint, which carries the value of the interval
        it opens (right convention) or closes (left convention).
        """
        bps = sorted({to_rational(b) for b in breakpoints})
        if not bps:
            return cls((), (sample(Fraction(0)),), convention)
        if convention == "right":
            vals = [sample(bps[0] - 1)] + [sample(b) for b in bps]
        else:
            vals = [sample(b) for b in bps] + [sample(bps[-1] + 1)]
        return cls(tuple(bps), tuple(vals), convention)

    def __call__(self, t) -> Fraction:
        t = to_rational(t)
        if self.convention == "right":
            return self.values[bisect.bisect_right(self.breakpoints, t)]
        return self.values[bisect.bisect_left(self.breakpoints, t)]

    def left_limit(self, t) -> Fraction:
        return self.values[bisect.bisect_left(self.breakpoints, to_rational(t))]

    def right_limit(self, t) -> Fraction:
        return self.values[bisect.bisect_right(self.breakpoints, to_rational(t))]

    def intervals(self):
        """Yield ``(left_end, right_end, value)`` with ``None`` for infinite ends."""
        ends = [None] + list(self.breakpoints) + [None]
        for i, v in enumerate(self.values):
            yield ends[i], ends[i + 1], v

    def probes(self) -> list:
        """Every breakpoint, every midpoint between breakpoints, and one
        point beyond each end."""
        b = self.breakpoints
        if not b:
            return [Fraction(0)]
        pts = [b[0] - 1] + list(b) + [(x + y) / 2 for x, y in zip(b, b[1:])] + [b[-1] + 1]
        return sorted(pts)

    def integral(self, a, b) -> Fraction:
        a, b = to_rational(a), to_rational(b)
        if a > b:
            return -self.integral(b, a)
        total = Fraction(0)
        for lo, hi, v in self.intervals():
            lo = a if lo is None else max(lo, a)
            hi = b if hi is None else min(hi, b)
            if hi > lo:
                total += v * (hi - lo)
        return total

    def _combine(self, other: "StepCurve", op) -> "StepCurve":
        if self.convention != other.convention:
            raise CurveError("cannot combine curves with different conventions")
        bps = sorted(set(self.breakpoints) | set(other.breakpoints))
        return StepCurve.from_samples(bps, lambda t: op(self(t), other(t)), self.convention) \
            if bps else StepCurve.constant(op(self.values[0], other.values[0]), self.convention)

    def __add__(self, other: "StepCurve") -> "StepCurve":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "StepCurve") -> "StepCurve":
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> "StepCurve":
        return StepCurve(self.breakpoints, tuple(-v for v in self.values), self.convention)

    def scale(self, c) -> "StepCurve":
        c = to_rational(c)
        return StepCurve(self.breakpoints, tuple(c * v for v in self.values), self.convention)

    def scale_time(self, c) -> "StepCurve":
        """The curve ``t -> self(t / c)`` for ``c > 0``."""
        c = to_rational(c)
        if c <= 0:
            raise CurveError("time scaling factor must be positive")
        return StepCurve(tuple(c * b for b in self.breakpoints), self.values, self.convention)

    @property
    def is_zero(self) -> bool:
        return self.values == (0,)


@dataclass(frozen=True)
class PiecewiseLinearCurve:
    """Continuous function on ``[knots[0], knots[-1]]``, linear between knots."""

    knots: tuple
    values: tuple

    def __post_init__(self):
        ks = tuple(to_rational(k) for k in self.knots)
        vs = tuple(to_rational(v) for v in self.values)
        if len(ks) < 2 or len(ks) != len(vs):
            raise CurveError("need at least two knots and one value per knot")
        if any(a >= b for a, b in zip(ks, ks[1:])):
            raise CurveError("knots must be strictly increasing")
        object.__setattr__(self, "knots", ks)
        object.__setattr__(self, "values", vs)

    @property
    def domain(self) -> tuple:
        return self.knots[0], self.knots[-1]

    def _segment(self, t) -> int:
        if not self.knots[0] <= t <= self.knots[-1]:
            raise CurveError(f"{t} outside the domain {self.domain}")
        return min(bisect.bisect_right(self.knots, t) - 1, len(self.knots) - 2)

    def slope(self, i: int) -> Fraction:
        k, v = self.knots, self.values
        return (v[i + 1] - v[i]) / (k[i + 1] - k[i])

    def __call__(self, t) -> Fraction:
        t = to_rational(t)
        i = self._segment(t)
        return self.values[i] + self.slope(i) * (t - self.knots[i])

    def right_slope(self, t) -> Fraction:
        t = to_rational(t)
        if t >= self.knots[-1]:
            raise CurveError("no right slope at the right end of the domain")
        return self.slope(self._segment(t))

    def scale(self, c) -> "PiecewiseLinearCurve":
        c = to_rational(c)
        return PiecewiseLinearCurve(self.knots, tuple(c * v for v in self.values))

    def simplified(self) -> "PiecewiseLinearCurve":
        """Drop interior knots where the slope does not change."""
        ks, vs = [self.knots[0]], [self.values[0]]
        for i in range(1, len(self.knots) - 1):
            if self.slope(i - 1) != self.slope(i):
                ks.append(self.knots[i])
                vs.append(self.values[i])
        ks.append(self.knots[-1])
        vs.append(self.values[-1])
        return PiecewiseLinearCurve(tuple(ks), tuple(vs))


def sum_curves(curves: Iterable[StepCurve], convention: str = "right") -> StepCurve:
    total = StepCurve.constant(0, convention)
    for c in curves:
        total = total + c
    return total
