"""Euler characteristics of preimages over an open-cell partition.

Every open cell of a complex is convex and the function being queried is
affine on it, so the image of the cell is either a single value ``lo`` or
the open interval ``(lo, hi)``. That makes the Euler characteristic of the
cell's intersection with ``{f <= t}`` or ``{f < t}`` a closed form; every
other preimage is a difference of those two.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import CellConstFunction, CellSummary, GeometryError, to_rational

KINDS = ("leq", "lt", "eq", "geq", "gt", "band")


@dataclass(frozen=True)
class IntervalQuery:
    kind: str
    a: Fraction
    b: Fraction | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown query kind {self.kind!r}")
        object.__setattr__(self, "a", to_rational(self.a))
        if self.kind == "band":
            if self.b is None:
                raise ValueError("band query needs two endpoints")
            object.__setattr__(self, "b", to_rational(self.b))
            if self.a > self.b:
                raise ValueError("band requires t1 <= t2")

    @classmethod
    def leq(cls, t):
        return cls("leq", t)

    @classmethod
    def lt(cls, t):
        return cls("lt", t)

    @classmethod
    def eq(cls, s):
        return cls("eq", s)

    @classmethod
    def geq(cls, s):
        return cls("geq", s)

    @classmethod
    def gt(cls, s):
        return cls("gt", s)

    @classmethod
    def band(cls, t1, t2):
        return cls("band", t1, t2)


@dataclass(frozen=True)
class ChiReport:
    value: int
    cells_counted: int


def _leq(c: CellSummary, t) -> int:
    sign = -1 if c.dim % 2 else 1
    if c.lo == c.hi:
        return sign if c.lo <= t else 0
    # the open cell never attains lo, so a proper cut is (0,1] x (0,1)^(k-1)
    return sign if t >= c.hi else 0


def _lt(c: CellSummary, t) -> int:
    sign = -1 if c.dim % 2 else 1
    if c.lo == c.hi:
        return sign if c.lo < t else 0
    return sign if t > c.lo else 0


def cell_chi_contribution(summary: CellSummary, q: IntervalQuery) -> int:
    """Euler characteristic of one open cell intersected with the query set."""
    k = q.kind
    if k == "leq":
        return _leq(summary, q.a)
    if k == "lt":
        return _lt(summary, q.a)
    if k == "eq":
        return _leq(summary, q.a) - _lt(summary, q.a)
    total = -1 if summary.dim % 2 else 1
    if k == "geq":
        return total - _lt(summary, q.a)
    if k == "gt":
        return total - _leq(summary, q.a)
    return _leq(summary, q.b) - _lt(summary, q.a)


def chi_preimage(summaries: Sequence[CellSummary], q: IntervalQuery,
                 cells: Iterable[int] | None = None) -> ChiReport:
    """Sum of per-cell contributions, optionally over a subset of cell ids."""
    ids = range(len(summaries)) if cells is None else cells
    value = 0
    n = 0
    for i in ids:
        value += cell_chi_contribution(summaries[i], q)
        n += 1
    return ChiReport(value, n)


def total_chi(summaries: Sequence[CellSummary]) -> int:
    return sum(-1 if c.dim % 2 else 1 for c in summaries)


def euler_integral(g: CellConstFunction) -> int:
    """Integral of an integer-valued cell-constant function against chi."""
    if not g.is_integer_valued:
        raise GeometryError("not constructible: function has non-integer values")
    chi_of_level: dict = {}
    for cell, val in zip(g.complex.cells, g.cell_values):
        chi_of_level[val] = chi_of_level.get(val, 0) + (-1 if cell.dim % 2 else 1)
    return int(sum(n * chi for n, chi in chi_of_level.items()))


def chi_disjoint_union(a: ChiReport | int, b: ChiReport | int) -> int:
    return _value(a) + _value(b)


def chi_product(a: ChiReport | int, b: ChiReport | int) -> int:
    return _value(a) * _value(b)


def _value(r) -> int:
    return r.value if isinstance(r, ChiReport) else int(r)
