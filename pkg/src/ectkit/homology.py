"""Betti numbers over GF(2) for sublevel subcomplexes."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .curves import StepCurve
from .geometry import CubicalComplex, SimplicialComplex, to_rational, vertex_values


@dataclass
class BitMatrix:
    """Column-major GF(2) matrix; each column is an int bitmask over rows."""

    rows: int
    cols: int
    columns: list

    def rank(self) -> int:
        pivots: dict = {}
        r = 0
        for col in self.columns:
            while col:
                top = col.bit_length() - 1
                if top not in pivots:
                    pivots[top] = col
                    r += 1
                    break
                col ^= pivots[top]
        return r


def boundary_matrix(complex: SimplicialComplex, k: int) -> BitMatrix:
    """Boundary map from k-simplices to (k-1)-simplices."""
    rows = [s for s in complex.simplices if len(s) == k]
    cols = [s for s in complex.simplices if len(s) == k + 1]
    index = {s: i for i, s in enumerate(rows)}
    columns = []
    for s in cols:
        mask = 0
        for face in itertools.combinations(s, k):
            mask |= 1 << index[face]
        columns.append(mask)
    return BitMatrix(len(rows), len(cols), columns)


def betti_numbers(complex: SimplicialComplex) -> tuple:
    d = complex.dim
    if d < 0:
        return ()
    counts = complex.count_by_dim()
    ranks = [0] * (d + 2)
    for k in range(1, d + 1):
        ranks[k] = boundary_matrix(complex, k).rank()
    return tuple(counts[k] - ranks[k] - ranks[k + 1] for k in range(d + 1))


def sublevel_subcomplex(complex: SimplicialComplex, f, t) -> SimplicialComplex:
    """Full subcomplex on the vertices with value ``<= t``, reindexed.

    ``f`` is a direction or a :class:`PLFunction`.
    """
    t = to_rational(t)
    vals = vertex_values(complex, f)
    keep = [i for i, val in enumerate(vals) if val <= t]
    new_index = {old: new for new, old in enumerate(keep)}
    simplices = tuple(
        tuple(new_index[i] for i in s) for s in complex.simplices
        if all(vals[i] <= t for i in s)
    )
    simplices = tuple(sorted(simplices, key=lambda s: (len(s), s)))
    return SimplicialComplex(tuple(complex.vertices[i] for i in keep), simplices)


def betti_at(complex: SimplicialComplex, f, t, k: int) -> int:
    b = betti_numbers(sublevel_subcomplex(complex, f, t))
    return b[k] if 0 <= k < len(b) else 0


def betti_curve(complex: SimplicialComplex, f, k: int) -> StepCurve:
    """``t -> beta_k`` of the sublevel subcomplex, right-continuous."""
    if k > complex.dim or k < 0:
        return StepCurve.constant(0)
    heights = sorted(set(vertex_values(complex, f)))
    return StepCurve.from_samples(heights, lambda t: betti_at(complex, f, t, k))


def euler_poincare(betti: tuple) -> int:
    return sum((-1) ** k * b for k, b in enumerate(betti))


def triangulate_cubical(cx: CubicalComplex) -> SimplicialComplex:
    """Split every box into simplices along monotone lattice paths
    (Freudenthal subdivision). Adjacent boxes agree on shared faces."""
    n = cx.ambient_dim
    shape = tuple(e + 1 for e in cx.extents)
    strides = [1] * n
    for a in range(n - 2, -1, -1):
        strides[a] = strides[a + 1] * shape[a + 1]
    tops = []
    for box in itertools.product(*(range(e) for e in cx.extents)):
        for perm in itertools.permutations(range(n)):
            corner = list(box)
            simplex = [sum(s * c for s, c in zip(strides, corner))]
            for axis in perm:
                corner[axis] += 1
                simplex.append(sum(s * c for s, c in zip(strides, corner)))
            tops.append(tuple(sorted(simplex)))
    closed = set()
    for s in tops:
        for m in range(1, len(s) + 1):
            closed.update(itertools.combinations(s, m))
    return SimplicialComplex(cx.points, tuple(sorted(closed, key=lambda s: (len(s), s))))
