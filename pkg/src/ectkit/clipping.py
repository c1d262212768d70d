"""Independent oracle for chi of a closed half-space sublevel set.

Each closed simplex is clipped by ``{x . v <= t}``, the resulting convex
polytope is triangulated by pulling its lexicographically smallest vertex,
and the pieces are merged by exact coordinates. Pulling with a global vertex
order restricts to the pulling triangulation on every face, so pieces glue
into one simplicial complex whose alternating simplex count is the answer.

Shares nothing with the per-cell rule in :mod:`ectkit.euler` besides
Fraction arithmetic.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .geometry import GeometryError, SimplicialComplex, as_direction, dot, to_rational

MAX_DIM = 3


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _row_reduce(rows):
    """Return (rank, pivot column list) of a list of Fraction rows."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return r, pivots


def affine_dim(points) -> int:
    pts = list(points)
    if len(pts) <= 1:
        return len(pts) - 1
    rank, _ = _row_reduce([_sub(p, pts[0]) for p in pts[1:]])
    return rank


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(n) if m[0][j] != 0)


def _normal(diffs, d):
    """Generalised cross product of d-1 vectors in Q^d."""
    if d == 1:
        return (Fraction(1),)
    return tuple((-1) ** i * _det([row[:i] + row[i + 1:] for row in diffs]) for i in range(d))


def facets(points: frozenset) -> list:
    """Vertex sets of the facets of conv(points); all points must be vertices."""
    pts = sorted(points)
    d = affine_dim(pts)
    if d <= 0:
        return []
    # coordinate projection that is injective on the affine hull
    _, pivots = _row_reduce([_sub(p, pts[0]) for p in pts[1:]])
    proj = {p: tuple(p[c] for c in pivots) for p in pts}
    found = set()
    for subset in itertools.combinations(pts, d):
        base = proj[subset[0]]
        diffs = [list(_sub(proj[q], base)) for q in subset[1:]]
        nrm = _normal(diffs, d)
        if all(c == 0 for c in nrm):
            continue
        side = [dot(_sub(proj[q], base), nrm) for q in pts]
        if all(s >= 0 for s in side) or all(s <= 0 for s in side):
            found.add(frozenset(q for q, s in zip(pts, side) if s == 0))
    return sorted(found, key=lambda f: sorted(f))


@lru_cache(maxsize=None)
def pulling_triangulation(points: frozenset) -> tuple:
    """Maximal simplices (as point frozensets) of the pulling triangulation."""
    if affine_dim(points) == 0:
        return (points,)
    apex = min(points)
    out = []
    for f in facets(points):
        if apex in f:
            continue
        for s in pulling_triangulation(f):
            out.append(s | {apex})
    return tuple(out)


def clip_simplex(coords, heights, t) -> frozenset:
    """Vertices of conv(coords) intersected with {height <= t}."""
    keep = set()
    for p, h in zip(coords, heights):
        if h <= t:
            keep.add(p)
    for (p, hp), (q, hq) in itertools.combinations(zip(coords, heights), 2):
        if hp > hq:
            p, hp, q, hq = q, hq, p, hp
        if hp < t < hq:
            lam = (t - hp) / (hq - hp)
            keep.add(tuple(a + lam * (b - a) for a, b in zip(p, q)))
    return frozenset(keep)


def clipped_simplices(complex: SimplicialComplex, v, t) -> set:
    """All simplices (point frozensets) of the merged clipped triangulation."""
    if complex.dim > MAX_DIM:
        raise GeometryError(f"oracle restricted to <= {MAX_DIM} dimensions")
    v = as_direction(v)
    t = to_rational(t)
    heights = [dot(p, v) for p in complex.vertices]
    merged = set()
    for simplex in complex.simplices:
        coords = [complex.vertices[i] for i in simplex]
        poly = clip_simplex(coords, [heights[i] for i in simplex], t)
        if not poly:
            continue
        for top in pulling_triangulation(poly):
            top = sorted(top)
            for k in range(1, len(top) + 1):
                merged.update(frozenset(c) for c in itertools.combinations(top, k))
    return merged


def chi_clipped_oracle(complex: SimplicialComplex, v, t) -> int:
    return sum(-1 if len(s) % 2 == 0 else 1 for s in clipped_simplices(complex, v, t))
