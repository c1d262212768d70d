"""Built-in shapes, images and PL functions used by tests and ``verify``.

All coordinates are exact rationals. Circle points come from the rational
parametrisation of the unit circle, so axis-extreme vertices sit exactly at
integer heights.
"""
from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from .clipping import affine_dim
from .geometry import (CellConstFunction, CubicalComplex, PLFunction, SimplicialComplex,
                       build_cubical_complex, build_simplicial_complex,
                       rational_circle_point)
from .homology import triangulate_cubical


def _ring(n: int, radius) -> list:
    radius = Fraction(radius)
    return [tuple(radius * c for c in rational_circle_point(2 * math.pi * i / n, 1000)) for i in range(n)]


def _stitch(inner: list, outer: list) -> list:
    n = len(inner)
    tris = []
    for i in range(n):
        a, a2 = inner[i], inner[(i + 1) % n]
        b, b2 = outer[i], outer[(i + 1) % n]
        tris += [(a, b, b2), (a, b2, a2)]
    return tris


def disk(n_boundary: int = 64, rings: int = 2) -> SimplicialComplex:
    """Triangulated closed unit disk: centre fan plus concentric rings."""
    pts = [(Fraction(0), Fraction(0))]
    ring_ids = []
    for j in range(1, rings + 1):
        ids = list(range(len(pts), len(pts) + n_boundary))
        pts += _ring(n_boundary, Fraction(j, rings))
        ring_ids.append(ids)
    first = ring_ids[0]
    tris = [(0, first[i], first[(i + 1) % n_boundary]) for i in range(n_boundary)]
    for inner, outer in zip(ring_ids, ring_ids[1:]):
        tris += _stitch(inner, outer)
    return build_simplicial_complex(pts, tris)


def annulus(n: int = 32, inner=1, outer=2, rings: int = 3) -> SimplicialComplex:
    """Triangulated closed annulus ``inner <= |x| <= outer``."""
    inner, outer = Fraction(inner), Fraction(outer)
    pts = []
    ring_ids = []
    for j in range(rings):
        r = inner + (outer - inner) * Fraction(j, rings - 1)
        ring_ids.append(list(range(len(pts), len(pts) + n)))
        pts += _ring(n, r)
    tris = []
    for a, b in zip(ring_ids, ring_ids[1:]):
        tris += _stitch(a, b)
    return build_simplicial_complex(pts, tris)


def torus(n_major: int = 8, n_minor: int = 6, R=2, r=1) -> SimplicialComplex:
    """Polyhedral torus surface in R^3."""
    R, r = Fraction(R), Fraction(r)
    major = [rational_circle_point(2 * math.pi * i / n_major, 100) for i in range(n_major)]
    minor = [rational_circle_point(2 * math.pi * j / n_minor + 0.1, 100) for j in range(n_minor)]
    pts = []
    for ct, st in major:
        for cp, sp in minor:
            pts.append(((R + r * cp) * ct, (R + r * cp) * st, r * sp))

    def vid(i, j):
        return (i % n_major) * n_minor + (j % n_minor)

    tris = []
    for i in range(n_major):
        for j in range(n_minor):
            tris.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            tris.append((vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)))
    return build_simplicial_complex(pts, tris)


def ball3(m: int = 2) -> SimplicialComplex:
    """Cube ``[-1, 1]^3`` cut into ``m^3`` boxes, each split into 6 tetrahedra."""
    h = Fraction(2, m)
    return triangulate_cubical(CubicalComplex((Fraction(-1),) * 3, (h,) * 3, (m,) * 3))


def segment(a=0, b=1) -> SimplicialComplex:
    return build_simplicial_complex([(a,), (b,)], [(0, 1)])


def two_pixel(convention: str = "upper"):
    return build_cubical_complex([[1, 3]], convention=convention)


def checkerboard(size: int = 8, convention: str = "upper"):
    img = [[(i + j) % 2 for j in range(size)] for i in range(size)]
    return build_cubical_complex(img, origin=(-size // 2, -size // 2), convention=convention)


def integer_image(size: int = 8, seed: int = 3, convention: str = "upper"):
    rng = random.Random(seed)
    img = [[rng.randint(-2, 3) for _ in range(size)] for _ in range(size)]
    return build_cubical_complex(img, origin=(-size // 2, -size // 2), convention=convention)


def rational_image(size: int = 8, denominator: int = 12, seed: int = 5, convention: str = "upper"):
    """Image with values ``k / denominator`` for small signed ``k``."""
    rng = random.Random(seed)
    img = [[Fraction(rng.randint(-denominator, 2 * denominator), denominator) for _ in range(size)]
           for _ in range(size)]
    return build_cubical_complex(img, origin=(-size // 2, -size // 2), convention=convention)


def two_value_image(size: int = 4, convention: str = "upper"):
    img = [[Fraction(1, 2) if i < size // 2 else Fraction(5, 4) for _ in range(size)] for i in range(size)]
    return build_cubical_complex(img, origin=(-size // 2, -size // 2), convention=convention)


def _pl(complex, fn) -> PLFunction:
    return PLFunction(complex, tuple(Fraction(fn(p)) for p in complex.vertices))


def pl_functions() -> list:
    """Five non-height PL functions, named, on three meshes."""
    d, a, t = disk(16, 2), annulus(16), torus()
    return [
        ("disk:squared_distance", _pl(d, lambda p: (p[0] - Fraction(1, 3)) ** 2 + (p[1] - Fraction(1, 5)) ** 2)),
        ("disk:abs_x", _pl(d, lambda p: abs(p[0]))),
        ("annulus:saddle", _pl(a, lambda p: p[0] ** 2 - p[1] ** 2)),
        ("annulus:radius_sq", _pl(a, lambda p: p[0] ** 2 + p[1] ** 2)),
        ("torus:xz", _pl(t, lambda p: p[0] * p[2] + p[1])),
    ]


def meshes() -> dict:
    return {
        "disk": disk(),
        "annulus": annulus(),
        "torus": torus(),
        "ball3": ball3(),
    }


def images() -> dict:
    return {
        "two_pixel": two_pixel()[1],
        "two_pixel_lower": two_pixel("lower")[1],
        "checkerboard": checkerboard()[1],
        "integer_image": integer_image()[1],
        "rational_image": rational_image()[1],
        "two_value_image": two_value_image()[1],
    }


def random_complex(rng: random.Random, max_simplices: int = 50, ambient: int | None = None) -> SimplicialComplex:
    """A random embedded complex of dimension <= 3 with at most
    ``max_simplices`` simplices (faces included).

    Points are random rationals with small denominators; the simplices are a
    random face-closed subset of their Delaunay triangulation, so they never
    overlap.
    """
    import numpy as np
    from scipy.spatial import Delaunay

    n = ambient or rng.choice([1, 2, 2, 3, 3])
    if n == 1:
        xs = sorted({Fraction(rng.randint(-12, 12), rng.choice([1, 2, 3])) for _ in range(rng.randint(2, 20))})
        pts = [(x,) for x in xs]
        pool = [(i, i + 1) for i in range(len(pts) - 1)] + [(i,) for i in range(len(pts))]
    else:
        while True:
            k = rng.randint(n + 1, n + 9)
            pts = list({tuple(Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])) for _ in range(n))
                        for _ in range(k)})
            pts.sort()
            if len(pts) > n:
                try:
                    tri = Delaunay(np.array([[float(c) for c in p] for p in pts]))
                except Exception:
                    continue
                break
        tops = [tuple(sorted(int(i) for i in s)) for s in tri.simplices]
        tops = [s for s in tops if affine_dim([pts[i] for i in s]) == len(s) - 1]
        if not tops:
            return random_complex(rng, max_simplices, ambient)
        pool = sorted({f for s in tops for m in range(1, len(s) + 1)
                       for f in itertools.combinations(s, m)})
    rng.shuffle(pool)
    chosen: set = set()
    for s in pool:
        closure = {f for m in range(1, len(s) + 1) for f in itertools.combinations(s, m)}
        if len(chosen | closure) > max_simplices:
            continue
        chosen |= closure
        if rng.random() < 0.03:
            break
    used = sorted({i for s in chosen for i in s})
    remap = {old: new for new, old in enumerate(used)}
    return build_simplicial_complex([pts[i] for i in used],
                                    [tuple(remap[i] for i in s) for s in chosen])


def random_direction(rng: random.Random, n: int) -> tuple:
    while True:
        if rng.random() < 0.25:
            v = [0] * n
            v[rng.randrange(n)] = rng.choice([-1, 1])
        else:
            v = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)]
        if any(v):
            return tuple(Fraction(c) for c in v)


def random_cell_function(rng: random.Random, complex, denominators=(1, 2, 3, 4)) -> CellConstFunction:
    q = rng.choice(denominators)
    levels = [Fraction(rng.randint(-3 * q, 3 * q), q) for _ in range(rng.randint(1, 4))]
    return CellConstFunction(complex, tuple(rng.choice(levels) for _ in complex.cells))
