"""Shapes and functions on them, with exact rational coordinates.

Two kinds of complex are supported: geometric simplicial complexes and
finite cubical grids built from images. Both expose the same surface to the
rest of the package: ``points`` (vertex coordinates) and ``cells`` (open
cells, each listing the indices of its closure vertices). Cell ids are
positions in ``cells``.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

Point = tuple  # tuple[Fraction, ...]
Direction = tuple  # tuple[Fraction, ...], nonzero, not normalised

Number = Union[int, Fraction, str, float]

CONVENTIONS = ("upper", "lower")


class GeometryError(ValueError):
    pass


class DuplicateVertexWarning(UserWarning):
    pass


def to_rational(x: Number, denom_bound: int | None = None) -> Fraction:
    """Convert ``x`` to a Fraction.

    Strings and floats go through their decimal representation, so ``0.1``
    becomes ``1/10`` rather than the nearest binary double. When
    ``denom_bound`` is given the result is the closest fraction whose
    denominator does not exceed it.
    """
    if isinstance(x, Fraction):
        q = x
    elif isinstance(x, int):
        q = Fraction(x)
    elif isinstance(x, float):
        if not math.isfinite(x):
            raise GeometryError(f"non-finite value {x!r}")
        q = Fraction(repr(x))
    else:
        q = Fraction(str(x).strip())
    if denom_bound is not None and q.denominator > denom_bound:
        q = q.limit_denominator(denom_bound)
    return q


def as_point(coords: Iterable[Number], denom_bound: int | None = None) -> Point:
    p = tuple(to_rational(c, denom_bound) for c in coords)
    if not p:
        raise GeometryError("points need at least one coordinate")
    return p


def as_direction(components: Iterable[Number]) -> Direction:
    v = as_point(components)
    if all(c == 0 for c in v):
        raise GeometryError("direction must be nonzero")
    return v


def dot(x: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(x, v)), Fraction(0))


def rational_unit_vector(u: Sequence[Number]) -> Direction:
    """Inverse stereographic projection of ``u`` in Q^(n-1) onto S^(n-1).

    The image is an exactly rational unit vector; these are dense on the
    sphere, which lets fixtures sit exactly on circles and spheres.
    """
    u = [to_rational(c) for c in u]
    s = sum((c * c for c in u), Fraction(0))
    return tuple([2 * c / (s + 1) for c in u] + [(s - 1) / (s + 1)])


def rational_circle_point(theta: float, denom_bound: int = 10**6) -> Point:
    """A rational point on the unit circle close to angle ``theta``.

    Multiples of pi/2 land exactly on the axes.
    """
    quarter = theta / (math.pi / 2)
    if abs(quarter - round(quarter)) < 1e-12:
        k = int(round(quarter)) % 4
        return ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)),
                (Fraction(-1), Fraction(0)), (Fraction(0), Fraction(-1)))[k]
    # (cos, sin) = ((1 - m^2), 2m) / (1 + m^2) with m = tan(theta / 2)
    m = Fraction(math.tan(theta / 2)).limit_denominator(denom_bound)
    d = 1 + m * m
    return ((1 - m * m) / d, 2 * m / d)


@dataclass(frozen=True)
class Cell:
    """An open cell; ``vertices`` index the complex's ``points``."""

    id: int
    dim: int
    vertices: tuple


@dataclass(frozen=True)
class CellSummary:
    dim: int
    lo: Fraction
    hi: Fraction

    @property
    def constant(self) -> bool:
        return self.lo == self.hi


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """A face-closed geometric simplicial complex.

    ``simplices`` holds sorted vertex-index tuples ordered by (dimension,
    indices); use :func:`build_simplicial_complex` to get face closure.
    """

    vertices: tuple
    simplices: tuple

    def __post_init__(self):
        cells = tuple(Cell(i, len(s) - 1, s) for i, s in enumerate(self.simplices))
        object.__setattr__(self, "_cells", cells)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.simplices)})

    @property
    def points(self) -> tuple:
        return self.vertices

    @property
    def cells(self) -> tuple:
        return self._cells

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def cell_id(self, simplex: Iterable[int]) -> int:
        return self._index[tuple(sorted(simplex))]

    def count_by_dim(self) -> list[int]:
        counts = [0] * (self.dim + 1)
        for s in self.simplices:
            counts[len(s) - 1] += 1
        return counts

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertices == other.vertices and self.simplices == other.simplices

    def __hash__(self):
        return hash((self.vertices, self.simplices))

    def __repr__(self):
        return f"SimplicialComplex(n_vertices={len(self.vertices)}, f={self.count_by_dim()})"


def _face_closure(simplices: Iterable[Iterable[int]]) -> tuple:
    closed = set()
    for s in simplices:
        s = tuple(sorted(set(s)))
        for k in range(1, len(s) + 1):
            closed.update(itertools.combinations(s, k))
    return tuple(sorted(closed, key=lambda s: (len(s), s)))


def build_simplicial_complex(vertices: Sequence[Iterable[Number]],
                             simplices: Iterable[Iterable[int]],
                             denom_bound: int | None = None) -> SimplicialComplex:
    pts = tuple(as_point(p, denom_bound) for p in vertices)
    if pts and len({len(p) for p in pts}) != 1:
        raise GeometryError("all vertices must share one ambient dimension")
    simplices = [tuple(s) for s in simplices]
    if not simplices:
        raise GeometryError("empty simplex set")
    for s in simplices:
        if not s:
            raise GeometryError("empty simplex")
        if len(set(s)) != len(s):
            raise GeometryError(f"simplex {s} repeats a vertex")
        for i in s:
            if not isinstance(i, int) or not 0 <= i < len(pts):
                raise GeometryError(f"invalid vertex index {i!r} in simplex {s}")
    if len(set(pts)) != len(pts):
        warnings.warn("duplicate vertex coordinates", DuplicateVertexWarning, stacklevel=2)
    return SimplicialComplex(pts, _face_closure(simplices))


@dataclass(frozen=True, eq=False)
class CubicalComplex:
    """All faces of the boxes of a regular grid.

    ``extents[a]`` counts boxes along axis ``a``. Cells are encoded per axis
    as ``(i, 0)`` for the grid coordinate ``i`` or ``(i, 1)`` for the open
    interval ``(i, i + 1)``.
    """

    origin: Point
    spacing: tuple
    extents: tuple

    def __post_init__(self):
        if not self.extents or any(e < 1 for e in self.extents):
            raise GeometryError("cubical complex needs at least one box per axis")
        if not (len(self.origin) == len(self.spacing) == len(self.extents)):
            raise GeometryError("origin, spacing and extents disagree on dimension")
        if any(h <= 0 for h in self.spacing):
            raise GeometryError("spacing must be positive")
        shape = tuple(e + 1 for e in self.extents)
        points = tuple(
            tuple(o + h * i for o, h, i in zip(self.origin, self.spacing, idx))
            for idx in itertools.product(*(range(n) for n in shape))
        )
        strides = [1] * len(shape)
        for a in range(len(shape) - 2, -1, -1):
            strides[a] = strides[a + 1] * shape[a + 1]
        per_axis = [
            [(i, 0) for i in range(e + 1)] + [(i, 1) for i in range(e)]
            for e in self.extents
        ]
        codes = sorted(itertools.product(*per_axis), key=lambda c: (sum(b for _, b in c), c))
        cells = []
        for cid, code in enumerate(codes):
            corners = itertools.product(*([i, i + 1] if b else [i] for i, b in code))
            verts = tuple(sorted(sum(s * c for s, c in zip(strides, corner)) for corner in corners))
            cells.append(Cell(cid, sum(b for _, b in code), verts))
        object.__setattr__(self, "_points", points)
        object.__setattr__(self, "_cells", tuple(cells))
        object.__setattr__(self, "_codes", tuple(codes))
        object.__setattr__(self, "_code_index", {c: i for i, c in enumerate(codes)})

    @property
    def points(self) -> tuple:
        return self._points

    @property
    def cells(self) -> tuple:
        return self._cells

    @property
    def codes(self) -> tuple:
        return self._codes

    @property
    def ambient_dim(self) -> int:
        return len(self.extents)

    @property
    def dim(self) -> int:
        return len(self.extents)

    def cell_id(self, code) -> int:
        return self._code_index[tuple(code)]

    def top_cell_id(self, index: Sequence[int]) -> int:
        return self._code_index[tuple((i, 1) for i in index)]

    def incident_boxes(self, cid: int) -> list[tuple]:
        """Pixel indices of the top boxes whose closure contains cell ``cid``."""
        choices = []
        for (i, b), e in zip(self._codes[cid], self.extents):
            choices.append([i] if b else [j for j in (i - 1, i) if 0 <= j < e])
        return list(itertools.product(*choices))

    def __eq__(self, other):
        if not isinstance(other, CubicalComplex):
            return NotImplemented
        return (self.origin, self.spacing, self.extents) == (other.origin, other.spacing, other.extents)

    def __hash__(self):
        return hash((self.origin, self.spacing, self.extents))

    def __repr__(self):
        return f"CubicalComplex(extents={self.extents})"


EmbeddedComplex = Union[SimplicialComplex, CubicalComplex]


@dataclass(frozen=True, eq=False)
class PLFunction:
    """Vertex values, extended affinely over each simplex."""

    complex: SimplicialComplex
    vertex_values: tuple

    def __post_init__(self):
        if len(self.vertex_values) != len(self.complex.vertices):
            raise GeometryError(
                f"PL function has {len(self.vertex_values)} values for "
                f"{len(self.complex.vertices)} vertices")
        if any(v is None for v in self.vertex_values):
            raise GeometryError("missing vertex value")

    @classmethod
    def from_values(cls, complex: SimplicialComplex, values: Sequence[Number]) -> "PLFunction":
        return cls(complex, tuple(to_rational(v) for v in values))

    @classmethod
    def height(cls, complex: SimplicialComplex, v: Direction) -> "PLFunction":
        return cls(complex, tuple(dot(p, v) for p in complex.vertices))


def _support_radius_bound(points: Iterable[Point]) -> Fraction:
    """Smallest integer strictly larger than every norm in ``points``."""
    worst = max((sum((c * c for c in p), Fraction(0)) for p in points), default=Fraction(0))
    return Fraction(math.isqrt(math.floor(worst)) + 1)


@dataclass(frozen=True, eq=False)
class CellConstFunction:
    """A function that is constant on every open cell of ``complex``.

    ``support_bound`` is a radius W with every nonzero cell strictly inside
    the open ball B(0, W).
    """

    complex: EmbeddedComplex
    cell_values: tuple
    support_bound: Fraction = field(default=None)

    def __post_init__(self):
        if len(self.cell_values) != len(self.complex.cells):
            raise GeometryError("one value per cell required")
        tight = _support_radius_bound(self._support_points())
        if self.support_bound is None:
            object.__setattr__(self, "support_bound", tight)
        else:
            self.check_support(self.support_bound)

    def _support_points(self):
        pts = self.complex.points
        for c, val in zip(self.complex.cells, self.cell_values):
            if val != 0:
                for i in c.vertices:
                    yield pts[i]

    def check_support(self, bound: Fraction) -> None:
        bound = to_rational(bound)
        for p in self._support_points():
            if sum((c * c for c in p), Fraction(0)) >= bound * bound:
                raise GeometryError(f"support reaches {p}, outside the open ball of radius {bound}")

    @property
    def values(self) -> list:
        return sorted(set(self.cell_values))

    @property
    def is_integer_valued(self) -> bool:
        return all(Fraction(v).denominator == 1 for v in self.cell_values)

    @property
    def common_denominator(self) -> int:
        return math.lcm(*(Fraction(v).denominator for v in self.cell_values))

    def __neg__(self) -> "CellConstFunction":
        return CellConstFunction(self.complex, tuple(-v for v in self.cell_values), self.support_bound)

    def scale(self, c: Number) -> "CellConstFunction":
        c = to_rational(c)
        return CellConstFunction(self.complex, tuple(c * v for v in self.cell_values), self.support_bound)

    def map(self, fn) -> "CellConstFunction":
        return CellConstFunction(self.complex, tuple(fn(v) for v in self.cell_values))

    @classmethod
    def indicator(cls, complex: EmbeddedComplex, weight: Number = 1) -> "CellConstFunction":
        w = to_rational(weight)
        return cls(complex, tuple(w for _ in complex.cells))


def build_cubical_complex(image, origin: Sequence[Number] | None = None,
                          spacing: Number | Sequence[Number] = 1,
                          convention: str = "upper",
                          denom_bound: int | None = None):
    """Turn a nested-list (or array) grid of pixel values into a cubical
    complex plus the cell-constant function it defines.

    Top-dimensional cells take the pixel values. Lower cells take the max
    (``"upper"``) or min (``"lower"``) over the boxes whose closure contains
    them.
    """
    if convention not in CONVENTIONS:
        raise GeometryError(f"unknown convention {convention!r}")
    shape, flat = _grid_shape(image)
    values = [to_rational(x, denom_bound) for x in flat]
    ndim = len(shape)
    if origin is None:
        origin = (0,) * ndim
    if isinstance(spacing, (list, tuple)):
        spacing = tuple(to_rational(h) for h in spacing)
    else:
        spacing = (to_rational(spacing),) * ndim
    cx = CubicalComplex(as_point(origin), spacing, tuple(shape))
    if len(cx.origin) != ndim:
        raise GeometryError("origin dimension does not match the image")

    strides = [1] * ndim
    for a in range(ndim - 2, -1, -1):
        strides[a] = strides[a + 1] * shape[a + 1]
    pick = max if convention == "upper" else min
    cell_values = []
    for cid in range(len(cx.cells)):
        boxes = cx.incident_boxes(cid)
        cell_values.append(pick(values[sum(s * i for s, i in zip(strides, b))] for b in boxes))
    return cx, CellConstFunction(cx, tuple(cell_values))


def _grid_shape(image):
    if hasattr(image, "shape") and hasattr(image, "ravel"):
        if 0 in image.shape or image.ndim == 0:
            raise GeometryError("empty image")
        return tuple(int(n) for n in image.shape), list(image.ravel().tolist())

    def walk(node, depth):
        if isinstance(node, (list, tuple)):
            if not node:
                raise GeometryError("empty image")
            subs = [walk(child, depth + 1) for child in node]
            if len({s for s, _ in subs}) != 1:
                raise GeometryError("inconsistent grid shape")
            return (len(node),) + subs[0][0], [x for _, flat in subs for x in flat]
        if depth == 0:
            raise GeometryError("image must be a grid")
        return (), [node]

    return walk(image, 0)


def height_summaries(complex: EmbeddedComplex, v: Sequence[Number]) -> tuple:
    """Min/max of x . v over the closure of each open cell."""
    v = as_direction(v)
    if len(v) != complex.ambient_dim:
        raise GeometryError(f"direction has {len(v)} components, complex lives in R^{complex.ambient_dim}")
    heights = [dot(p, v) for p in complex.points]
    return _summaries(complex, heights)


def pl_summaries(complex: SimplicialComplex, f: PLFunction | Sequence[Number]) -> tuple:
    if not isinstance(f, PLFunction):
        f = PLFunction.from_values(complex, f)
    if f.complex is not complex and f.complex != complex:
        raise GeometryError("PL function belongs to a different complex")
    return _summaries(complex, f.vertex_values)


def vertex_values(complex: EmbeddedComplex, f) -> tuple:
    """Per-vertex values for either a direction or a PL function."""
    if isinstance(f, PLFunction):
        return tuple(f.vertex_values)
    v = as_direction(f)
    return tuple(dot(p, v) for p in complex.points)


def summaries_for(complex: EmbeddedComplex, f) -> tuple:
    if isinstance(f, PLFunction):
        return pl_summaries(complex, f)
    return height_summaries(complex, f)


def _summaries(complex, values) -> tuple:
    out = []
    for c in complex.cells:
        vals = [values[i] for i in c.vertices]
        out.append(CellSummary(c.dim, min(vals), max(vals)))
    return tuple(out)


def sample_directions(count: int, n: int, scheme: str = "rational_grid",
                      explicit: Sequence[Sequence[Number]] | None = None) -> list:
    """Deterministic rational directions in R^n.

    ``axes`` cycles e_1..e_n then -e_1..-e_n. ``rational_grid`` returns
    pairwise non-parallel rational unit vectors spread over a half-sphere.
    ``explicit`` validates and returns the given list.
    """
    if n < 1:
        raise GeometryError("ambient dimension must be at least 1")
    if scheme == "explicit":
        if not explicit:
            raise GeometryError("explicit scheme needs a direction list")
        dirs = [as_direction(d) for d in explicit]
        if any(len(d) != n for d in dirs):
            raise GeometryError(f"explicit directions must have {n} components")
        return dirs
    if count < 1:
        raise GeometryError("count must be at least 1")
    if scheme == "axes":
        if count > 2 * n:
            raise GeometryError(f"only {2 * n} axis directions exist in R^{n}")
        axes = []
        for sign in (1, -1):
            for a in range(n):
                axes.append(tuple(Fraction(sign if b == a else 0) for b in range(n)))
        return axes[:count]
    if scheme == "rational_grid":
        return _grid_directions(count, n)
    raise GeometryError(f"unknown direction scheme {scheme!r}")


def _parallel(a: Direction, b: Direction) -> bool:
    return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(i + 1, len(a)))


def _grid_directions(count: int, n: int) -> list:
    if n == 1:
        if count > 1:
            raise GeometryError("R^1 has a single direction up to parallelism")
        return [(Fraction(1),)]
    out: list = []
    k = 0
    while len(out) < count:
        if n == 2:
            theta = math.pi * k / count + math.pi / (7 * count)
            cand = rational_circle_point(theta, denom_bound=1000)
        else:
            # golden-angle spiral on the upper half-sphere, pulled back to Q^(n-1)
            z = 1 - (k + 0.5) / (count + 1)
            r = math.sqrt(max(0.0, 1 - z * z))
            phi = k * math.pi * (3 - math.sqrt(5))
            x = [r * math.cos(phi), r * math.sin(phi)] + [0.0] * (n - 3) + [z]
            # stereographic projection from the north pole, then back
            u = [Fraction(c / (1 - x[-1])).limit_denominator(1000) for c in x[:-1]]
            cand = rational_unit_vector(u)
        k += 1
        if all(c == 0 for c in cand) or any(_parallel(cand, d) for d in out):
            continue
        out.append(cand)
        if k > 100 * count:
            raise GeometryError("could not generate enough non-parallel directions")
    return out
