"""Mesh and image readers, curve serialisation and SVG plots.

Quantisation to rationals happens here and nowhere else: every coordinate
or pixel value read from a file passes through :func:`to_rational` with the
configured denominator bound.
"""
from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from xml.sax.saxutils import escape

from .curves import PiecewiseLinearCurve, StepCurve
from .geometry import (GeometryError, build_cubical_complex, build_simplicial_complex,
                       to_rational)
from .transforms import TransformBundle


class ParseError(GeometryError):
    def __init__(self, path, line: int | None, message: str):
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.line = line


def _number(tok: str, path, line: int, denom_bound):
    try:
        return to_rational(tok, denom_bound)
    except (ValueError, ZeroDivisionError):
        raise ParseError(path, line, f"not a number: {tok!r}") from None


def _content_lines(path):
    """(line number, tokens) for every non-blank line, comments stripped."""
    with open(path, encoding="ascii") as fh:
        for no, raw in enumerate(fh, 1):
            toks = raw.split("#", 1)[0].split()
            if toks:
                yield no, toks


def _check_face(face, nv, path, line):
    for i in face:
        if not 0 <= i < nv:
            raise ParseError(path, line, f"vertex index {i} out of range (0..{nv - 1})")


def _parse_off(path, denom_bound):
    lines = _content_lines(path)
    try:
        no, toks = next(lines)
    except StopIteration:
        raise ParseError(path, None, "empty file") from None
    if toks[0].upper() == "OFF":
        toks = toks[1:]
        if not toks:
            try:
                no, toks = next(lines)
            except StopIteration:
                raise ParseError(path, no, "missing counts line") from None
    try:
        nv, nf = int(toks[0]), int(toks[1])
    except (IndexError, ValueError):
        raise ParseError(path, no, "malformed header: expected 'nv nf ne'") from None
    verts, faces = [], []
    for no, toks in lines:
        if len(verts) < nv:
            verts.append(tuple(_number(t, path, no, denom_bound) for t in toks))
            continue
        try:
            k = int(toks[0])
            face = [int(t) for t in toks[1:k + 1]]
        except ValueError:
            raise ParseError(path, no, "malformed face record") from None
        if len(face) != k:
            raise ParseError(path, no, f"face announces {k} vertices, found {len(face)}")
        if k > 3:
            raise ParseError(path, no, f"face with {k} vertices: triangulate first")
        _check_face(face, nv, path, no)
        faces.append((tuple(face), no))
    if len(verts) < nv or len(faces) < nf:
        raise ParseError(path, None, f"truncated: expected {nv} vertices and {nf} faces")
    return verts, faces


def _obj_index(tok: str, nv: int, path, line) -> int:
    try:
        i = int(tok.split("/")[0])
    except ValueError:
        raise ParseError(path, line, f"bad index {tok!r}") from None
    if i < 0:
        return nv + i
    return i - 1


def _parse_obj(path, denom_bound):
    verts, faces = [], []
    for no, toks in _content_lines(path):
        tag = toks[0]
        if tag == "v":
            verts.append(tuple(_number(t, path, no, denom_bound) for t in toks[1:4]))
        elif tag in ("f", "l", "p"):
            face = [_obj_index(t, len(verts), path, no) for t in toks[1:]]
            if tag == "f" and len(face) != 3:
                raise ParseError(path, no, f"face with {len(face)} vertices: triangulate first")
            faces.append((tuple(face), no))
    return verts, faces


def parse_mesh(path, format: str | None = None, denom_bound: int | None = None):
    """Read an ASCII OFF file or the ``v``/``f``/``l`` subset of OBJ."""
    path = Path(path)
    format = (format or path.suffix.lstrip(".")).lower()
    if format not in ("off", "obj"):
        raise ParseError(path, None, f"unknown mesh format {format!r}")
    if not path.is_file():
        raise ParseError(path, None, "no such file")
    verts, faces = (_parse_off if format == "off" else _parse_obj)(path, denom_bound)
    if not verts:
        raise ParseError(path, None, "no vertices")
    dims = {len(v) for v in verts}
    if len(dims) != 1:
        raise ParseError(path, None, "vertices have different dimensions")
    for face, no in faces:
        _check_face(face, len(verts), path, no)
    simplices = [f for f, _ in faces] or [(i,) for i in range(len(verts))]
    return build_simplicial_complex(verts, simplices)


def _pgm_tokens(data: bytes, count: int):
    """Whitespace tokens of a PGM header, skipping comments; returns the
    tokens and the offset just past the single whitespace after the last."""
    toks, i = [], 0
    while len(toks) < count:
        while i < len(data) and data[i:i + 1].isspace():
            i += 1
        if i < len(data) and data[i:i + 1] == b"#":
            while i < len(data) and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < len(data) and not data[i:i + 1].isspace():
            i += 1
        if start == i:
            break
        toks.append(data[start:i].decode("ascii"))
    return toks, i + 1


def _read_pgm(path):
    data = Path(path).read_bytes()
    toks, offset = _pgm_tokens(data, 4)
    if len(toks) < 4 or toks[0] not in ("P2", "P5"):
        raise ParseError(path, 1, "malformed PGM header")
    try:
        width, height, maxval = (int(t) for t in toks[1:4])
    except ValueError:
        raise ParseError(path, 1, "malformed PGM header") from None
    if width <= 0 or height <= 0 or not 0 < maxval < 65536:
        raise ParseError(path, 1, "PGM dimensions or maxval out of range")
    n = width * height
    if toks[0] == "P2":
        pixels = []
        for raw in data[offset - 1:].split(b"\n"):
            pixels += raw.split(b"#", 1)[0].split()
        if len(pixels) < n:
            raise ParseError(path, None, f"truncated payload: {len(pixels)} of {n} pixels")
        try:
            pixels = [int(p) for p in pixels[:n]]
        except ValueError:
            raise ParseError(path, None, "non-integer pixel") from None
    else:
        size = 1 if maxval < 256 else 2
        raw = data[offset:offset + n * size]
        if len(raw) < n * size:
            raise ParseError(path, None, f"truncated payload: {len(raw)} of {n * size} bytes")
        pixels = [int.from_bytes(raw[k:k + size], "big") for k in range(0, n * size, size)]
    if any(p > maxval for p in pixels):
        raise ParseError(path, None, f"pixel exceeds maxval {maxval}")
    rows = [[Fraction(pixels[r * width + c], maxval) for c in range(width)] for r in range(height)]
    return rows


def _read_csv(path, denom_bound):
    rows = []
    with open(path, newline="", encoding="ascii") as fh:
        for no, rec in enumerate(csv.reader(fh), 1):
            rec = [x for x in (c.strip() for c in rec) if x != ""]
            if rec:
                rows.append([_number(x, path, no, denom_bound) for x in rec])
    if not rows:
        raise ParseError(path, None, "empty image")
    if len({len(r) for r in rows}) != 1:
        raise ParseError(path, None, "rows have different lengths")
    return rows


def parse_image(path, format: str | None = None, convention: str = "upper",
                denom_bound: int | None = None, origin=None, spacing=1):
    """Read a PGM (P2 or P5) or CSV grid into ``(CubicalComplex, g)``.

    PGM pixels become ``value / maxval``; CSV entries are read as numbers.
    Rows form the first coordinate axis.
    """
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "pgm"
    if not path.is_file():
        raise ParseError(path, None, "no such file")
    if format in ("pgm", "pgm_p2", "pgm_p5"):
        rows = _read_pgm(path)
        if denom_bound is not None:
            rows = [[to_rational(x, denom_bound) for x in r] for r in rows]
    elif format == "csv":
        rows = _read_csv(path, denom_bound)
    else:
        raise ParseError(path, None, f"unknown image format {format!r}")
    return build_cubical_complex(rows, origin=origin, spacing=spacing, convention=convention)


def fmt_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def curve_to_dict(curve, window=None) -> dict:
    if isinstance(curve, PiecewiseLinearCurve):
        return {
            "kind": "pl",
            "convention": "right",
            "breakpoints": [fmt_rational(k) for k in curve.knots],
            "values": [fmt_rational(v) for v in curve.values],
            "window": fmt_rational(curve.knots[-1]),
        }
    return {
        "kind": "step",
        "convention": curve.convention,
        "breakpoints": [fmt_rational(b) for b in curve.breakpoints],
        "values": [fmt_rational(v) for v in curve.values],
        "window": None if window is None else fmt_rational(window),
    }


def curve_from_dict(d: dict):
    bps = tuple(Fraction(b) for b in d["breakpoints"])
    vals = tuple(Fraction(v) for v in d["values"])
    if d["kind"] == "pl":
        return PiecewiseLinearCurve(bps, vals)
    if d["kind"] != "step":
        raise ValueError(f"unknown curve kind {d['kind']!r}")
    return StepCurve(bps, vals, d.get("convention", "right"))


def bundle_to_dict(bundle: TransformBundle) -> dict:
    window = bundle.metadata.get("window")
    return {
        "transform": bundle.kind,
        "metadata": dict(bundle.metadata),
        "directions": [[fmt_rational(c) for c in v] for v in bundle.directions],
        "curves": [curve_to_dict(c, window) for c in bundle.curves],
    }


def bundle_from_dict(d: dict) -> TransformBundle:
    return TransformBundle(
        d["transform"],
        [tuple(Fraction(c) for c in v) for v in d["directions"]],
        [curve_from_dict(c) for c in d["curves"]],
        dict(d.get("metadata", {})),
    )


def write_curves(bundle: TransformBundle, out_dir, formats=("json",), stem: str | None = None) -> list:
    """Write ``<stem>.json`` and/or ``<stem>.csv``; returns the paths written."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {out_dir}: {exc}") from exc
    stem = stem or bundle.kind
    written = []
    if "json" in formats:
        p = out_dir / f"{stem}.json"
        p.write_text(json.dumps(bundle_to_dict(bundle), sort_keys=True, indent=2) + "\n")
        written.append(p)
    if "csv" in formats:
        p = out_dir / f"{stem}.csv"
        with open(p, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["direction_index", "direction", "curve_kind", "breakpoint", "value"])
            for i, (v, c) in enumerate(zip(bundle.directions, bundle.curves)):
                d = curve_to_dict(c)
                vs = " ".join(fmt_rational(x) for x in v)
                if d["kind"] == "step":
                    # the value left of every breakpoint has no breakpoint of its own
                    w.writerow([i, vs, "step", "-inf", d["values"][0]])
                    for b, val in zip(d["breakpoints"], d["values"][1:]):
                        w.writerow([i, vs, "step", b, val])
                else:
                    for b, val in zip(d["breakpoints"], d["values"]):
                        w.writerow([i, vs, "pl", b, val])
        written.append(p)
    return written


def read_curves(path) -> TransformBundle:
    with open(path) as fh:
        return bundle_from_dict(json.load(fh))


def _svg_frame(xs, ys, width, height, pad):
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1

    def px(x):
        return pad + float((Fraction(x) - x0) / (x1 - x0)) * (width - 2 * pad)

    def py(y):
        return height - pad - float((Fraction(y) - y0) / (y1 - y0)) * (height - 2 * pad)

    return px, py


def render_svg(curve, path, width: int = 480, height: int = 240, title: str = "") -> Path:
    """Static plot. Step curves get a closed dot at the value a breakpoint
    takes and an open dot at the limit from the other side."""
    pad = 24
    parts = []
    if isinstance(curve, PiecewiseLinearCurve):
        px, py = _svg_frame(curve.knots, curve.values, width, height, pad)
        pts = " ".join(f"{px(k):.3f},{py(v):.3f}" for k, v in zip(curve.knots, curve.values))
        parts.append(f'<polyline fill="none" stroke="black" points="{pts}"/>')
    else:
        bps = list(curve.breakpoints)
        if bps:
            span = max(bps[-1] - bps[0], Fraction(1))
            lo, hi = bps[0] - span / 4, bps[-1] + span / 4
        else:
            lo, hi = Fraction(-1), Fraction(1)
        px, py = _svg_frame([lo, hi], list(curve.values), width, height, pad)
        ends = [lo] + bps + [hi]
        for (a, b), v in zip(zip(ends, ends[1:]), curve.values):
            parts.append(f'<line x1="{px(a):.3f}" y1="{py(v):.3f}" x2="{px(b):.3f}" y2="{py(v):.3f}" '
                         f'stroke="black"/>')
        for b in bps:
            at, other = curve(b), (curve.left_limit(b) if curve.convention == "right" else curve.right_limit(b))
            parts.append(f'<circle cx="{px(b):.3f}" cy="{py(other):.3f}" r="3" fill="white" stroke="black"/>')
            parts.append(f'<circle cx="{px(b):.3f}" cy="{py(at):.3f}" r="3" fill="black"/>')
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">')
    if title:
        head += f"<title>{escape(title)}</title>"
    path = Path(path)
    path.write_text("\n".join([head, *parts, "</svg>"]) + "\n")
    return path
