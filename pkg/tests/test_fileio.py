from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ectkit import fixtures
from ectkit.curves import PiecewiseLinearCurve, StepCurve
from ectkit.fileio import (ParseError, parse_image, parse_mesh, read_curves, render_svg,
                           write_curves)
from ectkit.geometry import sample_directions
from ectkit.transforms import TransformBundle, ert, smooth_bundle, transform_bundle


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_off_triangle(tmp_path):
    p = write(tmp_path, "tri.off", "OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n")
    cx = parse_mesh(p)
    assert cx.count_by_dim() == [3, 3, 1]


def test_off_with_comments_and_counts_on_first_line(tmp_path):
    p = write(tmp_path, "a.off", "# header\nOFF 2 1 0\n0 0\n1 0\n2 0 1\n")
    assert parse_mesh(p).count_by_dim() == [2, 1]


def test_obj_quad_rejected(tmp_path):
    p = write(tmp_path, "q.obj", "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n")
    with pytest.raises(ParseError, match="triangulate first") as exc:
        parse_mesh(p)
    assert exc.value.line == 5


def test_obj_slash_and_negative_indices(tmp_path):
    p = write(tmp_path, "t.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 -1//1\n")
    assert parse_mesh(p).count_by_dim() == [3, 3, 1]


def test_quantisation_on_read(tmp_path):
    p = write(tmp_path, "q.off", "OFF\n2 1 0\n0.333333 0\n1 0\n2 0 1\n")
    cx = parse_mesh(p, denom_bound=10**6)
    assert cx.vertices[0][0] == Fraction(333333, 1000000)


@pytest.mark.parametrize("text,line", [
    ("OFF\nx y z\n", 2),
    ("OFF\n2 1 0\n0 0\n1 0\n2 0 5\n", 5),
    ("OFF\n2 1 0\n0 0\nabc 0\n", 4),
])
def test_off_errors_carry_line_numbers(tmp_path, text, line):
    p = write(tmp_path, "bad.off", text)
    with pytest.raises(ParseError) as exc:
        parse_mesh(p)
    assert exc.value.line == line
    assert f":{line}:" in str(exc.value)


def test_missing_mesh(tmp_path):
    with pytest.raises(ParseError, match="no such file"):
        parse_mesh(tmp_path / "missing.off")


def test_pgm_p2(tmp_path):
    p = write(tmp_path, "a.pgm", "P2\n# comment\n2 1\n3\n1 3\n")
    cx, g = parse_image(p)
    tops = [val for c, val in zip(cx.cells, g.cell_values) if c.dim == 2]
    assert tops == [Fraction(1, 3), 1]


def test_pgm_p5_and_truncation(tmp_path):
    p = tmp_path / "b.pgm"
    p.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 51, 102]))
    cx, g = parse_image(p)
    tops = sorted(val for c, val in zip(cx.cells, g.cell_values) if c.dim == 2)
    assert tops == [0, Fraction(1, 5), Fraction(2, 5), 1]
    p.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255]))
    with pytest.raises(ParseError, match="truncated"):
        parse_image(p)
    q = write(tmp_path, "c.pgm", "P2\n2 2\n3\n1 3 0\n")
    with pytest.raises(ParseError, match="truncated"):
        parse_image(q)


def test_all_zero_image_has_zero_transforms(tmp_path):
    p = write(tmp_path, "z.csv", "0,0,0\n0,0,0\n")
    cx, g = parse_image(p)
    for v in sample_directions(4, 2, "axes"):
        assert ert(g, v).is_zero


def test_csv_rational_entries_and_lower_convention(tmp_path):
    p = write(tmp_path, "r.csv", "1/2, 5/4\n")
    cx, g = parse_image(p, convention="lower")
    shared = cx.cell_id(((0, 1), (1, 0)))
    assert g.cell_values[shared] == Fraction(1, 2)


def _bundles():
    disk = fixtures.disk(16)
    dirs = sample_directions(3, 2, "rational_grid")
    ect = transform_bundle("ect", disk, dirs, metadata={"source": "disk"})
    return [ect, smooth_bundle(ect), TransformBundle("ect", [], [], {})]


@pytest.mark.parametrize("index", range(3))
def test_curve_json_round_trip(tmp_path, index):
    b = _bundles()[index]
    paths = write_curves(b, tmp_path, ("json", "csv"))
    assert all(p.exists() for p in paths)
    assert read_curves(tmp_path / f"{b.kind}.json") == b


def test_disk_bundle_json_has_minus_one(tmp_path):
    b = transform_bundle("ect", fixtures.disk(64), [(1, 0)])
    write_curves(b, tmp_path)
    text = (tmp_path / "ect.json").read_text()
    assert '"-1/1"' in text


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(-50, 50, max_denominator=97), min_size=0, max_size=8, unique=True),
       st.data())
def test_step_curve_serialisation_is_lossless(tmp_path_factory, bps, data):
    bps = sorted(bps)
    vals = data.draw(st.lists(st.fractions(-9, 9, max_denominator=13), min_size=len(bps) + 1,
                              max_size=len(bps) + 1))
    conv = data.draw(st.sampled_from(["right", "left"]))
    b = TransformBundle("ert", [(Fraction(1), Fraction(0))], [StepCurve(tuple(bps), tuple(vals), conv)])
    out = tmp_path_factory.mktemp("rt")
    write_curves(b, out)
    assert read_curves(out / "ert.json") == b


def test_render_svg(tmp_path):
    step = render_svg(StepCurve((-1,), (0, 1)), tmp_path / "s.svg")
    text = step.read_text()
    assert text.count("<line") == 2
    assert 'fill="white"' in text and 'fill="black"' in text
    flat = render_svg(StepCurve.constant(0), tmp_path / "z.svg").read_text()
    assert flat.count("<line") == 1 and "<circle" not in flat
    pl = render_svg(PiecewiseLinearCurve((-2, -1, 2), (0, Fraction(-3, 4), 0)), tmp_path / "p.svg")
    assert pl.read_text().count("<polyline") == 1
