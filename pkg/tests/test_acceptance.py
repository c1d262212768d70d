"""The twelve acceptance criteria, each at its stated tolerance.

All comparisons are exact rational equality. A PASS/FAIL line per criterion
is printed in the terminal summary.
"""
import random
import time
from fractions import Fraction

from ectkit import fixtures
from ectkit.audits import (audit_betti_right_continuity, audit_chi_axioms,
                           audit_middle_continuity, audit_right_continuity,
                           audit_select_lect_identity, probe_points)
from ectkit.cli import main
from ectkit.clipping import chi_clipped_oracle
from ectkit.curves import StepCurve
from ectkit.euler import IntervalQuery, chi_preimage
from ectkit.geometry import CellConstFunction, height_summaries, sample_directions, summaries_for
from ectkit.transforms import (ect_constructible, ect_shape, ert, ert_at, euler_integral_fc,
                               invert_sect, invert_sert, lect, sect, select, sert)

DIRS2 = sample_directions(8, 2, "rational_grid")


def _random_triples(count=200, seed=2024):
    for i in range(count):
        rng = random.Random(f"{seed}:{i}")
        cx = fixtures.random_complex(rng, 50)
        v = fixtures.random_direction(rng, cx.ambient_dim)
        t = Fraction(rng.randint(-30, 30), rng.randint(1, 4))
        yield cx, v, t


def _image_curves():
    """Every LECT/SELECT level curve and ERT curve of the image fixtures,
    with a from-scratch evaluator for each."""
    out = []
    for name, g in fixtures.images().items():
        for v in sample_directions(4, 2, "axes") + sample_directions(2, 2, "rational_grid"):
            s = height_summaries(g.complex, v)
            for level in sorted(set(g.cell_values)):
                eq = [i for i, x in enumerate(g.cell_values) if x == level]
                ge = [i for i, x in enumerate(g.cell_values) if x >= level]
                out.append((lect(g, v, level), lambda t, c=eq, s=s: chi_preimage(s, IntervalQuery.leq(t), c).value))
                out.append((select(g, v, level), lambda t, c=ge, s=s: chi_preimage(s, IntervalQuery.leq(t), c).value))
            out.append((ert(g, v), lambda t, g=g, v=v: ert_at(g, v, t)))
    return out


def test_criterion_01_disk_example(criterion):
    start = time.perf_counter()
    disk = fixtures.disk(64)
    curves = [ect_shape(disk, v) for v in DIRS2]
    elapsed = time.perf_counter() - start
    ok = True
    for v, c in zip(DIRS2, curves):
        low = min(c_.lo for c_ in height_summaries(disk, v))
        ok &= c == StepCurve((low,), (0, 1))
    ok &= ect_shape(disk, (1, 0)).breakpoints == (-1,)
    ok &= elapsed < 1.0
    criterion(1, ok, f"disk n=64, 8 directions, {elapsed:.3f}s")
    assert ok


def test_criterion_02_oracle_equivalence(criterion):
    start = time.perf_counter()
    n = mismatches = 0
    for cx, v, t in _random_triples():
        n += 1
        if chi_preimage(height_summaries(cx, v), IntervalQuery.leq(t)).value != chi_clipped_oracle(cx, v, t):
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = n >= 200 and mismatches == 0 and elapsed < 30
    criterion(2, ok, f"{n} triples, {mismatches} mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_03_right_continuity(criterion):
    failures = checked = 0
    disk = fixtures.disk(64)
    for v in DIRS2:
        s = height_summaries(disk, v)
        rep = audit_right_continuity(ect_shape(disk, v), recompute=lambda t: chi_preimage(s, IntervalQuery.leq(t)).value)
        checked += 1
        failures += not rep.passed
    for cx, v, _ in _random_triples():
        s = height_summaries(cx, v)
        curve = ect_shape(cx, v)
        rep = audit_right_continuity(curve, probes=curve.probes(),
                                     recompute=lambda t: chi_preimage(s, IntervalQuery.leq(t)).value)
        checked += 1
        failures += not rep.passed
    for curve, fresh in _image_curves():
        rep = audit_right_continuity(curve, probes=curve.probes(), recompute=fresh)
        checked += 1
        failures += not rep.passed
    control = audit_right_continuity(ect_shape(disk, (1, 0)))
    detected = control.notes["not_left_continuous_at"] == [-1]
    ok = failures == 0 and detected
    criterion(3, ok, f"{checked} curves, {failures} failing, left jump at -1 detected: {detected}")
    assert ok


def _fixture_step_curves():
    curves = []
    for name, cx in fixtures.meshes().items():
        for v in sample_directions(8, cx.ambient_dim, "rational_grid"):
            curves.append((f"{name} ect", ect_shape(cx, v)))
    for name, g in fixtures.images().items():
        for v in sample_directions(4, 2, "axes") + sample_directions(4, 2, "rational_grid"):
            curves.append((f"{name} ert", ert(g, v)))
            for level in sorted(set(g.cell_values)):
                curves.append((f"{name} select", select(g, v, level)))
                curves.append((f"{name} lect", lect(g, v, level)))
    return curves


def test_criterion_04_vanishing_threshold(criterion):
    curves = _fixture_step_curves()
    bad = []
    for name, c in curves:
        first = c.breakpoints[0] if c.breakpoints else Fraction(0)
        if c.values[0] != 0 or c(first - 1) != 0:
            bad.append(name)
    ok = not bad
    criterion(4, ok, f"{len(curves)} fixture curves, {len(bad)} nonzero left of first breakpoint")
    assert ok


def test_criterion_05_round_trips(criterion):
    curves = _fixture_step_curves()
    n = bad = 0
    for name, c in curves:
        n += 1
        if name.endswith("ert"):
            bad += invert_sert(sert(c)) != c
        else:
            bad += invert_sect(sect(c)) != c
    ok = n >= 100 and bad == 0
    criterion(5, ok, f"{n} curves, {bad} not recovered")
    assert ok


def test_criterion_06_ert_extends_ect(criterion):
    probes = bad = 0
    for name, g in fixtures.images().items():
        if not g.is_integer_valued:
            continue
        for v in sample_directions(4, 2, "axes") + sample_directions(4, 2, "rational_grid"):
            e, r = ect_constructible(g, v), ert(g, v)
            for t in sorted(set(e.probes()) | set(r.probes())):
                probes += 1
                bad += not (e(t) == r(t) == ert_at(g, v, t))
    ok = probes > 0 and bad == 0
    criterion(6, ok, f"{probes} probes on integer images, {bad} mismatches")
    assert ok


def test_criterion_07_floor_ceiling(criterion):
    cases = bad = 0
    targets = [fixtures.rational_image()[1], fixtures.two_value_image()[1],
               CellConstFunction.indicator(fixtures.disk(16), Fraction(7, 12))]
    for g in targets:
        q = g.common_denominator
        assert q <= 12
        for v in sample_directions(2, 2, "axes") + sample_directions(2, 2, "rational_grid"):
            curve = ert(g, v)
            for t in curve.probes():
                cases += 1
                want = curve(t)
                bad += any(euler_integral_fc(g, v, t, m * q) != want for m in (1, 2, 4))
    ok = cases >= 20 and bad == 0
    criterion(7, ok, f"{cases} (v, t) probes, n in {{q, 2q, 4q}}, {bad} mismatches")
    assert ok


def test_criterion_08_middle_continuity(criterion):
    cases = bad = 0
    funcs = fixtures.pl_functions()
    meshes = {id(f.complex) for _, f in funcs}
    for name, f in funcs:
        for t in probe_points(summaries_for(f.complex, f)):
            cases += 1
            bad += not audit_middle_continuity(f.complex, f, t).passed
    ok = len(funcs) == 5 and len(meshes) == 3 and bad == 0
    criterion(8, ok, f"{len(funcs)} PL functions on {len(meshes)} meshes, {cases} values, {bad} failing")
    assert ok


def test_criterion_09_select_lect_identity(criterion):
    cases = bad = 0
    for i in range(120):
        rng = random.Random(f"identity:{i}")
        cx = fixtures.random_complex(rng, 40)
        g = fixtures.random_cell_function(rng, cx)
        v = fixtures.random_direction(rng, cx.ambient_dim)
        t = Fraction(rng.randint(-30, 30), rng.randint(1, 3))
        s = rng.choice(sorted(set(g.cell_values)) + [Fraction(rng.randint(-9, 9), 2)])
        cases += 1
        bad += not audit_select_lect_identity(g, v, t, s).passed
    ok = cases >= 100 and bad == 0
    criterion(9, ok, f"{cases} random (g, v, t, s), {bad} failing")
    assert ok


def test_criterion_10_betti_right_continuity(criterion):
    start = time.perf_counter()
    reports = []
    for name, cx in (("disk", fixtures.disk(16)), ("annulus", fixtures.annulus(16)), ("ball3", fixtures.ball3())):
        for v in sample_directions(2, cx.ambient_dim, "rational_grid"):
            for k in range(3):
                reports.append(audit_betti_right_continuity(cx, v, k, subject=name, oracle=True))
    elapsed = time.perf_counter() - start
    failing = [r for r in reports if not r.passed]
    ok = not failing and elapsed < 60
    criterion(10, ok, f"{len(reports)} (mesh, v, k) audits, {len(failing)} failing, {elapsed:.1f}s")
    assert ok


def test_criterion_11_chi_axioms(criterion):
    rep = audit_chi_axioms(seed=0, unions=50)
    criterion(11, rep.passed, f"{rep.cases} checks")
    assert rep.passed


def test_criterion_12_determinism(criterion, tmp_path):
    a, b = tmp_path / "w1", tmp_path / "w8"
    code_a = main(["verify", "--fixtures", "builtin", "--workers", "1", "--out", str(a)])
    code_b = main(["verify", "--fixtures", "builtin", "--workers", "8", "--out", str(b)])
    same = all((a / f).read_bytes() == (b / f).read_bytes()
               for f in ("verify_report.json", "verify_report.txt"))
    ok = same and code_a == code_b == 0
    criterion(12, ok, f"exit codes {code_a}/{code_b}, reports identical: {same}")
    assert ok
