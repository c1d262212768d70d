import random
from dataclasses import dataclass
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from ectkit import fixtures
from ectkit.audits import (audit_betti_right_continuity, audit_chi_axioms,
                           audit_ert_extends_ect, audit_floor_ceiling,
                           audit_middle_continuity, audit_noncompact_counterexample,
                           audit_oracle_equivalence, audit_right_continuity, audit_round_trip,
                           audit_select_lect_identity, audit_vanishing_threshold)
from ectkit.curves import StepCurve
from ectkit.euler import IntervalQuery, chi_preimage
from ectkit.geometry import (CellConstFunction, PLFunction, build_simplicial_complex,
                             height_summaries)
from ectkit.transforms import ect_shape


@dataclass
class LeftContinuousCurve:
    """A curve that takes its left value at each breakpoint."""

    inner: StepCurve

    @property
    def breakpoints(self):
        return self.inner.breakpoints

    def __call__(self, t):
        return self.inner.left_limit(t)


def test_disk_curve_is_right_but_not_left_continuous():
    disk = fixtures.disk(64)
    curve = ect_shape(disk, (1, 0))
    s = height_summaries(disk, (1, 0))
    rep = audit_right_continuity(curve, probes=curve.probes(),
                                 recompute=lambda t: chi_preimage(s, IntervalQuery.leq(t)).value)
    assert rep.passed
    assert rep.notes["not_left_continuous_at"] == [-1]
    assert curve(-1) == 1 and curve.left_limit(-1) == 0


def test_corrupted_curve_fails_with_witness():
    bad = LeftContinuousCurve(StepCurve((-1,), (0, 1)))
    rep = audit_right_continuity(bad)
    assert not rep.passed
    w = rep.failures[0]
    assert w["breakpoint"] == "-1/1" and w["value_at"] == "0/1" and w["value_after"] == "1/1"
    assert "FAIL" in rep.line()


def test_vanishing_threshold_examples():
    disk = fixtures.disk(16)
    rep = audit_vanishing_threshold(disk, (1, 0))
    assert rep.passed and rep.notes["C"] < -1
    assert audit_vanishing_threshold(None, (1, 0)).passed
    pt = build_simplicial_complex([(Fraction(7, 2),)], [(0,)])
    rep = audit_vanishing_threshold(pt, (1,))
    assert rep.passed and rep.notes["C"] < Fraction(7, 2)


def test_middle_continuity_examples():
    disk = fixtures.disk(16)
    h = PLFunction.height(disk, (1, 0))
    rep = audit_middle_continuity(disk, h, Fraction(1, 7))
    assert rep.passed and rep.notes["chi_level"] == 1
    assert audit_middle_continuity(disk, h, -5).notes["chi_level"] == 0
    const = PLFunction.from_values(disk, [2] * len(disk.vertices))
    rep = audit_middle_continuity(disk, const, 2)
    assert rep.passed and rep.notes["chi_level"] == 1


def test_select_lect_identity_examples():
    disk = fixtures.disk(16)
    one = CellConstFunction.indicator(disk)
    assert audit_select_lect_identity(one, (1, 0), 5, 1).passed
    assert audit_select_lect_identity(one, (1, 0), 5, 9).passed
    assert audit_select_lect_identity(one, (1, 0), 0, -9).passed


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_select_lect_identity_random(seed):
    rng = random.Random(seed)
    cx = fixtures.random_complex(rng, 30)
    g = fixtures.random_cell_function(rng, cx)
    v = fixtures.random_direction(rng, cx.ambient_dim)
    t = Fraction(rng.randint(-20, 20), rng.randint(1, 3))
    s = rng.choice(sorted(set(g.cell_values)) + [Fraction(rng.randint(-9, 9), 2)])
    assert audit_select_lect_identity(g, v, t, s).passed


def test_chi_axioms():
    rep = audit_chi_axioms(seed=1, unions=10)
    assert rep.passed
    assert rep.cases >= 7 + 20


def test_noncompact_counterexample():
    for delta in (1, Fraction(1, 2)):
        rep = audit_noncompact_counterexample(delta)
        assert rep.passed
        assert rep.notes["chi"] == [0, 0]
        assert rep.notes["beta0"] == [0, 1]


def test_betti_right_continuity_fixtures():
    assert audit_betti_right_continuity(fixtures.annulus(16), (1, 0), 1).passed
    assert audit_betti_right_continuity(fixtures.disk(16), (1, 0), 0).passed
    assert audit_betti_right_continuity(fixtures.disk(16), (1, 0), 4).passed
    assert audit_betti_right_continuity(fixtures.segment(), (1,), 0).passed


def test_other_audits_pass_on_fixtures():
    ann = fixtures.annulus(16)
    assert audit_oracle_equivalence(ann, (Fraction(3, 5), Fraction(4, 5))).passed
    assert audit_round_trip(ect_shape(ann, (1, 0))).passed
    cx, g = fixtures.integer_image(4)
    assert audit_ert_extends_ect(g, (0, 1)).passed
    cx, g = fixtures.rational_image(4)
    assert audit_floor_ceiling(g, (1, 0), 1).passed


def test_report_serialises_fractions():
    rep = audit_vanishing_threshold(fixtures.segment(), (1,))
    d = rep.to_dict()
    assert d["notes"]["C"] == "-1/1" and d["passed"] is True
