from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ectkit.curves import CurveError, PiecewiseLinearCurve, StepCurve, sum_curves


def test_right_convention_evaluation():
    c = StepCurve((0, 2), (0, 1, 3))
    assert [c(-1), c(0), c(1), c(2), c(5)] == [0, 1, 1, 3, 3]
    assert c.left_limit(0) == 0 and c.right_limit(0) == 1


def test_left_convention_evaluation():
    c = StepCurve((1,), (4, 0), convention="left")
    assert [c(0), c(1), c(Fraction(3, 2))] == [4, 4, 0]


def test_canonical_form_merges_equal_values():
    assert StepCurve((0, 1, 2), (0, 1, 1, 0)) == StepCurve((0, 2), (0, 1, 0))
    assert StepCurve((0,), (2, 2)) == StepCurve.constant(2)


def test_invalid_curves():
    with pytest.raises(CurveError):
        StepCurve((1, 0), (0, 1, 2))
    with pytest.raises(CurveError):
        StepCurve((0,), (1,))
    with pytest.raises(CurveError):
        PiecewiseLinearCurve((0,), (0,))


def test_integral_and_arithmetic():
    c = StepCurve((-1,), (0, 1))
    assert c.integral(-2, 2) == 3
    assert (c + c).values == (0, 2)
    assert (c - c).is_zero
    assert c.scale(Fraction(1, 2))(0) == Fraction(1, 2)
    assert c.scale_time(2).breakpoints == (-2,)


def test_from_samples_uses_interval_representatives():
    c = StepCurve.from_samples([0, 1], lambda t: 1 if 0 <= t < 1 else 0)
    assert c == StepCurve((0, 1), (0, 1, 0))


def test_piecewise_linear_curve():
    p = PiecewiseLinearCurve((-2, -1, 2), (0, Fraction(-3, 4), 0))
    assert p(0) == Fraction(-1, 2)
    assert p.right_slope(-1) == Fraction(1, 4)
    assert p.simplified() == p
    with pytest.raises(CurveError):
        p(3)


steps = st.lists(st.fractions(-10, 10, max_denominator=5), min_size=0, max_size=6, unique=True).flatmap(
    lambda bps: st.tuples(st.just(tuple(sorted(bps))),
                          st.lists(st.integers(-4, 4), min_size=len(bps) + 1, max_size=len(bps) + 1)))


@settings(max_examples=100, deadline=None)
@given(steps, steps)
def test_sum_is_pointwise(a, b):
    ca, cb = StepCurve(*a), StepCurve(*b)
    total = sum_curves([ca, cb])
    for t in set(ca.probes()) | set(cb.probes()):
        assert total(t) == ca(t) + cb(t)


@settings(max_examples=100, deadline=None)
@given(steps)
def test_right_continuity_is_structural(a):
    c = StepCurve(*a)
    for i, b in enumerate(c.breakpoints):
        nxt = c.breakpoints[i + 1] if i + 1 < len(c.breakpoints) else b + 2
        assert c(b) == c((b + nxt) / 2) == c.right_limit(b)
