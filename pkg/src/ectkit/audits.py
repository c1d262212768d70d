"""Executable checks of continuity, vanishing and inversion properties.

Each audit returns an :class:`AuditReport`. A failure carries a witness
with the inputs, the expected value and what was computed, serialised with
exact ``p/q`` strings so it can be replayed.

"Sufficiently small" offsets are realised as half the smallest gap between
neighbouring critical values; every quantity involved is piecewise constant
with finitely many jumps, so limits are attained at that offset.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .clipping import chi_clipped_oracle
from .curves import StepCurve
from .euler import (IntervalQuery, chi_disjoint_union, chi_preimage, chi_product,
                    total_chi)
from .geometry import (CellConstFunction, CellSummary, CubicalComplex,
                       build_simplicial_complex, height_summaries, summaries_for,
                       to_rational)
from .homology import (betti_at, betti_curve, betti_numbers, euler_poincare,
                       sublevel_subcomplex)
from .transforms import (ect_constructible, ect_shape, ert, ert_at, euler_integral_fc,
                         invert_sect, invert_sert, lect, sect, select, sert)


def _fmt(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (list, tuple)):
        return [_fmt(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _fmt(v) for k, v in x.items()}
    return x


@dataclass
class AuditReport:
    tag: str
    cases: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    subject: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, **witness) -> bool:
        self.cases += 1
        if not ok:
            self.failures.append(_fmt(witness))
        return ok

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "subject": self.subject,
            "passed": self.passed,
            "cases": self.cases,
            "failures": self.failures,
            "notes": _fmt(self.notes),
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({len(self.failures)} failures)" if self.failures else ""
        subj = f" [{self.subject}]" if self.subject else ""
        return f"{status} {self.tag}{subj}: {self.cases} cases{extra}"


def _gap_offsets(points):
    """Map each point to half the gap to its right neighbour (1 for the last)."""
    pts = sorted(points)
    out = {}
    for i, b in enumerate(pts):
        out[b] = (pts[i + 1] - b) / 2 if i + 1 < len(pts) else Fraction(1)
    return out


def audit_right_continuity(curve, probes=None, recompute=None, subject: str = "",
                           tag: str = "right_continuity") -> AuditReport:
    """At every breakpoint ``b`` the value equals the value at ``b + delta``.

    ``curve`` only needs ``breakpoints`` and to be callable, so a corrupted
    curve can be audited too. ``recompute`` (optional) evaluates the same
    quantity from scratch; it is compared with the curve at ``b``,
    ``b + delta`` and at every probe. Breakpoints where the left limit
    differs are recorded in ``notes["not_left_continuous_at"]``.
    """
    rep = AuditReport(tag, subject=subject)
    bps = list(curve.breakpoints)
    offsets = _gap_offsets(bps)
    left_jumps = []
    prev = None
    for b in bps:
        d = offsets[b]
        at, after = curve(b), curve(b + d)
        rep.check(at == after, breakpoint=b, delta=d, value_at=at, value_after=after)
        left_delta = (b - prev) / 2 if prev is not None else Fraction(1)
        if curve(b - left_delta) != at:
            left_jumps.append(b)
        if recompute is not None:
            for x in (b, b + d):
                fresh = recompute(x)
                rep.check(fresh == curve(x), t=x, expected=fresh, got=curve(x))
        prev = b
    for p in probes or ():
        if recompute is not None:
            fresh = recompute(p)
            rep.check(fresh == curve(p), t=p, expected=fresh, got=curve(p))
    rep.notes["not_left_continuous_at"] = left_jumps
    return rep


def audit_vanishing_threshold(complex, f, subject: str = "") -> AuditReport:
    rep = AuditReport("vanishing_threshold", subject=subject)
    if complex is None or not complex.cells:
        rep.notes["C"] = None
        return rep
    summaries = summaries_for(complex, f)
    C = min(c.lo for c in summaries) - 1
    rep.notes["C"] = C
    for t in (C, C - 1):
        got = chi_preimage(summaries, IntervalQuery.leq(t)).value
        rep.check(got == 0, t=t, expected=0, got=got)
    return rep


def _critical_values(summaries):
    return sorted({c.lo for c in summaries} | {c.hi for c in summaries})


def middle_delta(summaries, t) -> Fraction:
    t = to_rational(t)
    crit = _critical_values(summaries)
    gaps = [abs(c - t) for c in crit if c != t]
    return min(gaps) / 2 if gaps else Fraction(1)


def audit_middle_continuity(complex, f, t, subject: str = "") -> AuditReport:
    """chi of ``f^-1([t - delta, t + delta])`` equals chi of ``f^-1(t)``."""
    rep = AuditReport("middle_continuity", subject=subject)
    t = to_rational(t)
    summaries = summaries_for(complex, f)
    d = middle_delta(summaries, t)
    band = chi_preimage(summaries, IntervalQuery.band(t - d, t + d)).value
    level = chi_preimage(summaries, IntervalQuery.eq(t)).value
    rep.check(band == level, t=t, delta=d, band=band, level=level)
    rep.notes.update(t=t, delta=d, chi_level=level)
    return rep


def audit_select_lect_identity(g: CellConstFunction, v, t, s, subject: str = "") -> AuditReport:
    """SELECT(g)(s - d) + SELECT(-g)(-s - d) == LECT(g)(s) + ECT(X)  at (v, t)."""
    rep = AuditReport("select_lect_identity", subject=subject)
    t, s = to_rational(t), to_rational(s)
    gaps = [abs(x - s) for x in set(g.cell_values) if x != s]
    d = min(gaps) / 2 if gaps else Fraction(1)
    lhs = select(g, v, s - d)(t) + select(-g, v, -s - d)(t)
    rhs = lect(g, v, s)(t) + ect_shape(g.complex, v)(t)
    rep.check(lhs == rhs, v=list(v), t=t, s=s, delta=d, lhs=lhs, rhs=rhs)
    return rep


def _grid_model_chi(half_open_axes: int, open_axes: int) -> int:
    """chi of (0,1]^a x (0,1)^b from the open cells of a 2-per-axis grid on
    the closed cube whose interiors lie in that set."""
    n = half_open_axes + open_axes
    cx = CubicalComplex((Fraction(0),) * n, (Fraction(1, 2),) * n, (2,) * n)
    chi = 0
    for cell, code in zip(cx.cells, cx.codes):
        ok = all(b == 1 or i >= 1 for i, b in code[:half_open_axes]) and \
            all(b == 1 or i == 1 for i, b in code[half_open_axes:])
        if ok:
            chi += -1 if cell.dim % 2 else 1
    return chi


def audit_chi_axioms(seed: int = 0, unions: int = 50) -> AuditReport:
    """Additivity, the vanishing of chi on half-open cylinders, and
    chi(point) = 1."""
    from .fixtures import random_complex, random_direction

    rep = AuditReport("chi_axioms")
    half_open = _grid_model_chi(1, 0)
    for n in range(3):
        got = _grid_model_chi(1, n)
        rep.check(got == 0, model=f"(0,1]x(0,1)^{n}", expected=0, got=got)
        open_cube = _grid_model_chi(0, n) if n else 1
        prod = chi_product(half_open, open_cube)
        rep.check(prod == got, model=f"product rule n={n}", product=prod, direct=got)
    point = build_simplicial_complex([(0,)], [(0,)])
    rep.check(total_chi(height_summaries(point, (1,))) == 1, model="point", expected=1)

    rng = random.Random(seed)
    for i in range(unions):
        a = random_complex(rng, 25, ambient=2)
        b = random_complex(rng, 25, ambient=2)
        shift = max(abs(c) for p in a.vertices for c in p) + max(abs(c) for p in b.vertices for c in p) + 1
        moved = [(p[0] + shift, p[1]) for p in b.vertices]
        off = len(a.vertices)
        union = build_simplicial_complex(list(a.vertices) + moved,
                                         list(a.simplices) + [tuple(j + off for j in s) for s in b.simplices])
        v = random_direction(rng, 2)
        t = Fraction(rng.randint(-20, 20), rng.randint(1, 3))
        q = IntervalQuery.leq(t)
        sa = chi_preimage(height_summaries(a, v), q)
        sb = chi_preimage(height_summaries(build_simplicial_complex(moved, b.simplices), v), q)
        su = chi_preimage(height_summaries(union, v), q).value
        rep.check(su == chi_disjoint_union(sa, sb), case=i, t=t, v=list(v), union=su, a=sa.value, b=sb.value)
        whole = total_chi(height_summaries(union, v))
        rep.check(whole == total_chi(height_summaries(a, v)) + total_chi(height_summaries(b, v)), case=i)
    return rep


def audit_noncompact_counterexample(delta=1) -> AuditReport:
    """The open ray (0, inf) with the height x.

    Below any threshold ``L`` the ray and the half-open model ``(0, L)`` plus
    ``{L}`` have the same sublevel sets. chi stays right-continuous at 0
    (both sides 0), while beta_0 jumps from 0 (empty set) to 1 (``(0, delta]``
    retracts onto the point ``delta``), so no retraction of the sublevel
    sets can exist. The homotopy statement itself is not decided here.
    """
    rep = AuditReport("noncompact_counterexample", subject=f"delta={delta}")
    delta = to_rational(delta)
    L = 2 * max(delta, Fraction(1))
    ray = (CellSummary(1, Fraction(0), L), CellSummary(0, L, L))
    chi0 = chi_preimage(ray, IntervalQuery.leq(0)).value
    chid = chi_preimage(ray, IntervalQuery.leq(delta)).value
    rep.check(chi0 == 0 and chid == 0, chi_S0=chi0, chi_Sdelta=chid, expected=[0, 0])
    retract = build_simplicial_complex([(delta / 2,), (delta,)], [(0, 1)])
    beta_delta = betti_numbers(retract)[0]
    beta_zero = 0
    rep.check(beta_zero != beta_delta, beta0_S0=beta_zero, beta0_Sdelta=beta_delta)
    rep.notes.update(chi=[chi0, chid], beta0=[beta_zero, beta_delta],
                     homotopy="documented, not computed")
    return rep


def audit_betti_right_continuity(complex, f, k: int, subject: str = "",
                                 oracle: bool = True) -> AuditReport:
    """beta_k of the sublevel subcomplex is the same at each breakpoint and
    at the midpoint after it; at every breakpoint the alternating Betti sum
    agrees with the per-cell chi and, for directions, the clipping oracle."""
    rep = AuditReport("betti_right_continuity", subject=f"{subject} k={k}")
    curve = betti_curve(complex, f, k)
    heights = sorted(set(c.hi for c in summaries_for(complex, f)))
    offsets = _gap_offsets(heights)
    summaries = summaries_for(complex, f)
    is_direction = not hasattr(f, "vertex_values")
    for b in heights:
        m = b + offsets[b]
        at, mid = betti_at(complex, f, b, k), betti_at(complex, f, m, k)
        rep.check(at == mid == curve(b), t=b, beta_at=at, beta_mid=mid, curve=curve(b))
        ep = euler_poincare(betti_numbers(sublevel_subcomplex(complex, f, b)))
        chi = chi_preimage(summaries, IntervalQuery.leq(b)).value
        rep.check(ep == chi, t=b, euler_poincare=ep, chi=chi)
        if oracle and is_direction and complex.dim <= 3:
            clipped = chi_clipped_oracle(complex, f, b)
            rep.check(ep == clipped, t=b, euler_poincare=ep, oracle=clipped)
    return rep


def audit_oracle_equivalence(complex, v, subject: str = "") -> AuditReport:
    rep = AuditReport("oracle_equivalence", subject=subject)
    summaries = height_summaries(complex, v)
    curve = ect_shape(complex, v)
    probes = set(curve.probes()) | {c.hi for c in summaries}
    for t in sorted(probes):
        got = chi_preimage(summaries, IntervalQuery.leq(t)).value
        want = chi_clipped_oracle(complex, v, t)
        rep.check(got == want == curve(t), v=list(v), t=t, chi=got, oracle=want, curve=curve(t))
    return rep


def audit_round_trip(curve: StepCurve, W=None, subject: str = "", smooth="sect") -> AuditReport:
    rep = AuditReport(f"{smooth}_round_trip", subject=subject)
    fwd, back = (sect, invert_sect) if smooth == "sect" else (sert, invert_sert)
    smoothed = fwd(curve, W)
    lo, hi = smoothed.domain
    rep.check(smoothed(lo) == 0 and smoothed(hi) == 0, boundary=[smoothed(lo), smoothed(hi)])
    recovered = back(smoothed)
    rep.check(recovered == curve, expected=[curve.breakpoints, curve.values],
              got=[recovered.breakpoints, recovered.values])
    return rep


def audit_ert_extends_ect(g: CellConstFunction, v, subject: str = "") -> AuditReport:
    rep = AuditReport("ert_extends_ect", subject=subject)
    e, r = ect_constructible(g, v), ert(g, v)
    for t in sorted(set(e.probes()) | set(r.probes())):
        rep.check(e(t) == r(t) == ert_at(g, v, t), t=t, ect=e(t), ert=r(t))
    return rep


def audit_floor_ceiling(g: CellConstFunction, v, t, multiples=(1, 2, 4), subject: str = "") -> AuditReport:
    rep = AuditReport("floor_ceiling", subject=subject)
    q = g.common_denominator
    want = ert_at(g, v, t)
    for m in multiples:
        got = euler_integral_fc(g, v, t, m * q)
        rep.check(got == want, v=list(v), t=t, n=m * q, approximant=got, ert=want)
    return rep


def audit_transform_curves(g: CellConstFunction, v, subject: str = "") -> list:
    """Right-continuity of every LECT/SELECT level curve and of the ERT curve,
    each checked against an independent evaluation."""
    reports = []
    summaries = height_summaries(g.complex, v)
    for s in sorted(set(g.cell_values)):
        cells_eq = [i for i, x in enumerate(g.cell_values) if x == s]
        cells_ge = [i for i, x in enumerate(g.cell_values) if x >= s]
        reports.append(audit_right_continuity(
            lect(g, v, s), recompute=lambda t, c=cells_eq: chi_preimage(summaries, IntervalQuery.leq(t), c).value,
            subject=f"{subject} lect s={s}"))
        reports.append(audit_right_continuity(
            select(g, v, s), recompute=lambda t, c=cells_ge: chi_preimage(summaries, IntervalQuery.leq(t), c).value,
            subject=f"{subject} select s={s}"))
    reports.append(audit_right_continuity(ert(g, v), recompute=lambda t: ert_at(g, v, t),
                                          subject=f"{subject} ert"))
    return reports


def probe_points(summaries) -> list:
    """Critical values, midpoints between them, and one value beyond each end."""
    crit = _critical_values(summaries)
    mids = [(a + b) / 2 for a, b in zip(crit, crit[1:])]
    return sorted(set(crit + mids + [crit[0] - 1, crit[-1] + 1]))
