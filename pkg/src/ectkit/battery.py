"""The audit battery behind ``ectkit verify``.

Jobs are plain tuples of names and exact-string arguments so they can be
shipped to worker processes; every job rebuilds its fixtures and returns
report dicts. Reports are merged in job order, so the output does not depend
on the worker count or on scheduling.
"""
from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import fixtures
from .audits import (AuditReport, audit_betti_right_continuity, audit_chi_axioms,
                     audit_floor_ceiling, audit_middle_continuity,
                     audit_noncompact_counterexample, audit_oracle_equivalence,
                     audit_right_continuity, audit_round_trip,
                     audit_select_lect_identity, audit_transform_curves,
                     audit_vanishing_threshold, audit_ert_extends_ect, probe_points)
from .clipping import chi_clipped_oracle
from .euler import IntervalQuery, chi_preimage
from .geometry import height_summaries, sample_directions, summaries_for
from .transforms import ect_constructible, ect_shape, ert

MESH_DIRECTIONS = 8
RANDOM_ORACLE_CASES = 200
IDENTITY_CASES = 100


def _ect_reports(complex, v, subject: str) -> list:
    """Right continuity (recomputed from scratch), vanishing and round trip."""
    summaries = height_summaries(complex, v)
    curve = ect_shape(complex, v)
    recompute = lambda t: chi_preimage(summaries, IntervalQuery.leq(t)).value
    return [
        audit_right_continuity(curve, probes=curve.probes(), recompute=recompute, subject=subject),
        audit_vanishing_threshold(complex, v, subject=subject),
        audit_round_trip(curve, subject=subject, smooth="sect"),
    ]


def _job_disk_example():
    """Unit disk with 64 boundary vertices in 8 directions: 0 then 1,
    jumping at the minimal height, and not left-continuous there."""
    cx = fixtures.disk(64)
    rep = AuditReport("disk_example", subject="disk n=64")
    out = [rep]
    for v in sample_directions(MESH_DIRECTIONS, 2, "rational_grid"):
        curve = ect_shape(cx, v)
        low = min(c.lo for c in height_summaries(cx, v))
        rep.check(curve.breakpoints == (low,) and curve.values == (0, 1),
                  v=list(v), breakpoints=list(curve.breakpoints), values=list(curve.values), min_height=low)
        rc = audit_right_continuity(curve, subject=f"disk v={_vs(v)}")
        rep.check(rc.notes["not_left_continuous_at"] == [low], v=list(v),
                  left_jumps=rc.notes["not_left_continuous_at"])
        out.append(rc)
    return out


def _vs(v) -> str:
    return ",".join(str(c) for c in v)


def _job_mesh(name):
    cx = fixtures.meshes()[name]
    out = []
    for v in sample_directions(MESH_DIRECTIONS, cx.ambient_dim, "rational_grid"):
        out += _ect_reports(cx, v, f"{name} v={_vs(v)}")
    return out


_SMALL_MESHES = {
    "disk16": lambda: fixtures.disk(16, 2),
    "annulus16": lambda: fixtures.annulus(16),
    "torus": fixtures.torus,
    "ball3": fixtures.ball3,
}


def _job_fixture_oracle(name):
    cx = _SMALL_MESHES[name]()
    dirs = sample_directions(4 if cx.ambient_dim == 2 else 2, cx.ambient_dim, "rational_grid")
    return [audit_oracle_equivalence(cx, v, subject=f"{name} v={_vs(v)}") for v in dirs]


def _job_random_oracle(seed, start, stop):
    """Random complexes (<= 3D, <= 50 simplices) with a random direction and
    a random threshold, plus every probe of the resulting curve."""
    out = []
    for i in range(start, stop):
        rng = random.Random(f"{seed}:oracle:{i}")
        cx = fixtures.random_complex(rng, 50)
        v = fixtures.random_direction(rng, cx.ambient_dim)
        t = Fraction(rng.randint(-30, 30), rng.randint(1, 4))
        subject = f"random#{i}"
        rep = audit_oracle_equivalence(cx, v, subject=subject)
        got = chi_preimage(height_summaries(cx, v), IntervalQuery.leq(t)).value
        want = chi_clipped_oracle(cx, v, t)
        rep.check(got == want, v=list(v), t=t, chi=got, oracle=want)
        out.append(rep)
        out += _ect_reports(cx, v, subject)
    return out


def _job_middle(index):
    name, f = fixtures.pl_functions()[index]
    cx = f.complex
    rep = AuditReport("middle_continuity", subject=name)
    for t in probe_points(summaries_for(cx, f)):
        sub = audit_middle_continuity(cx, f, t)
        rep.cases += sub.cases
        rep.failures += sub.failures
    out = [rep, audit_vanishing_threshold(cx, f, subject=name)]
    return out


def _job_image(name):
    cx_g = {"two_pixel": fixtures.two_pixel, "two_pixel_lower": lambda: fixtures.two_pixel("lower"),
            "checkerboard": fixtures.checkerboard, "integer_image": fixtures.integer_image,
            "rational_image": fixtures.rational_image, "two_value_image": fixtures.two_value_image}[name]
    cx, g = cx_g()
    out = []
    for v in sample_directions(4, 2, "axes") + sample_directions(4, 2, "rational_grid"):
        subject = f"{name} v={_vs(v)}"
        out += audit_transform_curves(g, v, subject=subject)
        e = ert(g, v)
        out.append(audit_round_trip(e, subject=subject, smooth="sert"))
        out.append(audit_vanishing_threshold(cx, v, subject=subject))
        if g.is_integer_valued:
            out.append(audit_ert_extends_ect(g, v, subject=subject))
            ec = ect_constructible(g, v)
            out.append(audit_round_trip(ec, subject=f"{subject} ect", smooth="sect"))
        else:
            rep = AuditReport("floor_ceiling", subject=subject)
            for t in e.probes():
                sub = audit_floor_ceiling(g, v, t)
                rep.cases += sub.cases
                rep.failures += sub.failures
            out.append(rep)
    return out


def _job_identity(seed, start, stop):
    rep = AuditReport("select_lect_identity", subject=f"cases {start}..{stop - 1}")
    for i in range(start, stop):
        rng = random.Random(f"{seed}:identity:{i}")
        cx = fixtures.random_complex(rng, 40)
        g = fixtures.random_cell_function(rng, cx)
        v = fixtures.random_direction(rng, cx.ambient_dim)
        t = Fraction(rng.randint(-30, 30), rng.randint(1, 3))
        values = sorted(set(g.cell_values))
        s = rng.choice(values + [Fraction(rng.randint(-9, 9), 2)])
        sub = audit_select_lect_identity(g, v, t, s)
        rep.cases += sub.cases
        rep.failures += [dict(w, case=i) for w in sub.failures]
    return [rep]


def _job_axioms(seed):
    return [audit_chi_axioms(seed=seed, unions=50)]


def _job_noncompact():
    out = [audit_noncompact_counterexample(1), audit_noncompact_counterexample(Fraction(1, 2))]
    seg = fixtures.segment()
    control = AuditReport("compact_control", subject="segment [0,1]")
    for k in (0, 1):
        sub = audit_betti_right_continuity(seg, (Fraction(1),), k, subject="segment")
        control.cases += sub.cases
        control.failures += sub.failures
    out.append(control)
    return out


def _job_betti(name, k):
    cx = _SMALL_MESHES[name]()
    dirs = sample_directions(3, cx.ambient_dim, "rational_grid")
    return [audit_betti_right_continuity(cx, v, int(k), subject=f"{name} v={_vs(v)}") for v in dirs]


_JOBS = {
    "disk_example": _job_disk_example,
    "mesh": _job_mesh,
    "fixture_oracle": _job_fixture_oracle,
    "random_oracle": _job_random_oracle,
    "middle": _job_middle,
    "image": _job_image,
    "identity": _job_identity,
    "axioms": _job_axioms,
    "noncompact": _job_noncompact,
    "betti": _job_betti,
}


def plan(seed: int = 0) -> list:
    """The ordered job list for one run of the battery."""
    jobs = [("disk_example", ())]
    jobs += [("mesh", (name,)) for name in ("disk", "annulus", "torus", "ball3")]
    jobs += [("fixture_oracle", (name,)) for name in ("disk16", "annulus16", "torus", "ball3")]
    step = 25
    jobs += [("random_oracle", (seed, i, i + step)) for i in range(0, RANDOM_ORACLE_CASES, step)]
    jobs += [("middle", (i,)) for i in range(len(fixtures.pl_functions()))]
    jobs += [("image", (name,)) for name in ("two_pixel", "two_pixel_lower", "checkerboard",
                                            "integer_image", "rational_image", "two_value_image")]
    jobs += [("identity", (seed, i, i + step)) for i in range(0, IDENTITY_CASES, step)]
    jobs += [("axioms", (seed,)), ("noncompact", ())]
    jobs += [("betti", (name, k)) for name in ("disk16", "annulus16", "ball3") for k in range(3)]
    return jobs


def _run(job):
    name, args = job
    return [r.to_dict() for r in _JOBS[name](*args)]


def run_battery(seed: int = 0, workers: int = 1) -> dict:
    jobs = plan(seed)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run, jobs))
    else:
        results = [_run(j) for j in jobs]
    reports = []
    for (name, _), rs in zip(jobs, results):
        for r in rs:
            reports.append(dict(r, job=name))
    failed = sum(1 for r in reports if not r["passed"])
    return {
        "seed": seed,
        "reports": reports,
        "summary": {
            "reports": len(reports),
            "failed": failed,
            "cases": sum(r["cases"] for r in reports),
            "passed": failed == 0,
        },
    }


def report_json(result: dict) -> str:
    return json.dumps(result, sort_keys=True, indent=2) + "\n"


def report_text(result: dict) -> str:
    lines = []
    for r in result["reports"]:
        status = "PASS" if r["passed"] else "FAIL"
        subj = f" [{r['subject']}]" if r["subject"] else ""
        lines.append(f"{status} {r['tag']}{subj}: {r['cases']} cases")
        for w in r["failures"][:5]:
            lines.append(f"    witness: {json.dumps(w, sort_keys=True)}")
    s = result["summary"]
    lines.append(f"{s['reports']} reports, {s['cases']} cases, {s['failed']} failed")
    return "\n".join(lines) + "\n"
