"""Curves, tau-length, maximality, causal character and the axiom audit."""

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lorlen.core import (
    PolylineCurve,
    audit_axioms,
    causal_character,
    check_causal,
    future_ordered_points,
    is_maximal,
    polyline,
    push_up_audit,
    reparametrize_by_tau,
    segment_taus,
    tau_length,
)
from lorlen.exttime import INF
from lorlen.spacetimes import minkowski_handle

FLAT2 = minkowski_handle(2)
FLAT3 = minkowski_handle(3)


def flat_tau(p, q):
    dt = q[0] - p[0]
    space = math.hypot(*(qc - pc for pc, qc in zip(p[1:], q[1:])))
    return math.sqrt(dt * dt - space * space) if dt > space else 0.0


# -- polyline construction ---------------------------------------------------


def test_polyline_default_params():
    c = polyline([(0.0, 0.0), (1.0, 0.2), (2.0, 0.1)])
    assert c.params == (0.0, 1.0, 2.0)
    assert c.points[1] == (1.0, 0.2)
    assert c.future_directed


def test_polyline_rejects_non_monotone_params():
    with pytest.raises(ValueError):
        polyline([(0.0, 0.0), (1.0, 0.0)], params=[0.0, 0.0])
    with pytest.raises(ValueError):
        polyline([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], params=[0.0, 2.0, 1.0])


def test_future_ordered_points_reverses_past_directed_curves():
    pts = ((0.0, 0.0), (1.0, 0.0), (2.0, 0.5))
    fwd = PolylineCurve((0.0, 1.0, 2.0), pts, True)
    bwd = PolylineCurve((0.0, 1.0, 2.0), tuple(reversed(pts)), False)
    assert future_ordered_points(fwd) == pts
    assert future_ordered_points(bwd) == pts


def test_check_causal_reports_first_bad_segment():
    good = polyline([(0.0, 0.0), (1.0, 0.5), (2.0, 0.5)])
    assert check_causal(FLAT2, good) is None
    bad = polyline([(0.0, 0.0), (1.0, 0.5), (0.5, 3.0)])
    assert check_causal(FLAT2, bad) == 1


# -- tau-length ---------------------------------------------------------------


def test_tau_length_matches_manual_sum():
    c = polyline([(0.0, 0.0), (1.0, 0.5), (2.5, 0.0)])
    manual = flat_tau((0.0, 0.0), (1.0, 0.5)) + flat_tau((1.0, 0.5), (2.5, 0.0))
    assert tau_length(FLAT2, c) == pytest.approx(manual, rel=1e-15)
    assert segment_taus(FLAT2, c) == pytest.approx(
        [flat_tau((0.0, 0.0), (1.0, 0.5)), flat_tau((1.0, 0.5), (2.5, 0.0))])


def test_tau_length_infinite_segment():
    inf_space = replace(FLAT2, name="inf", tau=lambda p, q: INF)
    c = polyline([(0.0, 0.0), (1.0, 0.0)])
    assert math.isinf(tau_length(inf_space, c))


def test_polyline_needs_two_samples():
    with pytest.raises(ValueError, match="two samples"):
        PolylineCurve((0.0,), ((0.0, 0.0),), True)


# -- causal character ---------------------------------------------------------


def test_character_timelike_null_mixed():
    timelike = polyline([(0.0, 0.0), (1.0, 0.2), (2.0, 0.0)])
    assert causal_character(FLAT2, timelike).verdict == "timelike"

    null = polyline([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)])
    rep = causal_character(FLAT2, null)
    assert rep.verdict == "null" and rep.n_chron == 0

    mixed = polyline([(0.0, 0.0), (1.0, 1.0), (2.0, 1.0)])
    rep = causal_character(FLAT2, mixed)
    assert rep.verdict == "mixed"
    assert 0 < rep.n_chron < rep.n_pairs


def test_character_rejects_non_causal_curves():
    bad = polyline([(0.0, 0.0), (1.0, 2.0)])
    with pytest.raises(ValueError, match="not causal"):
        causal_character(FLAT2, bad)


# -- maximality ----------------------------------------------------------------


def test_straight_segment_is_maximal():
    c = polyline([(0.0, 0.0), (0.5, 0.25), (1.0, 0.5), (2.0, 1.0)])
    rep = is_maximal(FLAT2, c)
    assert rep.maximal
    assert rep.length == pytest.approx(rep.endpoint_tau, rel=1e-12)


def test_bent_curve_is_not_maximal():
    c = polyline([(0.0, 0.0), (1.0, 0.8), (2.0, 0.0)])
    rep = is_maximal(FLAT2, c)
    assert not rep.maximal
    assert rep.length < rep.endpoint_tau


# -- reparametrization ----------------------------------------------------------


def test_reparametrize_by_tau_params_are_running_tau():
    c = polyline([(0.0, 0.0), (1.0, 0.5), (2.5, 0.0)])
    rc = reparametrize_by_tau(FLAT2, c)
    taus = segment_taus(FLAT2, c)
    assert rc.params[0] == 0.0
    assert rc.params[1] == pytest.approx(taus[0])
    assert rc.params[2] == pytest.approx(taus[0] + taus[1])
    assert rc.points == c.points


def test_reparametrize_rejects_null_segments():
    c = polyline([(0.0, 0.0), (1.0, 1.0), (2.0, 1.0)])
    with pytest.raises(ValueError):
        reparametrize_by_tau(FLAT2, c)


# -- audit ----------------------------------------------------------------------


AUDIT_POINTS = [(0.0, 0.0), (0.5, 0.1), (1.0, -0.2), (1.5, 0.3), (2.0, 0.0),
                (0.3, 0.9), (1.1, 0.7)]


def test_audit_clean_on_flat_space():
    rep = audit_axioms(FLAT2, AUDIT_POINTS)
    assert rep.ok
    assert rep.n_pairs == len(AUDIT_POINTS) * (len(AUDIT_POINTS) - 1)
    assert not rep.reverse_triangle and not rep.positivity
    assert not rep.diagonal and not rep.lower_semicontinuity


def test_audit_flags_planted_reverse_triangle_violation():
    # corrupt tau on exactly one long chord so the chain through the middle
    # point beats it
    def bad_tau(p, q):
        if p == (0.0, 0.0) and q == (2.0, 0.0):
            return 1.0
        return FLAT2.tau(p, q)

    space = replace(FLAT2, name="bad", tau=bad_tau)
    rep = audit_axioms(space, [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])
    assert not rep.ok
    assert rep.reverse_triangle
    w = rep.reverse_triangle[0]
    assert w["x"] == (0.0, 0.0) and w["z"] == (2.0, 0.0)


def test_audit_flags_positivity_mismatch():
    # tau positive on a spacelike pair
    def bad_tau(p, q):
        if p == (0.0, 0.0) and q == (0.0, 1.0):
            return 0.5
        return FLAT2.tau(p, q)

    space = replace(FLAT2, name="bad", tau=bad_tau)
    rep = audit_axioms(space, [(0.0, 0.0), (0.0, 1.0)])
    assert not rep.ok
    assert any(w["p"] == (0.0, 0.0) and w["q"] == (0.0, 1.0) and not w["chron"]
               for w in rep.positivity)


def test_audit_flags_finite_diagonal():
    space = replace(FLAT2, name="bad", chron=lambda p, q: True,
                    caus=lambda p, q: True, tau=lambda p, q: 1.0)
    rep = audit_axioms(space, [(0.0, 0.0)])
    assert not rep.ok
    assert rep.diagonal and rep.diagonal[0]["tau"] == 1.0


def test_audit_lsc_detects_upward_jump():
    # tau jumps up at the limit point: tau(p_n, q) = 0 but tau(p, q) = 1
    def bad_tau(p, q):
        if p == (0.0, 0.0) and q == (2.0, 0.0):
            return 2.0
        return 0.0

    space = replace(FLAT2, name="bad", tau=bad_tau)
    p_seq = [(1.0 / n, 0.0) for n in range(1, 9)]
    q_seq = [(2.0, 0.0)] * 8
    rep = audit_axioms(space, [(0.0, 0.0), (2.0, 0.0)],
                       sequences=[(p_seq, q_seq, (0.0, 0.0), (2.0, 0.0))])
    assert rep.lower_semicontinuity
    assert rep.lower_semicontinuity[0]["deficit"] == pytest.approx(2.0)


def test_audit_is_deterministic_across_runs():
    a = audit_axioms(FLAT2, AUDIT_POINTS, seed=3)
    b = audit_axioms(FLAT2, AUDIT_POINTS, seed=3)
    assert a == b


# -- push-up --------------------------------------------------------------------


def test_push_up_clean_on_flat_space():
    triples = [((0.0, 0.0), (1.0, 1.0), (3.0, 1.0)),   # x <= y << z
               ((0.0, 0.0), (1.0, 0.5), (2.0, 1.5))]   # x << y <= z
    rep = push_up_audit(FLAT2, triples)
    assert rep.ok and rep.n_checked == 2 and not rep.invalid


def test_push_up_detects_violation():
    # chron broken on the long pair only
    def bad_chron(p, q):
        if p == (0.0, 0.0) and q == (3.0, 1.0):
            return False
        return FLAT2.chron(p, q)

    space = replace(FLAT2, name="bad", chron=bad_chron)
    rep = push_up_audit(space, [((0.0, 0.0), (1.0, 1.0), (3.0, 1.0))])
    assert not rep.ok
    assert rep.violations[0]["pattern"] == "leq-chron"


def test_push_up_marks_unrelated_triples_invalid():
    rep = push_up_audit(FLAT2, [((0.0, 0.0), (0.0, 5.0), (0.0, 9.0))])
    assert rep.invalid == (0,)


# -- property tests ---------------------------------------------------------------


steps = st.lists(
    st.tuples(st.floats(0.05, 1.0), st.floats(-0.95, 0.95)),
    min_size=2, max_size=8)


def chain_from_steps(step_list):
    pts = [(0.0, 0.0)]
    for dt, frac in step_list:
        t, x = pts[-1]
        pts.append((t + dt, x + frac * dt))
    return pts


@given(steps)
@settings(max_examples=120, deadline=None)
def test_reverse_triangle_on_flat_chains(step_list):
    pts = chain_from_steps(step_list)
    x, z = pts[0], pts[-1]
    for y in pts[1:-1]:
        assert FLAT2.tau(x, y) + FLAT2.tau(y, z) <= FLAT2.tau(x, z) + 1e-9


@given(steps)
@settings(max_examples=120, deadline=None)
def test_tau_length_additive_at_every_split(step_list):
    pts = chain_from_steps(step_list)
    curve = polyline(pts)
    total = tau_length(FLAT2, curve)
    for i in range(1, len(pts) - 1):
        left = tau_length(FLAT2, polyline(pts[: i + 1]))
        right = tau_length(FLAT2, polyline(pts[i:]))
        assert abs((left + right) - total) <= 1e-12 * max(1.0, total)


@given(steps, st.floats(0.1, 10.0), st.floats(-5.0, 5.0))
@settings(max_examples=120, deadline=None)
def test_tau_length_invariant_under_reparametrization(step_list, scale, shift):
    pts = chain_from_steps(step_list)
    curve = polyline(pts)
    params = tuple(shift + scale * t for t in curve.params)
    rescaled = PolylineCurve(params, curve.points, True)
    assert tau_length(FLAT2, rescaled) == tau_length(FLAT2, curve)


@given(steps)
@settings(max_examples=120, deadline=None)
def test_tau_length_refinement_keeps_value_on_segments(step_list):
    pts = chain_from_steps(step_list)
    refined = []
    for p, q in zip(pts, pts[1:]):
        refined.append(p)
        refined.append(((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0))
    refined.append(pts[-1])
    base = tau_length(FLAT2, polyline(pts))
    fine = tau_length(FLAT2, polyline(refined))
    # midpoints lie on the segments, so the partition sum is unchanged
    assert abs(fine - base) <= 1e-9 * max(1.0, base)
    # and never exceeds the coarse sum beyond roundoff (reverse triangle)
    assert fine <= base + 1e-9 * max(1.0, base)


@given(steps, st.integers(0, 6))
@settings(max_examples=120, deadline=None)
def test_refinement_off_curve_decreases(step_list, idx):
    pts = chain_from_steps(step_list)
    i = idx % (len(pts) - 1)
    p, q = pts[i], pts[i + 1]
    mid = ((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0)
    # push the midpoint off the chord but keep the pieces causal
    bent = (mid[0], mid[1] + 0.45 * (q[0] - p[0]))
    if not (FLAT2.caus(p, bent) and FLAT2.caus(bent, q)):
        return
    refined = pts[: i + 1] + [bent] + pts[i + 1:]
    assert tau_length(FLAT2, polyline(refined)) <= \
        tau_length(FLAT2, polyline(pts)) + 1e-12


def test_three_dimensional_chains_work():
    rng = np.random.default_rng(7)
    for _ in range(25):
        pts = [(0.0, 0.0, 0.0)]
        for _ in range(5):
            dt = rng.uniform(0.1, 1.0)
            ang = rng.uniform(0.0, 2.0 * math.pi)
            rad = rng.uniform(0.0, 0.9) * dt
            t, x, y = pts[-1]
            pts.append((t + dt, x + rad * math.cos(ang), y + rad * math.sin(ang)))
        curve = polyline(pts)
        assert check_causal(FLAT3, curve) is None
        total = tau_length(FLAT3, curve)
        left = tau_length(FLAT3, polyline(pts[:3]))
        right = tau_length(FLAT3, polyline(pts[2:]))
        assert left + right == pytest.approx(total, rel=1e-12)
