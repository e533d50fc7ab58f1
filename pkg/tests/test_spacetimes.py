"""Plane spacetimes, the black-hole interior leaf, funnels, null boundaries."""

import math

import numpy as np
import pytest

from lorlen.core import check_causal, is_maximal, tau_length
from lorlen.spacetimes import (
    TWO_PI,
    BubblingPlane,
    ConePlane,
    Funnel,
    InteriorPlane,
    MinkowskiPlane,
    bubbling_left_exit,
    bubbling_nu,
    bubbling_right_exit,
    builtin_plane,
    cylinder_handle,
    funnel_caus,
    funnel_chron,
    funnel_dist,
    funnel_handle,
    funnel_maximizer,
    funnel_tau,
    interior_caus,
    interior_chron,
    interior_geodesic,
    interior_handle,
    interior_side_curves,
    interior_tau,
    mink_caus,
    mink_chron,
    mink_tau,
    minkowski_handle,
    null_boundary,
    proper_time_unit_energy,
    proper_time_zero_energy,
    schwarzschild_family,
    t_minus,
    t_plus,
    t_plus_prime,
)


def deriv(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2.0 * h)


# -- flat handles ---------------------------------------------------------------


def test_mink_relations_closed_form():
    assert mink_tau((0.0, 0.0), (2.0, 1.0)) == pytest.approx(math.sqrt(3.0))
    assert mink_tau((0.0, 0.0), (1.0, 1.0)) == 0.0
    assert mink_chron((0.0, 0.0), (1.0, 0.5))
    assert not mink_chron((0.0, 0.0), (1.0, 1.0))
    assert mink_caus((0.0, 0.0), (1.0, 1.0))
    assert mink_caus((1.0, 2.0), (1.0, 2.0))          # reflexive
    assert not mink_caus((0.0, 0.0), (-1.0, 0.0))
    # any spatial dimension
    assert mink_tau((0.0, 0.0, 0.0), (3.0, 1.0, 2.0)) == pytest.approx(2.0)


def test_minkowski_handles():
    h2 = minkowski_handle(2)
    h3 = minkowski_handle(3)
    assert h2.backend == "model-space" and h3.backend == "restricted-subset"
    assert h2.exactness == "exact"
    curve = h2.maximizer((0.0, 0.0), (1.0, 0.25))
    assert curve.points[0] == (0.0, 0.0) and curve.points[-1] == (1.0, 0.25)
    assert is_maximal(h2, curve).maximal
    with pytest.raises(ValueError):
        minkowski_handle(1)


def test_cylinder_handle_everything_related():
    h = cylinder_handle()
    pts = [(0.0, 0.0), (1.0, 2.0), (TWO_PI - 0.25, -3.0)]
    for p in pts:
        for q in pts:
            assert h.chron(p, q) and h.caus(p, q)
            assert math.isinf(h.tau(p, q))
    # distance wraps around the time circle
    assert h.dist((0.1, 0.0), (TWO_PI - 0.1, 0.0)) == pytest.approx(0.2)


# -- interior closed forms vs numerical derivatives ----------------------------------


def test_t_plus_prime_matches_derivative():
    for M in (0.7, 1.0):
        for r in (0.3 * M, 1.0 * M, 1.7 * M):
            want = deriv(lambda s: float(t_plus(s, M)), r)
            assert float(t_plus_prime(r, M)) == pytest.approx(want, rel=1e-6)
    assert float(t_minus(1.0, 1.0)) == -float(t_plus(1.0, 1.0))


def test_proper_time_markers_match_derivatives():
    M = 1.0

    def h(r):
        return 2.0 * M / r - 1.0

    for r in (0.4, 1.0, 1.6):
        # unit-energy family: dtau/dr = 1/sqrt(1 + h)
        want = 1.0 / math.sqrt(1.0 + h(r))
        got = deriv(lambda s: float(proper_time_unit_energy(s, M)), r)
        assert got == pytest.approx(want, rel=1e-6)
        # zero-energy family: dtau/dr = 1/sqrt(h)
        want = 1.0 / math.sqrt(h(r))
        got = deriv(lambda s: float(proper_time_zero_energy(s, M)), r)
        assert got == pytest.approx(want, rel=1e-6)


def test_interior_relations():
    M = 1.0
    assert interior_chron(M, (1.5, 0.0), (1.0, 0.1))
    assert not interior_chron(M, (1.0, 0.1), (1.5, 0.0))   # past-directed
    assert not interior_chron(M, (1.5, 0.0), (1.5, 0.1))   # equal radius
    assert not interior_chron(M, (1.5, 0.0), (1.0, 50.0))  # outside the wall
    assert interior_caus(M, (1.5, 0.0), (1.5, 0.0))        # reflexive
    assert not interior_caus(M, (1.5, 0.0), (1.5, 0.1))
    assert not interior_chron(M, (2.5, 0.0), (1.0, 0.0))   # outside the patch


def test_interior_tau_matches_family_closed_forms():
    # points on a unit-energy pregeodesic: tau equals the proper-time marker gap
    M = 1.0
    r1, r2 = 1.6, 0.9
    p = (r1, float(t_plus(r1, M)))
    q = (r2, float(t_plus(r2, M)))
    want = float(proper_time_unit_energy(r1, M) - proper_time_unit_energy(r2, M))
    assert interior_tau(M, p, q) == pytest.approx(want, abs=1e-9)
    # points at equal coordinate time: the zero-energy closed form
    want = float(proper_time_zero_energy(r1, M) - proper_time_zero_energy(r2, M))
    assert interior_tau(M, (r1, 0.3), (r2, 0.3)) == pytest.approx(want, abs=1e-12)
    assert interior_tau(M, (r2, 0.0), (r1, 0.0)) == 0.0


def test_interior_geodesic_is_maximal():
    M = 1.0
    p, q = (1.5, 0.0), (0.8, 0.6)
    handle = interior_handle(M)
    curve = interior_geodesic(M, p, q, n=9)
    assert curve.points[0] == p and curve.points[-1] == q
    assert check_causal(handle, curve) is None
    assert tau_length(handle, curve) == pytest.approx(handle.tau(p, q), rel=1e-7)
    with pytest.raises(ValueError):
        interior_geodesic(M, q, p)


def test_interior_handle_metadata():
    h = interior_handle(1.0)
    assert h.backend == "restricted-subset"
    assert h.tau_abs_error == 1e-9


# -- infalling triangle family -------------------------------------------------------


def test_family_record_geometry():
    M, C, k = 1.0, 0.5, 3
    rec = schwarzschild_family(M, C, k)
    assert max(rec.residuals) < 1e-10
    assert 0.0 < rec.r_z < rec.r_y < rec.r_x < 2.0 * M
    assert rec.x == (rec.r_x, 0.0) and rec.z == (rec.r_z, 0.0)
    # vertices are chronologically ordered in the patch
    assert interior_chron(M, rec.x, rec.y)
    assert interior_chron(M, rec.y, rec.z)
    # sides are realized by the exact tau oracle (the families are geodesics)
    assert interior_tau(M, rec.x, rec.y) == pytest.approx(rec.a, abs=1e-8)
    assert interior_tau(M, rec.y, rec.z) == pytest.approx(rec.b, abs=1e-8)
    assert interior_tau(M, rec.x, rec.z) == pytest.approx(rec.c, abs=1e-10)
    # reverse triangle inequality is strict for this family
    assert rec.c > rec.a + rec.b


def test_family_scalar_products_increase_toward_minus_one():
    M, C = 1.0, 0.5
    prods = []
    for k in range(1, 12):
        rec = schwarzschild_family(M, C, k)
        assert rec.scalar_product == pytest.approx(rec.scalar_product_closed_form,
                                                   abs=1e-9)
        assert rec.scalar_product < -1.0
        prods.append(rec.scalar_product)
    assert all(b > a for a, b in zip(prods, prods[1:]))


def test_family_rejects_bad_parameters():
    with pytest.raises(ValueError):
        schwarzschild_family(0.0, 0.5, 1)
    with pytest.raises(ValueError):
        schwarzschild_family(1.0, 0.5, 0)


def test_family_side_curves_connect_vertices():
    rec = schwarzschild_family(1.0, 0.5, 2)
    xy, yz, xz = interior_side_curves(rec, n=17)
    assert xy.points[0] == pytest.approx(rec.x, abs=1e-12)
    assert xy.points[-1] == pytest.approx(rec.y, abs=1e-12)
    assert yz.points[0] == pytest.approx(rec.y, abs=1e-12)
    assert yz.points[-1] == pytest.approx(rec.z, abs=1e-12)
    assert xz.points[0] == rec.x and xz.points[-1] == rec.z
    handle = interior_handle(rec.M)
    for curve in (xy, yz, xz):
        assert check_causal(handle, curve) is None


# -- funnel ---------------------------------------------------------------------------


F = Funnel(p=(0.0, 0.0), q=(0.0, 0.0), link_length=0.25)


def test_funnel_canonical_identifies_junctions():
    assert F.canonical(("past", 0.0, 0.0)) == ("link", 0.0)
    assert F.canonical(("future", 0.0, 0.0)) == ("link", 1.0)
    assert F.canonical(("past", -1.0, 0.5)) == ("past", -1.0, 0.5)


def test_funnel_membership():
    assert F.member(("past", -1.0, 0.5))
    assert not F.member(("past", 1.0, 0.0))      # not in the past cone
    assert F.member(("future", 1.0, -0.5))
    assert not F.member(("future", -1.0, 0.0))
    assert F.member(("link", 0.5))
    assert not F.member(("link", 1.5))
    assert not F.member(("elsewhere", 0.0, 0.0))


def test_funnel_tau_piecewise():
    a = ("past", -1.0, 0.0)
    b = ("future", 1.0, 0.0)
    # through the funnel: past leg + link + future leg
    assert funnel_tau(F, a, b) == pytest.approx(1.0 + 0.25 + 1.0)
    assert funnel_tau(F, b, a) == 0.0
    # within one cone: flat
    assert funnel_tau(F, ("past", -2.0, 0.0), a) == pytest.approx(1.0)
    # along the link: scaled by its length
    assert funnel_tau(F, ("link", 0.2), ("link", 0.7)) == pytest.approx(0.125)
    assert funnel_tau(F, ("link", 0.7), ("link", 0.2)) == 0.0
    # half-way combinations
    assert funnel_tau(F, a, ("link", 0.5)) == pytest.approx(1.0 + 0.125)
    assert funnel_tau(F, ("link", 0.5), b) == pytest.approx(0.125 + 1.0)


def test_funnel_causality_through_pieces():
    assert funnel_caus(F, ("past", -1.0, 0.5), ("future", 0.5, 0.0))
    assert not funnel_caus(F, ("future", 0.5, 0.0), ("past", -1.0, 0.5))
    assert funnel_caus(F, ("link", 0.25), ("link", 0.25))
    assert funnel_chron(F, ("link", 0.2), ("link", 0.7))
    assert not funnel_chron(F, ("link", 0.7), ("link", 0.7))


def test_funnel_maximizer_passes_through_both_junctions():
    a = ("past", -1.0, 0.25)
    b = ("future", 0.8, -0.3)
    curve = funnel_maximizer(F, a, b)
    assert ("link", 0.0) in curve.points
    assert ("link", 1.0) in curve.points
    handle = funnel_handle(F)
    assert check_causal(handle, curve) is None
    assert tau_length(handle, curve) == pytest.approx(handle.tau(a, b), rel=1e-12)
    assert is_maximal(handle, curve).maximal
    with pytest.raises(ValueError):
        funnel_maximizer(F, b, a)


def test_funnel_null_link_still_connects():
    f0 = Funnel(link_length=0.0)
    a, b = ("past", -1.0, 0.0), ("future", 1.0, 0.0)
    assert funnel_caus(f0, a, b)
    assert funnel_tau(f0, a, b) == pytest.approx(2.0)  # cones only
    assert not funnel_chron(f0, ("link", 0.2), ("link", 0.7))
    assert funnel_caus(f0, ("link", 0.2), ("link", 0.7))
    assert funnel_dist(f0, ("link", 0.0), ("link", 1.0)) == pytest.approx(1.0)


def test_funnel_handle_positions():
    h = funnel_handle(F)
    assert h.position(("past", -1.0, 0.5)) == (-1.0, 0.5)
    assert h.position(("link", 0.5)) == (0.0, 0.0)  # p == q here
    f = Funnel(p=(0.0, 0.0), q=(1.0, 1.0), link_length=0.25)
    assert funnel_handle(f).position(("link", 0.5)) == (0.5, 0.5)


# -- plane constructors ----------------------------------------------------------------


def test_builtin_plane_ids():
    for spec_id in ("minkowski2", "cylinder", "bubbling",
                    "schwarzschild-interior", "cone-structure"):
        plane = builtin_plane(spec_id)
        assert spec_id in plane.id_string() or plane.name == spec_id
    with pytest.raises(ValueError, match="unknown spacetime id"):
        builtin_plane("klein-bottle")


def test_plane_parameter_validation():
    with pytest.raises(ValueError):
        BubblingPlane(lam=1.5)
    with pytest.raises(ValueError):
        InteriorPlane(M=-1.0)
    with pytest.raises(ValueError):
        ConePlane(p=0.5)


def test_minkowski_cone_edges():
    plane = MinkowskiPlane()
    left, right = plane.cone_at((0.0, 0.0))
    s = 1.0 / math.sqrt(2.0)
    assert left == pytest.approx((s, -s))
    assert right == pytest.approx((s, s))


def test_cone_structure_gauge_reduces_to_minkowski():
    plane = ConePlane(p=2.0, s0=1.0, s1=0.0)
    assert float(plane.gauge(0.0, 0.0, 1.0, 0.0)) == pytest.approx(1.0)
    assert float(plane.gauge(0.0, 0.0, 1.0, 1.0)) == 0.0   # null edge
    assert float(plane.gauge(0.0, 0.0, 2.0, 1.0)) == pytest.approx(math.sqrt(3.0))
    assert plane.causal((0.0, 0.0), (1.0, 1.0))
    assert not plane.causal((0.0, 0.0), (1.0, 1.1))
    left, right = plane.cone_at((0.0, 0.0))
    assert right == pytest.approx((1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0)))


def test_cone_structure_variable_slope():
    plane = ConePlane(p=3.0, s0=1.0, s1=0.5)
    # wider cone at larger x
    assert not plane.causal((0.0, 0.0), (1.0, 1.2))
    assert plane.causal((0.0, 2.0), (1.0, 1.5))
    assert plane.domain[1][0] == pytest.approx(-2.0)


# -- null boundary curves -----------------------------------------------------------


def test_null_boundary_straight_in_minkowski():
    plane = MinkowskiPlane()
    bc = null_boundary(plane, (0.0, 0.0), "right", "future", span=1.0, num=33)
    assert bc.end_reason == "span" and not bc.hit_boundary
    s = 1.0 / math.sqrt(2.0)
    end = bc.curve.points[-1]
    assert end[0] == pytest.approx(s, abs=1e-9)
    assert end[1] == pytest.approx(s, abs=1e-9)
    # every sample sits on the diagonal
    for u, x in bc.curve.points:
        assert u == pytest.approx(x, abs=1e-9)


def test_null_boundary_stops_at_domain_wall():
    plane = InteriorPlane(M=1.0)
    bc = null_boundary(plane, (1.0, 0.0), "right", "future", span=10.0)
    assert bc.end_reason == "domain" and bc.hit_boundary
    assert bc.curve.points[-1][0] == pytest.approx(0.0, abs=1e-6)


def test_null_boundary_validates_arguments():
    plane = MinkowskiPlane()
    with pytest.raises(ValueError, match="branch"):
        null_boundary(plane, (0.0, 0.0), "up", "future")
    with pytest.raises(ValueError, match="direction"):
        null_boundary(plane, (0.0, 0.0), "left", "sideways")
    with pytest.raises(ValueError, match="outside the domain"):
        null_boundary(InteriorPlane(M=1.0), (3.0, 0.0), "left", "future")


Q = (0.125, 1.0)


def test_bubbling_left_boundary_matches_closed_form():
    plane = BubblingPlane()
    bc = null_boundary(plane, Q, "left", "past", span=4.0, num=257)
    assert bc.end_reason == "axis"
    # compare u(x) against the closed form nu along the whole curve
    worst = 0.0
    for u, x in bc.curve.points:
        xi = Q[1] - x
        nu_u, nu_x = bubbling_nu(Q, xi)
        worst = max(worst, abs(u - float(nu_u)))
    assert worst <= 1e-6
    end = bc.curve.points[-1]
    assert end[0] == pytest.approx(0.0, abs=1e-12)
    assert end[1] == pytest.approx(bubbling_left_exit(Q), abs=1e-6)


def test_bubbling_right_boundary_exit_point():
    plane = BubblingPlane()
    bc = null_boundary(plane, Q, "right", "past", span=4.0, num=257)
    assert bc.end_reason == "axis"
    end = bc.curve.points[-1]
    assert end[0] == pytest.approx(0.0, abs=1e-12)
    assert end[1] == pytest.approx(bubbling_right_exit(Q), abs=1e-8)
    # the right exit lies to the right of the start, the left exit to the left
    assert bubbling_right_exit(Q) > Q[1] > bubbling_left_exit(Q)


def test_bubbling_closed_forms_consistent():
    # nu(0) = q, nu(2 sqrt(u0)) on the axis at the left exit
    u0, x0 = Q
    nu_u, nu_x = bubbling_nu(Q, 0.0)
    assert (float(nu_u), float(nu_x)) == pytest.approx((u0, x0))
    xi_end = 2.0 * math.sqrt(u0)
    nu_u, nu_x = bubbling_nu(Q, xi_end)
    assert float(nu_u) == pytest.approx(0.0, abs=1e-15)
    assert float(nu_x) == pytest.approx(bubbling_left_exit(Q))
