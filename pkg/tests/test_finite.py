"""Finite causal spaces: relations, longest-chain tau, topology, parsing."""

import itertools
import math

import numpy as np
import pytest

from lorlen.core import audit_axioms
from lorlen.exttime import INF
from lorlen.finite import (
    FiniteCausalSpace,
    causal_set_geodesics,
    finite_handle,
    ladder_report,
    parse_finite_space,
    seven_point_space,
    space_links,
    topology_report,
    two_point_space,
    verify_pls,
)


def brute_force_longest_chain(space, x, y):
    """Edges of the longest <<-chain from x to y by exhaustive search."""
    if x == y:
        return INF if space.rel_chron(x, x) else 0.0
    if not space.rel_chron(x, y):
        return 0.0
    cyclic = {p for p in space.points if space.rel_chron(p, p)}
    if any((x == c or space.rel_chron(x, c)) and (c == y or space.rel_chron(c, y))
           for c in cyclic):
        return INF

    best = 0

    def extend(p, length):
        nonlocal best
        if p == y:
            best = max(best, length)
            return
        for q in space.points:
            if q not in cyclic and space.rel_chron(p, q) and (
                    q == y or space.rel_chron(q, y)):
                extend(q, length + 1)

    extend(x, 0)
    return float(best)


def random_causal_set(rng, max_nodes=12):
    n = int(rng.integers(2, max_nodes + 1))
    points = list(range(1, n + 1))
    p = float(rng.uniform(0.1, 0.6))
    chron = [(points[i], points[j])
             for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return FiniteCausalSpace(points, chron)


# -- construction and relations -----------------------------------------------


def test_transitive_closure_and_reflexive_caus():
    sp = FiniteCausalSpace([1, 2, 3], [(1, 2), (2, 3)])
    assert sp.rel_chron(1, 3)          # closure
    assert sp.rel_caus(1, 1)           # reflexive
    assert sp.rel_caus(1, 3)           # chron within caus
    assert not sp.rel_chron(3, 1)


def test_duplicate_points_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        FiniteCausalSpace([1, 1], [])


def test_unknown_relation_points_rejected():
    with pytest.raises(ValueError, match="unknown points"):
        FiniteCausalSpace([1, 2], [(1, 5)])


def test_tau_counts_longest_chain_edges():
    sp = FiniteCausalSpace([1, 2, 3, 4], [(1, 2), (2, 4), (1, 3), (3, 4), (2, 3)])
    # longest chain 1 << 2 << 3 << 4 has three edges
    assert sp.tau(1, 4) == 3.0
    assert sp.tau(1, 2) == 1.0
    assert sp.tau(4, 1) == 0.0
    assert sp.tau(1, 1) == 0.0


def test_cycles_make_tau_infinite():
    sp = FiniteCausalSpace([1, 2, 3], [(1, 2), (2, 1), (2, 3)])
    assert math.isinf(sp.tau(1, 1))
    assert math.isinf(sp.tau(1, 3))   # passes through the cycle
    assert sp.tau(3, 3) == 0.0


def test_tau_matches_brute_force_on_random_sets():
    rng = np.random.default_rng(20240811)
    for _ in range(60):
        sp = random_causal_set(rng)
        for x, y in itertools.product(sp.points, repeat=2):
            assert sp.tau(x, y) == brute_force_longest_chain(sp, x, y)


def test_audit_clean_on_random_causal_sets():
    rng = np.random.default_rng(7)
    for _ in range(40):
        sp = random_causal_set(rng)
        rep = audit_axioms(finite_handle(sp), sp.points)
        assert rep.ok, rep


def test_reverse_triangle_is_exact_for_longest_chains():
    rng = np.random.default_rng(99)
    for _ in range(30):
        sp = random_causal_set(rng)
        for x, y, z in itertools.permutations(sp.points, 3):
            if sp.rel_chron(x, y) and sp.rel_chron(y, z):
                assert sp.tau(x, y) + sp.tau(y, z) <= sp.tau(x, z)


# -- geodesics ------------------------------------------------------------------


def test_causal_set_geodesics_enumerates_maximal_chains():
    sp = FiniteCausalSpace([1, 2, 3, 4], [(1, 2), (2, 4), (1, 3), (3, 4)])
    rep = causal_set_geodesics(sp, 1, 4)
    chains = set(rep.geodesics)
    assert chains == {(1, 2, 4), (1, 3, 4)}
    assert rep.length_edges == 2 and rep.length_vertices == 3
    links = set(space_links(sp))
    assert (1, 2) in links and (2, 4) in links and (1, 4) not in links


# -- canonical examples -----------------------------------------------------------


def test_two_point_space_relations():
    sp = two_point_space()
    handle = finite_handle(sp, name="two-point")
    assert sp.tau(1, 2) == 1.0 and sp.tau(2, 1) == 0.0
    assert audit_axioms(handle, sp.points).ok


def test_seven_point_space_generators_and_closure():
    sp = seven_point_space()
    assert set(sp.points) == set(range(1, 8))
    assert sp.rel_chron(1, 2)          # via 6 (and 7)
    assert sp.rel_chron(3, 4) and sp.rel_chron(3, 5)
    assert not sp.rel_chron(1, 3)
    assert sp.interval(1, 2) == frozenset({6, 7})
    # every other diamond is empty
    for x, y in itertools.permutations(sp.points, 2):
        if (x, y) != (1, 2):
            assert sp.interval(x, y) == frozenset()


def test_seven_point_topology_report():
    top = topology_report(seven_point_space())
    assert not top.diamonds_cover
    assert 1 in top.uncovered_by_diamonds
    assert top.rays_cover and not top.uncovered_by_rays
    assert set(top.ray_base_failures) >= {7}
    wit = [w for w in top.ray_base_witnesses if w[0] == 7]
    assert len(wit) == 1
    p, ray_a, ray_b, inter = wit[0]
    assert inter == frozenset({6, 7})
    assert {ray_a, ray_b} == {frozenset({2, 6, 7}), frozenset({1, 6, 7})}
    # the diamond-generated topology sits strictly inside the ray-generated one
    assert top.alexandrov_subset_interval and top.strictly_coarser
    assert set(top.alexandrov) < set(top.interval)


def test_topology_report_is_deterministic():
    a = topology_report(seven_point_space())
    b = topology_report(seven_point_space())
    assert a == b


def test_ladder_report_flags_chron_loops():
    ok = ladder_report(seven_point_space())
    assert ok.chronological and ok.causal
    loop = ladder_report(FiniteCausalSpace([1, 2], [(1, 2), (2, 1)]))
    assert not loop.chronological
    assert loop.chron_loop_witnesses


def test_verify_pls_on_seven_point():
    rep = verify_pls(seven_point_space(), name="seven-point")
    assert rep.ok
    assert rep.audit.ok and rep.push_up.ok and not rep.chron_within_caus


# -- parsing -----------------------------------------------------------------------


GOOD_TEXT = """
# commentary
points 4
chron
1 2
2 3
leq
3 4
"""


def test_parse_round_trip():
    sp = parse_finite_space(GOOD_TEXT)
    assert sp.points == (1, 2, 3, 4)
    assert sp.rel_chron(1, 3)
    assert sp.rel_caus(3, 4) and not sp.rel_chron(3, 4)


def test_parse_errors_name_line_numbers():
    with pytest.raises(ValueError, match="line 3"):
        parse_finite_space("points 2\nchron\nbogus tokens here")
    with pytest.raises(ValueError):
        parse_finite_space("chron\n1 2")


def test_one_point_reflexive_space_is_flagged():
    # one point with x << x and a finite positive tau cannot satisfy the
    # diagonal dichotomy (tau(x,x) must be 0 or inf)
    from dataclasses import replace

    handle = replace(
        finite_handle(FiniteCausalSpace([1], [])),
        name="one-point-reflexive",
        chron=lambda a, b: True,
        caus=lambda a, b: True,
        tau=lambda a, b: 1.0,
    )
    rep = audit_axioms(handle, [1], chains=[(1, 1, 1)])
    assert not rep.ok
    assert rep.diagonal and rep.diagonal[0]["tau"] == 1.0
    assert rep.reverse_triangle  # tau(x,x) + tau(x,x) > tau(x,x)


def test_finite_cyclic_space_tau_is_infinite_and_consistent():
    sp = FiniteCausalSpace([1, 2], [(1, 2), (2, 1)])
    handle = finite_handle(sp)
    assert math.isinf(sp.tau(1, 1)) and math.isinf(sp.tau(1, 2))
    # the diagonal dichotomy allows inf; chronology is what fails
    rep = audit_axioms(handle, sp.points)
    assert not rep.diagonal
    assert sp.rel_chron(1, 1)
