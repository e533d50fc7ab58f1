"""Finite causal spaces: chains, links, geodesics, and order topologies.

A finite causal space is a finite point set with a chronology relation <<
and a causality relation <=, both stored transitively closed.  The time
separation counts edges of the longest <<-chain, which makes every finite
causal space a pre-length space candidate (the audits report if it is not
one).  Cycles in << force infinite separations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import PushUpReport, SpaceHandle, audit_axioms, push_up_audit
from .exttime import INF


def _transitive_closure(pairs: set, points: Sequence) -> set:
    """Closure of a relation under transitivity (fixed-point iteration)."""
    succ = {p: set() for p in points}
    for a, b in pairs:
        succ[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in points:
            new = set()
            for b in succ[a]:
                new |= succ[b]
            if not new <= succ[a]:
                succ[a] |= new
                changed = True
    return {(a, b) for a in points for b in succ[a]}


class FiniteCausalSpace:
    """Finite point set with transitively closed << and <= relations."""

    def __init__(self, points: Sequence, chron: Iterable[tuple], leq: Iterable[tuple] = ()):
        self.points = tuple(points)
        pset = set(self.points)
        if len(pset) != len(self.points):
            raise ValueError("duplicate points")
        chron = set(map(tuple, chron))
        leq = set(map(tuple, leq))
        for a, b in chron | leq:
            if a not in pset or b not in pset:
                raise ValueError(f"relation pair ({a!r}, {b!r}) uses unknown points")
        self.chron = frozenset(_transitive_closure(chron, self.points))
        # <= is reflexive and contains <<
        base = chron | leq | {(p, p) for p in self.points}
        self.caus = frozenset(_transitive_closure(base, self.points))
        self._tau_table = self._build_tau_table()

    # -- relations ---------------------------------------------------------

    def rel_chron(self, a, b) -> bool:
        return (a, b) in self.chron

    def rel_caus(self, a, b) -> bool:
        return (a, b) in self.caus

    def chron_future(self, x) -> frozenset:
        return frozenset(b for (a, b) in self.chron if a == x)

    def chron_past(self, x) -> frozenset:
        return frozenset(a for (a, b) in self.chron if b == x)

    def interval(self, x, y) -> frozenset:
        """Open chronological diamond I(x, y) = I+(x) & I-(y)."""
        return self.chron_future(x) & self.chron_past(y)

    # -- time separation ----------------------------------------------------

    def _build_tau_table(self) -> dict:
        cyclic = {p for p in self.points if (p, p) in self.chron}
        succ = {p: [q for q in self.points if (p, q) in self.chron and q not in cyclic]
                for p in self.points}

        table = {}
        for x, y in itertools.product(self.points, repeat=2):
            if x == y:
                table[(x, y)] = INF if x in cyclic else 0.0
                continue
            if (x, y) not in self.chron:
                table[(x, y)] = 0.0
                continue
            through_cycle = any(
                c in cyclic and (x == c or (x, c) in self.chron)
                and (c == y or (c, y) in self.chron)
                for c in self.points)
            if through_cycle:
                table[(x, y)] = INF
                continue
            # longest chain from x to y, counted in edges (acyclic here)
            memo = {}

            def chain_to_y(p):
                if p == y:
                    return 0
                if p in memo:
                    return memo[p]
                best_p = None
                for q in succ[p]:
                    if q == y or (q, y) in self.chron:
                        sub = chain_to_y(q)
                        if sub is not None and (best_p is None or 1 + sub > best_p):
                            best_p = 1 + sub
                memo[p] = best_p
                return best_p

            table[(x, y)] = float(chain_to_y(x))
        return table

    def tau(self, x, y) -> float:
        """Edges of the longest <<-chain from x to y (0 if unrelated, inf on cycles)."""
        return self._tau_table[(x, y)]

    def chain_length(self, chain: Sequence) -> int:
        """Number of vertices of a chain (the classical chain length l(C))."""
        for a, b in zip(chain, chain[1:]):
            if (a, b) not in self.chron:
                raise ValueError(f"not a chain: {a!r} << {b!r} fails")
        return len(chain)


def finite_handle(space: FiniteCausalSpace, name: str = "finite",
                  backend: str = "finite") -> SpaceHandle:
    """Wrap a finite causal space as an exact space handle.

    The auxiliary distance is the discrete metric.
    """
    return SpaceHandle(
        name=name,
        backend=backend,
        exactness="exact",
        chron=space.rel_chron,
        caus=space.rel_caus,
        tau=space.tau,
        dist=lambda a, b: 0.0 if a == b else 1.0,
        position=lambda p: (p,),
    )


# ---------------------------------------------------------------------------
# Links, paths, geodesics


@dataclass(frozen=True)
class GeodesicReport:
    source: object
    target: object
    links: tuple            # all links (u, v) of the space
    n_link_paths: int       # link-paths from source to target
    geodesics: tuple        # maximal-length link-paths, as vertex tuples
    length_vertices: int    # l(C): vertex count of the geodesics (0 if none)

    @property
    def length_edges(self) -> int:
        return max(0, self.length_vertices - 1)


def space_links(space: FiniteCausalSpace) -> tuple:
    """Pairs x << y whose chronological diamond I(x, y) is empty."""
    return tuple((x, y) for (x, y) in sorted(space.chron, key=str)
                 if x != y and not space.interval(x, y))


def causal_set_geodesics(space: FiniteCausalSpace, x, y) -> GeodesicReport:
    """Geodesics from x to y: link-paths of maximal vertex count.

    A link-path steps only along links (relations with empty diamond); among
    all link-paths from x to y the geodesics are those with the most
    vertices.  A diamond poset therefore has two geodesics of three vertices
    between its extremes.
    """
    links = space_links(space)
    succ = {}
    for a, b in links:
        succ.setdefault(a, []).append(b)

    paths = []

    def extend(path):
        tip = path[-1]
        if tip == y:
            paths.append(tuple(path))
            return
        for nxt in succ.get(tip, ()):
            if nxt == y or space.rel_chron(nxt, y):
                extend(path + [nxt])

    if x == y:
        paths.append((x,))
    else:
        extend([x])
    if not paths:
        return GeodesicReport(x, y, links, 0, (), 0)
    best = max(len(p) for p in paths)
    geos = tuple(p for p in paths if len(p) == best)
    return GeodesicReport(x, y, links, len(paths), geos, best)


# ---------------------------------------------------------------------------
# Order topologies


def _generate_topology(n: int, subbase_masks: Iterable[int]) -> frozenset:
    """All opens generated by a subbase on n points, as bitmasks."""
    full = (1 << n) - 1
    base = {0, full}
    base |= set(subbase_masks)
    # close under pairwise intersection: finite intersections of the subbase
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(base), 2):
            m = a & b
            if m not in base:
                base.add(m)
                changed = True
    # arbitrary unions of base members
    opens = set(base)
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(opens), 2):
            m = a | b
            if m not in opens:
                opens.add(m)
                changed = True
    return frozenset(opens)


@dataclass(frozen=True)
class TopologyReport:
    points: tuple
    diamonds: tuple            # nonempty I(x, y), as frozensets
    rays: tuple                # nonempty I+(x) and I-(x), as frozensets
    diamonds_cover: bool
    rays_cover: bool
    uncovered_by_diamonds: tuple
    uncovered_by_rays: tuple
    ray_base_failures: tuple   # points where rays fail the neighborhood-base test
    ray_base_witnesses: tuple  # (point, ray_a, ray_b, intersection) per failure
    alexandrov: tuple          # topology generated by diamonds (sorted frozensets)
    interval: tuple            # topology generated by rays    (sorted frozensets)
    alexandrov_subset_interval: bool
    strictly_coarser: bool     # alexandrov a proper subset of interval


def topology_report(space: FiniteCausalSpace) -> TopologyReport:
    """Compare the diamond-generated and ray-generated order topologies.

    The diamond family uses the sets I(x, y); the ray family uses the sets
    I+(x) and I-(x).  The report records which family covers the space,
    where the ray family fails to be a base (a point in an intersection of
    two rays that contains no ray around the point), and whether the
    diamond topology is strictly coarser than the ray topology.
    """
    pts = space.points
    n = len(pts)
    index = {p: i for i, p in enumerate(pts)}

    def mask(subset):
        m = 0
        for p in subset:
            m |= 1 << index[p]
        return m

    def unmask(m):
        return frozenset(p for p in pts if m & (1 << index[p]))

    diamonds = {mask(space.interval(x, y)) for x, y in itertools.product(pts, repeat=2)}
    diamonds.discard(0)
    rays = set()
    for p in pts:
        rays.add(mask(space.chron_future(p)))
        rays.add(mask(space.chron_past(p)))
    rays.discard(0)

    full = (1 << n) - 1
    d_union = 0
    for m in diamonds:
        d_union |= m
    r_union = 0
    for m in rays:
        r_union |= m

    failures = []
    witnesses = []
    ray_list = sorted(rays, key=lambda m: (bin(m).count("1"), m))
    for p in pts:
        bit = 1 << index[p]
        holding = [m for m in ray_list if m & bit]
        for a, b in itertools.combinations(holding, 2):
            inter = a & b
            if not any(m & bit and (m & ~inter) == 0 for m in ray_list):
                failures.append(p)
                witnesses.append((p, unmask(a), unmask(b), unmask(inter)))
                break

    alex = _generate_topology(n, diamonds)
    intv = _generate_topology(n, rays)

    def family(masks):
        return tuple(sorted((unmask(m) for m in masks), key=lambda s: (len(s), sorted(map(str, s)))))

    return TopologyReport(
        points=pts,
        diamonds=family(diamonds),
        rays=family(rays),
        diamonds_cover=d_union == full,
        rays_cover=r_union == full,
        uncovered_by_diamonds=tuple(p for p in pts if not d_union & (1 << index[p])),
        uncovered_by_rays=tuple(p for p in pts if not r_union & (1 << index[p])),
        ray_base_failures=tuple(failures),
        ray_base_witnesses=tuple(witnesses),
        alexandrov=family(alex),
        interval=family(intv),
        alexandrov_subset_interval=alex <= intv,
        strictly_coarser=alex < intv,
    )


# ---------------------------------------------------------------------------
# Causal ladder rungs and axiom verification


@dataclass(frozen=True)
class LadderReport:
    chronological: bool             # << has no loops
    causal: bool                    # <= is antisymmetric
    chron_loop_witnesses: tuple     # points with x << x
    caus_cycle_witnesses: tuple     # pairs x <= y <= x with x != y


def ladder_report(space: FiniteCausalSpace) -> LadderReport:
    """Lowest rungs of the causal ladder for a finite space."""
    loops = tuple(p for p in space.points if (p, p) in space.chron)
    cycles = tuple((a, b) for a, b in space.caus
                   if a != b and (b, a) in space.caus and str(a) <= str(b))
    return LadderReport(not loops, not cycles, loops, cycles)


@dataclass(frozen=True)
class FiniteAuditReport:
    audit: object               # AuditReport from core.audit_axioms
    push_up: PushUpReport
    chron_within_caus: tuple    # pairs with x << y but not x <= y

    @property
    def ok(self) -> bool:
        return self.audit.ok and self.push_up.ok and not self.chron_within_caus


def verify_pls(space: FiniteCausalSpace, name: str = "finite") -> FiniteAuditReport:
    """Exhaustively audit the pre-length-space axioms on a finite space."""
    handle = finite_handle(space, name)
    audit = audit_axioms(handle, space.points, max_triples=10 ** 6)
    triples = [t for t in itertools.permutations(space.points, 3)]
    push = push_up_audit(handle, triples)
    not_contained = tuple((a, b) for a, b in space.chron if (a, b) not in space.caus)
    return FiniteAuditReport(audit, push, not_contained)


# ---------------------------------------------------------------------------
# Text format


def parse_finite_space(text: str) -> FiniteCausalSpace:
    """Parse the plain-text description of a finite causal space.

    Format: a ``points N`` line (labels are 1..N), then relation lines
    ``a b``.  Lines under an optional ``leq`` header add causal-only
    relations; lines before it (optionally under a ``chron`` header) are
    chronological.  ``#`` starts a comment.
    """
    points = None
    chron, leq = [], []
    section = "chron"
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("points"):
            parts = low.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise ValueError(f"line {lineno}: expected 'points N'")
            points = tuple(range(1, int(parts[1]) + 1))
            continue
        if low == "chron":
            section = "chron"
            continue
        if low == "leq":
            section = "leq"
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'a b', got {raw!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: labels must be integers") from exc
        (chron if section == "chron" else leq).append((a, b))
    if points is None:
        raise ValueError("missing 'points N' line")
    return FiniteCausalSpace(points, chron, leq)


def seven_point_space() -> FiniteCausalSpace:
    """Seven points whose diamond topology is strictly coarser than the ray topology.

    The only nonempty diamond is I(1, 2) = {6, 7}; the diamonds do not cover
    the space, the rays do, and the ray family fails the base test exactly at
    the two diamond points.
    """
    return FiniteCausalSpace(range(1, 8), [(1, 6), (1, 7), (6, 2), (7, 2), (3, 4), (3, 5)])


def two_point_space() -> FiniteCausalSpace:
    """Two chronologically related points: trivial diamond topology, discrete ray topology."""
    return FiniteCausalSpace((1, 2), [(1, 2)])
