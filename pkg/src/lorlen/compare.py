"""Triangle-comparison machinery for synthetic curvature bounds.

A timelike geodesic triangle in a space handle is compared against the
triangle with the same side lengths in the constant-curvature model plane
M_K.  A lower curvature bound K demands tau(p, q) <= tau_model(p', q') for
all corresponding points (p', q' at the same time separation from the past
vertex of their sides); an upper bound demands the reverse inequality.

On top of the pointwise certifier this module provides branching detection
for maximizers, a cross-check coupling the two (no lower bound tolerates a
timelike branch point), and a curvature-singularity scan that sweeps a grid
of candidate bounds over a family of triangles.

Because the certifier samples finitely many comparison pairs, "consistent"
is always a statement about the sample; only "violated" verdicts are
conclusive (up to the stated tolerances).  Every report carries that caveat.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import (
    INF,
    PolylineCurve,
    PushUpReport,
    SpaceHandle,
    future_ordered_points,
    is_maximal,
    push_up_audit,
    reparametrize_by_tau,
    tau_length,
)
from .models import (
    SIDES,
    ModelTriangle,
    comparison_tau,
    realizable,
    realize_triangle,
)

__all__ = [
    "TriangleInstance", "build_triangle", "triangle_from_curves",
    "CurvatureWitness", "ComparisonVerdict", "certify_curvature_bound",
    "BranchReport", "detect_branching",
    "ConsistencyReport", "nonbranching_crosscheck",
    "ScanEntry", "SingularityReport", "singularity_scan",
    "flat_triangle_family", "lattice_triangle_family",
    "funnel_triangle_family", "schwarzschild_triangle_family",
]

SIDE_NAMES = ("xy", "yz", "xz")

#: Past vertex index (into (x, y, z)) of each side.
_PAST = {"xy": 0, "yz": 1, "xz": 0}
_FUTURE = {"xy": 1, "yz": 2, "xz": 2}

SAMPLING_NOTE = ("a 'consistent' verdict certifies the bound only on the "
                 "sampled comparison pairs; 'violated' is conclusive up to "
                 "the stated tolerances")

# Accuracy floor of the model-plane computations (triangle realization is
# verified to 1e-10 relative; separations of realized points carry the same
# conditioning).
_MODEL_TOL = 1e-10


# ---------------------------------------------------------------------------
# Triangle instances


@dataclass(frozen=True)
class TriangleInstance:
    """A geodesic triangle: three vertices joined by maximal sides.

    ``vertices`` is (x, y, z) in causal order; ``sides`` holds the three
    maximizing curves in the order (xy, yz, xz); ``side_lengths`` the
    separations (a, b, c) = (tau(x,y), tau(y,z), tau(x,z)).  Sides whose
    flag in ``timelike_sides`` is set are tau-parametrized: their curve
    parameter equals the time separation from the side's past vertex.
    """

    vertices: tuple
    sides: tuple
    side_lengths: tuple
    timelike_sides: tuple
    label: str = ""

    @property
    def a(self) -> float:
        return self.side_lengths[0]

    @property
    def b(self) -> float:
        return self.side_lengths[1]

    @property
    def c(self) -> float:
        return self.side_lengths[2]

    def side(self, name: str) -> PolylineCurve:
        return self.sides[SIDE_NAMES.index(name)]

    def side_length(self, name: str) -> float:
        return self.side_lengths[SIDE_NAMES.index(name)]

    def side_is_timelike(self, name: str) -> bool:
        return self.timelike_sides[SIDE_NAMES.index(name)]

    def describe(self) -> str:
        return self.label or f"triangle{tuple(self.vertices)!r}"


def triangle_from_curves(space: SpaceHandle, x, y, z, curves,
                         tol: float = 1e-9, label: str = "") -> TriangleInstance:
    """Assemble and validate a triangle from explicit side curves.

    ``curves`` maps side names (or the fixed order xy, yz, xz) to causal
    curves.  Each curve must run between the matching vertices, be maximal
    within ``tol`` (plus the backend error budget), and the side lengths
    must satisfy the reverse triangle inequality c >= a + b.  Timelike
    sides are reparametrized by time separation; sides containing a
    zero-separation step keep their parameters and are flagged non-timelike.
    """
    if isinstance(curves, dict):
        curve_list = [curves[name] for name in SIDE_NAMES]
    else:
        curve_list = list(curves)
    if len(curve_list) != 3:
        raise ValueError("a triangle needs exactly three side curves")
    verts = (x, y, z)

    if not (space.caus(x, y) and space.caus(y, z) and space.caus(x, z)):
        raise ValueError("vertices are not causally ordered x <= y <= z")
    if not (space.chron(x, y) or space.chron(y, z)):
        raise ValueError("inadmissible causal pattern: need x << y or y << z")

    lengths = []
    prepared = []
    timelike = []
    for name, curve in zip(SIDE_NAMES, curve_list):
        p_want = verts[_PAST[name]]
        q_want = verts[_FUTURE[name]]
        pts = future_ordered_points(curve)
        scale = max(1.0, space.dist(p_want, q_want))
        if space.dist(pts[0], p_want) > 1e-9 * scale or space.dist(pts[-1], q_want) > 1e-9 * scale:
            raise ValueError(f"side {name} does not join its vertices")
        report = is_maximal(space, curve, tol)
        if not report.maximal:
            raise ValueError(
                f"side {name} rejected: not maximal "
                f"(gap {report.gap:.3e} exceeds budget {report.tolerance:.3e})")
        lengths.append(report.endpoint_tau)
        try:
            prepared.append(reparametrize_by_tau(space, curve))
            timelike.append(True)
        except ValueError:
            prepared.append(curve)
            timelike.append(False)

    a, b, c = lengths
    slack = tol * max(1.0, c) + sum(space.tau_error_bound(v) for v in lengths)
    if a + b > c + slack:
        raise ValueError(
            f"side lengths violate the reverse triangle inequality: "
            f"a + b = {a + b} > c = {c}")
    return TriangleInstance(verts, tuple(prepared), (a, b, c), tuple(timelike), label)


def build_triangle(space: SpaceHandle, x, y, z,
                   tol: float = 1e-9, label: str = "") -> TriangleInstance:
    """Build a triangle whose sides are the backend's own maximizers."""
    if space.maximizer is None:
        raise ValueError(f"backend {space.name!r} provides no maximizers")
    curves = {}
    verts = (x, y, z)
    for name in SIDE_NAMES:
        curves[name] = space.maximizer(verts[_PAST[name]], verts[_FUTURE[name]])
    return triangle_from_curves(space, x, y, z, curves, tol=tol, label=label)


# ---------------------------------------------------------------------------
# Curvature-bound certification


@dataclass(frozen=True)
class CurvatureWitness:
    """A comparison pair at which the required inequality fails."""

    triangle: TriangleInstance
    side_p: str
    s_p: float
    side_q: str
    s_q: float
    p: object
    q: object
    tau: float
    tau_model: float
    margin: float
    slack: float


@dataclass(frozen=True)
class ComparisonVerdict:
    """Outcome of certifying one curvature bound over a triangle sample."""

    K: float
    side_of_bound: str
    mode: str
    status: str  # "consistent" | "violated"
    samples: int
    evaluated: int
    skipped: tuple
    witness: CurvatureWitness | None
    max_discrepancy: float
    points_per_side: int
    tol: float
    note: str = SAMPLING_NOTE


def _interior_samples(curve: PolylineCurve, n: int) -> list:
    """Up to n (separation-from-start, point) samples, endpoints excluded.

    Targets are equally spaced separations; each snaps to the nearest curve
    sample so that the reported separation is exact on the curve's own
    tau-parametrization.
    """
    params = np.asarray(curve.params, dtype=float)
    pts = future_ordered_points(curve)
    if not curve.future_directed:
        params = params[::-1] * -1.0  # future order with increasing values
        params = params - params[0]
    total = params[-1] - params[0]
    if len(pts) < 3 or total <= 0.0:
        return []
    picked = []
    seen = set()
    for j in range(1, n + 1):
        target = params[0] + total * j / (n + 1)
        i = int(np.argmin(np.abs(params - target)))
        i = min(max(i, 1), len(pts) - 2)
        if i not in seen:
            seen.add(i)
            picked.append((float(params[i] - params[0]), pts[i]))
    return picked


def certify_curvature_bound(space: SpaceHandle, triangles, K: float,
                            side: str, mode: str = "timelike",
                            points_per_side: int = 9,
                            tol: float = 1e-9) -> ComparisonVerdict:
    """Certify or refute 'curvature bounded below/above by K' on a sample.

    For each realizable triangle the comparison triangle is built in M_K and
    corresponding points are matched by equal time separation from the past
    vertex of each side, at ``points_per_side`` equally spaced separations
    excluding the endpoints.  A lower bound requires tau <= tau_model on
    every pair, an upper bound tau >= tau_model.  A violation counts only
    when its margin exceeds tol plus the backend's tau error budget plus the
    model accuracy floor; the worst such witness is reported.

    Unrealizable triangles are skipped with the realizability reason; in
    timelike mode a triangle whose side cannot be tau-parametrized is
    skipped as well.  In causal mode points are drawn from timelike sides
    only and pairs with zero model separation are not compared.
    """
    if side not in ("below", "above"):
        raise ValueError(f"side must be 'below' or 'above', got {side!r}")
    if mode not in ("timelike", "causal"):
        raise ValueError(f"mode must be 'timelike' or 'causal', got {mode!r}")
    if points_per_side < 1:
        raise ValueError("points_per_side must be at least 1")
    triangles = list(triangles)

    skipped = []
    samples = 0
    evaluated = 0
    max_disc = 0.0
    worst: CurvatureWitness | None = None

    causal = mode == "causal"
    for tri in triangles:
        a, b, c = tri.side_lengths
        ok, why = realizable(K, a, b, c, causal=causal)
        if not ok:
            skipped.append((tri.describe(), f"size bounds: {why}"))
            continue
        if not causal and not all(tri.timelike_sides):
            skipped.append((tri.describe(), "a side is not timelike"))
            continue
        model = realize_triangle(K, a, b, c, causal=causal)
        evaluated += 1

        per_side = {}
        for name in SIDE_NAMES:
            if tri.side_length(name) <= 0.0 or not tri.side_is_timelike(name):
                continue
            per_side[name] = _interior_samples(tri.side(name), points_per_side)

        entries = [(name, s, pt) for name, sampled in per_side.items()
                   for s, pt in sampled]
        for (name_p, s_p, p), (name_q, s_q, q) in itertools.permutations(entries, 2):
            tau_model = comparison_tau(model, name_p, s_p, name_q, s_q)
            if causal and tau_model == 0.0:
                continue
            samples += 1
            tau_real = space.tau(p, q)
            if math.isfinite(tau_real):
                max_disc = max(max_disc, abs(tau_real - tau_model))
            defect = tau_real - tau_model if side == "below" else tau_model - tau_real
            if not defect > 0.0:
                continue
            ref = tau_model if math.isinf(tau_real) else tau_real
            slack = tol + space.tau_error_bound(ref) + _MODEL_TOL * max(1.0, tau_model)
            if defect > slack and (worst is None or defect > worst.margin):
                worst = CurvatureWitness(tri, name_p, s_p, name_q, s_q, p, q,
                                         tau_real, tau_model, defect, slack)

    status = "violated" if worst is not None else "consistent"
    return ComparisonVerdict(K, side, mode, status, samples, evaluated,
                             tuple(skipped), worst, max_disc,
                             points_per_side, tol)


# ---------------------------------------------------------------------------
# Branching detection


@dataclass(frozen=True)
class BranchReport:
    """Whether two maximizers from a common start share a segment then split."""

    branches: bool
    branch_point: object | None
    branch_index: int | None
    timelike: bool | None
    shared_tau_length: float | None
    reason: str
    shared_points: tuple = ()


def _all_steps_chron(space: SpaceHandle, pts) -> bool:
    """Every consecutive step chronological (hence, by transitivity, all pairs)."""
    return all(space.chron(p, q) for p, q in zip(pts, pts[1:]))


def detect_branching(space: SpaceHandle, x, y1, y2,
                     tol: float | None = None) -> BranchReport:
    """Look for a branch point of the maximizers x -> y1 and x -> y2.

    The curves branch when they agree on an initial segment containing at
    least two distinct points and afterwards stay apart; the last shared
    point is the branch point.  Point identity is decided by the space's
    metric within ``tol`` (default: the backend's resolution floor, or 1e-9
    for exact backends).  The branch is classified timelike when the shared
    segment and both tails consist of chronological steps throughout.
    """
    if space.maximizer is None:
        raise ValueError(f"backend {space.name!r} provides no maximizers")
    cell = tol if tol is not None else (space.resolution_floor or 1e-9)
    g1 = future_ordered_points(space.maximizer(x, y1))
    g2 = future_ordered_points(space.maximizer(x, y2))
    if space.dist(g1[0], g2[0]) > cell:
        raise ValueError("the maximizers do not start at a common point")

    m = 0
    for p, q in zip(g1, g2):
        if space.dist(p, q) > cell:
            break
        m += 1
    shared = g1[:m]
    if m < 2:
        return BranchReport(False, None, None, None, None,
                            "no common initial segment beyond the start point")
    metric_len = math.fsum(space.dist(p, q) for p, q in zip(shared, shared[1:]))
    if metric_len <= cell:
        return BranchReport(False, None, None, None, None,
                            "shared segment has no extent (coincident points)")
    if m == len(g1) or m == len(g2):
        return BranchReport(False, None, None, None, None,
                            "one maximizer is an initial segment of the other")

    # the tails must meet only at the branch point
    for i, p in enumerate(g1[m:], start=m):
        for q in g2[m:]:
            if space.dist(p, q) <= cell:
                return BranchReport(False, None, None, None, None,
                                    f"tails re-intersect away from the split (index {i})")

    b = shared[-1]
    timelike = (_all_steps_chron(space, shared)
                and _all_steps_chron(space, g1[m - 1:])
                and _all_steps_chron(space, g2[m - 1:]))
    shared_curve = PolylineCurve(tuple(range(m)), tuple(shared), True)
    shared_tau = tau_length(space, shared_curve)
    return BranchReport(True, b, m - 1, timelike, shared_tau,
                        "maximizers share an initial segment and then separate",
                        tuple(shared))


# ---------------------------------------------------------------------------
# Non-branching cross-check


@dataclass(frozen=True)
class ConsistencyReport:
    """Joint outcome of a lower-bound certification and branching queries.

    Maximal timelike curves cannot branch in a space whose timelike
    curvature is bounded below, so a sample that looks consistent with some
    lower bound while also exhibiting a timelike branch point is flagged:
    either the sample is too coarse or no lower bound actually holds, and
    the configuration should be re-tested at finer resolution or swept over
    a curvature grid.
    """

    K: float
    verdict: ComparisonVerdict
    branch_reports: tuple
    timelike_branch_found: bool
    contradiction: bool
    note: str


def nonbranching_crosscheck(space: SpaceHandle, K: float, triangles,
                            branch_queries, mode: str = "timelike",
                            points_per_side: int = 9, tol: float = 1e-9,
                            branch_tol: float | None = None) -> ConsistencyReport:
    """Certify a lower bound and search for timelike branch points.

    ``branch_queries`` is a sequence of (x, y1, y2) triples handed to
    :func:`detect_branching`.  The report's ``contradiction`` flag is set
    when the bound looks consistent on the triangle sample while a timelike
    branch point exists — an impossible combination in exact arithmetic.
    """
    verdict = certify_curvature_bound(space, triangles, K, "below", mode,
                                      points_per_side, tol)
    reports = tuple(detect_branching(space, x, y1, y2, branch_tol)
                    for (x, y1, y2) in branch_queries)
    found = any(r.branches and r.timelike for r in reports)
    contradiction = verdict.status == "consistent" and found
    if contradiction:
        note = ("timelike branch point found although the sampled triangles "
                "are consistent with the lower bound: the sample is too "
                "coarse or no lower curvature bound holds; re-test at finer "
                "resolution or scan the curvature grid")
    elif found:
        note = "timelike branching present and the lower bound is already refuted"
    else:
        note = "no timelike branching found"
    return ConsistencyReport(K, verdict, reports, found, contradiction, note)


# ---------------------------------------------------------------------------
# Curvature-singularity scan


@dataclass(frozen=True)
class ScanEntry:
    K: float
    below: ComparisonVerdict
    above: ComparisonVerdict


@dataclass(frozen=True)
class SingularityReport:
    """Sweep of candidate curvature bounds over a triangle family.

    ``unbounded_below`` is set when every K in the grid is violated on the
    below side: no real lower curvature bound survives the family, i.e. the
    sampled region contains a curvature singularity in the timelike
    comparison sense.  When push-up triples are supplied and any of them
    fails, ``causal_upper_excluded`` records that no upper causal curvature
    bound can hold either, since such a bound forces push-up.
    """

    K_grid: tuple
    entries: tuple
    unbounded_below: bool
    witnesses: tuple
    family_size: int
    pushup: PushUpReport | None
    causal_upper_excluded: bool | None
    note: str


def singularity_scan(space: SpaceHandle, family, K_grid,
                     mode: str = "timelike", points_per_side: int = 9,
                     tol: float = 1e-9, pushup_triples=None) -> SingularityReport:
    """Test every curvature bound in ``K_grid`` against a triangle family.

    Each K is certified on both bound sides over the whole family.  The
    family must be non-empty.  Optional ``pushup_triples`` (p, q, r) are
    audited; a push-up failure among them rules out upper causal curvature
    bounds on the sampled region independently of the triangle sweep.
    """
    triangles = list(family)
    if not triangles:
        raise ValueError("empty triangle family")
    grid = tuple(float(K) for K in K_grid)
    if not grid:
        raise ValueError("empty curvature grid")

    entries = []
    witnesses = []
    for K in grid:
        below = certify_curvature_bound(space, triangles, K, "below", mode,
                                        points_per_side, tol)
        above = certify_curvature_bound(space, triangles, K, "above", mode,
                                        points_per_side, tol)
        entries.append(ScanEntry(K, below, above))
        if below.witness is not None:
            witnesses.append(below.witness)

    unbounded = all(e.below.status == "violated" for e in entries)

    pushup = None
    causal_excluded = None
    if pushup_triples is not None:
        pushup = push_up_audit(space, list(pushup_triples))
        causal_excluded = not pushup.ok

    if unbounded:
        note = ("every candidate lower bound in the grid is violated: "
                "timelike curvature is unbounded below on the sampled family")
    else:
        kept = [e.K for e in entries if e.below.status == "consistent"]
        note = (f"lower bounds not refuted by this family: {kept}; "
                f"{SAMPLING_NOTE}")
    if causal_excluded:
        note += ("; a push-up failure was recorded, which is incompatible "
                 "with causal curvature bounded above on the sampled region")
    return SingularityReport(grid, tuple(entries), unbounded, tuple(witnesses),
                             len(triangles), pushup, causal_excluded, note)


# ---------------------------------------------------------------------------
# Triangle families


def flat_triangle_family(n: int = 6, seed: int = 20240811,
                         dim_handle: SpaceHandle | None = None):
    """Deterministic family of timelike triangles in the exact flat plane.

    Returns (handle, triangles).  Vertices are drawn well inside the cones
    so that every side is timelike with comfortable margins.
    """
    from .spacetimes import minkowski_handle

    handle = dim_handle or minkowski_handle(2)
    rng = np.random.default_rng(seed)
    triangles = []
    for i in range(n):
        x = (0.0, float(rng.uniform(-0.2, 0.2)))
        y = (float(rng.uniform(0.5, 0.8)), x[1] + float(rng.uniform(-0.25, 0.25)))
        z = (y[0] + float(rng.uniform(0.6, 0.9)), y[1] + float(rng.uniform(-0.3, 0.3)))
        triangles.append(build_triangle(handle, x, y, z, label=f"flat-{i}"))
    return handle, triangles


def lattice_triangle_family(lattice, triples):
    """Triangles over lattice nodes, sides extracted from the lattice DP."""
    handle = lattice.handle()
    return [build_triangle(handle, x, y, z, label=f"lattice-{i}")
            for i, (x, y, z) in enumerate(triples)]


def funnel_triangle_family(funnel=None, n: int = 6):
    """Triangles straddling a causal funnel's trunk.

    Returns (handle, triangles).  Vertices x << y sit in the past cone (y
    off the axis) and z in the future cone, so the yz and xz sides both run
    through the whole trunk.  Sizes are kept small enough that the side
    lengths satisfy the realizability bounds for every |K| <= 10.
    """
    from .spacetimes import Funnel, funnel_handle

    f = funnel or Funnel()
    handle = funnel_handle(f)
    triangles = []
    for i in range(n):
        u = i / max(1, n - 1)
        x = ("past", -0.30 - 0.02 * u, 0.0)
        y = ("past", -0.15 - 0.01 * u, 0.075 * (1.0 - 0.4 * u))
        z = ("future", 0.25 - 0.03 * u, 0.0)
        triangles.append(build_triangle(handle, x, y, z, label=f"funnel-{i}"))
    return handle, triangles


def schwarzschild_triangle_family(M: float = 1.0,
                                  ladder=((0.5, tuple(range(1, 21))),
                                          (0.05, (8, 12, 16, 20)))):
    """Interior-leaf triangle family shrinking toward the central singularity.

    Returns (handle, triangles, records).  For each constant C the vertices
    follow the pregeodesic construction of :func:`spacetimes.schwarzschild_family`
    with k running over the given list; shrinking C scales the whole family
    toward r = 0, which is what lets the sweep refute large-|K| bounds whose
    size restrictions the bigger triangles cannot meet.
    """
    from .spacetimes import (interior_handle, interior_side_curves,
                             schwarzschild_family)

    handle = interior_handle(M)
    triangles = []
    records = []
    for C, ks in ladder:
        for k in ks:
            rec = schwarzschild_family(M, C, k)
            records.append(rec)
            curves = interior_side_curves(rec)
            tri = triangle_from_curves(handle, rec.x, rec.y, rec.z, curves,
                                       label=f"schwarzschild C={C:g} k={k}")
            triangles.append(tri)
    return handle, triangles, records
