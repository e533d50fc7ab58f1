"""Core causal-space interface: space handles, polyline curves, tau-length.

A *space handle* bundles the four oracles of a Lorentzian pre-length space
(chronology, causality, time separation, auxiliary distance) over an opaque
point type.  Everything downstream — curve length, causal character,
maximality, axiom audits — is written against handles, so finite orders,
constant-curvature model planes, exact coordinate patches and discrete causal
lattices all share one code path.

Time separation values are extended reals in [0, inf] (see
:mod:`lorlen.exttime`).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .exttime import INF, ext_add, is_valid

Point = Any

#: Allowed values of :attr:`SpaceHandle.backend`.
BACKENDS = ("finite", "causal-set", "lattice-spacetime", "model-space", "restricted-subset")

#: Verdicts of :func:`causal_character`.
CausalCharacter = str  # "timelike" | "null" | "mixed"


@dataclass(frozen=True)
class SpaceHandle:
    """Oracle bundle for one space.

    ``chron``/``caus`` decide x << y and x <= y; ``tau`` returns the time
    separation in [0, inf]; ``dist`` the auxiliary metric distance.  Exactness
    is "exact" for closed-form/quadrature-grade oracles and
    "lower-approximate" for lattice backends, whose tau never exceeds the true
    value.  ``tau_rel_error``/``tau_abs_error`` bound the backend's tau error;
    ``resolution_floor`` is the scale below which a lower-approximate backend
    cannot certify chronology (used by the audits as a positivity guard).
    ``maximizer``, when present, returns a maximizing PolylineCurve between
    two causally related points.  ``position`` maps a point to coordinates for
    reporting.
    """

    name: str
    backend: str
    exactness: str
    chron: Callable[[Point, Point], bool]
    caus: Callable[[Point, Point], bool]
    tau: Callable[[Point, Point], float]
    dist: Callable[[Point, Point], float]
    tau_rel_error: float = 0.0
    tau_abs_error: float = 0.0
    resolution_floor: float = 0.0
    maximizer: Callable[[Point, Point], "PolylineCurve"] | None = None
    position: Callable[[Point], tuple] = field(default=lambda p: tuple(p) if isinstance(p, (tuple, list)) else (p,))

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}; expected one of {BACKENDS}")
        if self.exactness not in ("exact", "lower-approximate"):
            raise ValueError(f"exactness must be 'exact' or 'lower-approximate', got {self.exactness!r}")

    def tau_error_bound(self, value: float) -> float:
        """Additive error budget for a reported tau of the given size."""
        if math.isinf(value):
            return 0.0
        noise = 1e-12 * max(1.0, abs(value))  # float roundoff allowance
        return self.tau_rel_error * abs(value) + self.tau_abs_error + noise


@dataclass(frozen=True)
class PolylineCurve:
    """Sampled causal curve: strictly increasing parameters, opaque points.

    ``future_directed`` states whether the points are listed past-to-future
    (True) or future-to-past (False).
    """

    params: tuple
    points: tuple
    future_directed: bool = True

    def __post_init__(self):
        if len(self.params) != len(self.points):
            raise ValueError("params and points must have equal length")
        if len(self.points) < 2:
            raise ValueError("a polyline curve needs at least two samples")
        for a, b in zip(self.params, self.params[1:]):
            if not (b > a):
                raise ValueError("curve parameters must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)


def polyline(points: Sequence[Point], params: Sequence[float] | None = None,
             future_directed: bool = True) -> PolylineCurve:
    """Convenience constructor; default parameters are 0, 1, 2, ..."""
    pts = tuple(points)
    if params is None:
        params = tuple(float(i) for i in range(len(pts)))
    return PolylineCurve(tuple(float(t) for t in params), pts, future_directed)


def future_ordered_points(curve: PolylineCurve) -> tuple:
    """Points of the curve listed past-to-future."""
    return curve.points if curve.future_directed else curve.points[::-1]


def check_causal(space: SpaceHandle, curve: PolylineCurve) -> int | None:
    """Index of the first consecutive pair that is not causally ordered, else None."""
    pts = future_ordered_points(curve)
    for i in range(len(pts) - 1):
        if not space.caus(pts[i], pts[i + 1]):
            return i
    return None


def segment_taus(space: SpaceHandle, curve: PolylineCurve) -> list[float]:
    """Time separations of consecutive samples (curve must be causal)."""
    bad = check_causal(space, curve)
    if bad is not None:
        raise ValueError(f"curve is not causal: samples {bad} and {bad + 1} are not related")
    pts = future_ordered_points(curve)
    taus = []
    for a, b in zip(pts, pts[1:]):
        t = space.tau(a, b)
        if not is_valid(t):
            raise ValueError(f"tau oracle returned invalid value {t!r}")
        taus.append(t)
    return taus


def tau_length(space: SpaceHandle, curve: PolylineCurve) -> float:
    """Tau-length of the sampled curve: the sum of consecutive separations.

    The reverse triangle inequality makes partition sums non-increasing under
    refinement, so the finest available partition (all samples) is the best
    estimate of the infimum over partitions.  Returns inf if any segment has
    infinite separation.
    """
    taus = segment_taus(space, curve)
    if any(math.isinf(t) for t in taus):
        return INF
    return math.fsum(taus)


@dataclass(frozen=True)
class CharacterReport:
    verdict: CausalCharacter
    n_pairs: int
    n_chron: int
    table: tuple  # ((i, j, chron?), ...) over ordered sample pairs i < j (future order)


def causal_character(space: SpaceHandle, curve: PolylineCurve) -> CharacterReport:
    """Classify a causal curve as timelike / null / mixed.

    Timelike means every ordered pair of samples is chronologically related;
    null means no pair is; anything else is mixed.
    """
    bad = check_causal(space, curve)
    if bad is not None:
        raise ValueError(f"curve is not causal: samples {bad} and {bad + 1} are not related")
    pts = future_ordered_points(curve)
    table = []
    n_chron = 0
    for i, j in itertools.combinations(range(len(pts)), 2):
        c = bool(space.chron(pts[i], pts[j]))
        n_chron += c
        table.append((i, j, c))
    n_pairs = len(table)
    if n_chron == n_pairs:
        verdict = "timelike"
    elif n_chron == 0:
        verdict = "null"
    else:
        verdict = "mixed"
    return CharacterReport(verdict, n_pairs, n_chron, tuple(table))


@dataclass(frozen=True)
class MaximalityReport:
    maximal: bool
    length: float
    endpoint_tau: float
    gap: float
    tolerance: float


def is_maximal(space: SpaceHandle, curve: PolylineCurve, tol: float = 1e-9) -> MaximalityReport:
    """Whether the curve attains the time separation of its endpoints.

    The comparison is |L_tau - tau(ends)| <= tol*max(1, tau(ends)) plus the
    backend's tau error budget.
    """
    pts = future_ordered_points(curve)
    ends = space.tau(pts[0], pts[-1])
    if math.isinf(ends):
        raise ValueError("endpoint separation is infinite; maximality is undefined")
    length = tau_length(space, curve)
    gap = ends - length
    budget = tol * max(1.0, ends) + space.tau_error_bound(ends)
    return MaximalityReport(abs(gap) <= budget, length, ends, gap, budget)


def reparametrize_by_tau(space: SpaceHandle, curve: PolylineCurve) -> PolylineCurve:
    """Reparametrize by cumulative tau-length (tau-arclength).

    Fails on zero-separation sub-segments (the curve is not rectifiable there)
    and on infinite separations.  On a maximal timelike curve the new
    parameters satisfy tau(lambda(s1), lambda(s2)) = s2 - s1.
    """
    taus = segment_taus(space, curve)
    if any(math.isinf(t) for t in taus):
        raise ValueError("cannot reparametrize: a segment has infinite separation")
    prefix = [0.0]
    for k, t in enumerate(taus):
        if t <= 0.0:
            raise ValueError(f"cannot reparametrize: segment {k} has zero tau (not rectifiable)")
        prefix.append(ext_add(prefix[-1], t))
    pts = future_ordered_points(curve)
    return PolylineCurve(tuple(prefix), pts, True)


# ---------------------------------------------------------------------------
# Axiom audits


@dataclass(frozen=True)
class AuditReport:
    """Outcome of :func:`audit_axioms`: violation witnesses per axiom."""

    space: str
    n_points: int
    n_pairs: int
    n_triples: int
    reverse_triangle: tuple   # ({'x','y','z','tau_xy','tau_yz','tau_xz','deficit'}, ...)
    positivity: tuple         # ({'p','q','tau','chron'}, ...)
    diagonal: tuple           # ({'x','tau'}, ...)
    lower_semicontinuity: tuple  # ({'index','tau_limit','tau_tail_max','deficit'}, ...)
    tolerance: float
    positivity_floor: float

    @property
    def ok(self) -> bool:
        return not (self.reverse_triangle or self.positivity or self.diagonal
                    or self.lower_semicontinuity)


def _causal_triples(space, points, rng, cap):
    """Sampled causally ordered triples among the given points."""
    triples = []
    idx = list(range(len(points)))
    all_triples = list(itertools.combinations(idx, 3))
    if len(all_triples) > cap:
        all_triples = rng.sample(all_triples, cap)
    for i, j, k in all_triples:
        for a, b, c in itertools.permutations((i, j, k)):
            if space.caus(points[a], points[b]) and space.caus(points[b], points[c]):
                triples.append((points[a], points[b], points[c]))
                break
    return triples


def audit_axioms(space: SpaceHandle,
                 points: Sequence[Point],
                 chains: Iterable[Sequence[Point]] = (),
                 sequences: Iterable[tuple] = (),
                 tol: float = 1e-9,
                 seed: int = 0,
                 max_triples: int = 2000) -> AuditReport:
    """Audit the pre-length-space axioms on sampled points.

    Checks (a) the reverse triangle inequality tau(x,z) >= tau(x,y)+tau(y,z)
    on causal triples, (b) the positivity compatibility tau>0 iff chronology,
    (c) the diagonal dichotomy tau(x,x) in {0, inf}, and (d) lower
    semicontinuity along the supplied sequences, each a tuple
    ``(p_list, q_list, p, q)`` of approximants and limits.

    On lower-approximate backends the positivity check only fires above the
    backend's resolution floor, and the lower-semicontinuity epsilon includes
    the backend's error budget; exact backends are checked at ``tol``.
    """
    rng = random.Random(seed)
    points = list(points)
    floor = space.resolution_floor if space.exactness == "lower-approximate" else 0.0

    triples = []
    for chain in chains:
        chain = list(chain)
        combos = list(itertools.combinations(range(len(chain)), 3))
        if len(combos) > max_triples:
            combos = rng.sample(combos, max_triples)
        triples.extend((chain[i], chain[j], chain[k]) for i, j, k in combos)
    triples.extend(_causal_triples(space, points, rng, max_triples))

    rtri = []
    for x, y, z in triples:
        txy, tyz, txz = space.tau(x, y), space.tau(y, z), space.tau(x, z)
        lower = ext_add(txy, tyz)
        if math.isinf(lower):
            if not math.isinf(txz):
                rtri.append({"x": x, "y": y, "z": z, "tau_xy": txy, "tau_yz": tyz,
                             "tau_xz": txz, "deficit": INF})
            continue
        deficit = lower - txz
        if deficit > tol * max(1.0, lower) + space.tau_error_bound(lower):
            rtri.append({"x": x, "y": y, "z": z, "tau_xy": txy, "tau_yz": tyz,
                         "tau_xz": txz, "deficit": deficit})

    pairs = set()
    for chain in chains:
        chain = list(chain)
        pairs.update((a, b) for a, b in zip(chain, chain[1:]))
    pairs.update((points[i], points[j])
                 for i in range(len(points)) for j in range(len(points)) if i != j)
    pos = []
    for p, q in sorted(pairs, key=repr):  # reproducible witness order
        t = space.tau(p, q)
        c = space.chron(p, q)
        if c and t <= 0.0:
            pos.append({"p": p, "q": q, "tau": t, "chron": True})
        elif (not c) and t > floor:
            pos.append({"p": p, "q": q, "tau": t, "chron": False})

    diag = []
    for x in points:
        t = space.tau(x, x)
        if not (t == 0.0 or math.isinf(t)):
            diag.append({"x": x, "tau": t})

    lsc = []
    for k, (p_seq, q_seq, p, q) in enumerate(sequences):
        t_lim = space.tau(p, q)
        tail = [space.tau(pn, qn) for pn, qn in zip(p_seq, q_seq)]
        if not tail:
            continue
        tail_max = max(tail[len(tail) // 2:])  # tail of the sequence
        eps = tol * max(1.0, t_lim) + space.tau_error_bound(t_lim) + floor
        if not math.isinf(t_lim) and t_lim - tail_max > eps:
            lsc.append({"index": k, "tau_limit": t_lim, "tau_tail_max": tail_max,
                        "deficit": t_lim - tail_max})

    return AuditReport(space.name, len(points), len(pairs), len(triples),
                       tuple(rtri), tuple(pos), tuple(diag), tuple(lsc),
                       tol, floor)


@dataclass(frozen=True)
class PushUpReport:
    n_checked: int
    violations: tuple  # ({'x','y','z','pattern'}, ...)
    invalid: tuple     # indices of triples matching neither pattern

    @property
    def ok(self) -> bool:
        return not self.violations


def push_up_audit(space: SpaceHandle, triples: Sequence[tuple]) -> PushUpReport:
    """Check the push-up property on (x, y, z) triples.

    Each triple must match x <= y << z or x << y <= z; the property asserts
    x << z.  Triples matching neither pattern are reported as invalid and not
    counted.  In a chronological space with well-behaved causality there are
    no violations; relations built from curve classes over low-regularity
    cone fields can genuinely fail here.
    """
    violations = []
    invalid = []
    n = 0
    for k, (x, y, z) in enumerate(triples):
        le_then_ll = space.caus(x, y) and space.chron(y, z)
        ll_then_le = space.chron(x, y) and space.caus(y, z)
        if not (le_then_ll or ll_then_le):
            invalid.append(k)
            continue
        n += 1
        if not space.chron(x, z):
            violations.append({"x": x, "y": y, "z": z,
                               "pattern": "leq-chron" if le_then_ll else "chron-leq"})
    return PushUpReport(n, tuple(violations), tuple(invalid))
