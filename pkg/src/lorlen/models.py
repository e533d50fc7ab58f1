"""Constant-curvature Lorentzian model planes and comparison triangles.

The three two-dimensional model geometries are realized concretely:

* K = 0 — the Minkowski plane, points ``(t, x)``, metric ``-dt^2 + dx^2``.
* K > 0 — the pseudosphere ``<v, v> = r^2`` in ambient signature (-, +, +)
  with ``r = 1/sqrt(K)``; time separation ``r*arcosh(<p, q>/r^2)``.
* K < 0 — the pseudohyperbolic surface ``<v, v> = -r^2`` in ambient
  signature (-, -, +) with ``r = 1/sqrt(-K)``; time separation
  ``r*arccos(-<p, q>/r^2)``, finite timelike separations bounded by pi*r.

Triangles are realized from their side lengths in a canonical position and
support corresponding-point queries (a point on a side is addressed by its
time separation from the side's past vertex).

Pair classification is arranged to be cancellation-free near the null cone
and near the K < 0 chart boundary (separation close to pi*r): away from
those regions the monotone inverse functions are applied to the normalized
ambient product directly; near them the separation is recovered from the
tangential component of the second point, whose coordinates stay small where
the product formula loses all significant digits.  Separations within about
1e-7 * r of the null cone are classified as null.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import PolylineCurve, SpaceHandle

__all__ = [
    "ModelTriangle", "model_r", "ambient_product", "model_tau", "model_chron",
    "model_caus", "model_handle", "model_geodesic", "realizable",
    "realize_triangle", "side_point", "comparison_tau", "hyperbolic_angle",
    "timelike_diameter", "SIDES",
]

#: Side identifiers: endpoints are (past vertex, future vertex).
SIDES = {"xy": ("x", "y"), "yz": ("y", "z"), "xz": ("x", "z")}


def model_r(K: float) -> float:
    """Curvature radius of the model plane (inf for K = 0)."""
    if K == 0.0:
        return math.inf
    return 1.0 / math.sqrt(abs(K))


def timelike_diameter(K: float) -> float:
    """Largest finite time separation of M_K: pi/sqrt(-K) for K < 0, else inf."""
    if K < 0.0:
        return math.pi / math.sqrt(-K)
    return math.inf


def ambient_product(K: float, v: Sequence[float], w: Sequence[float]) -> float:
    """Ambient scalar product: (-,+) for K=0, (-,+,+) for K>0, (-,-,+) for K<0."""
    if K == 0.0:
        return -v[0] * w[0] + v[1] * w[1]
    if K > 0.0:
        return -v[0] * w[0] + v[1] * w[1] + v[2] * w[2]
    return -v[0] * w[0] - v[1] * w[1] + v[2] * w[2]


def _future(K: float, p, q) -> bool:
    """Is the geodesic direction from p toward q future-pointing?"""
    if K == 0.0:
        return q[0] > p[0]
    if K > 0.0:
        # tangent at p is proportional to q - (<p,q>/r^2) p
        r2 = 1.0 / K
        return q[0] > (ambient_product(K, p, q) / r2) * p[0]
    # K < 0: compare against the timelike Killing direction (-p1, p0, 0)
    return q[0] * p[1] - q[1] * p[0] < 0.0


def _classify(K: float, p, q):
    """Relation of an ordered pair in a curved model plane.

    Returns ``(kind, sigma)`` with kind in {'equal', 'timelike', 'null',
    'none'}; ``sigma`` is the separation divided by r, nonzero only for
    'timelike'.  'none' covers spacelike pairs, past-directed pairs, and
    (for K < 0) pairs beyond the chart boundary sigma = pi.
    """
    if tuple(p) == tuple(q):
        return "equal", 0.0
    r2 = 1.0 / abs(K)
    ip = ambient_product(K, p, q)
    cosv = ip / r2 if K > 0.0 else -ip / r2  # cosh(sigma) resp. cos(sigma)
    fut = _future(K, p, q)
    if K > 0.0:
        if cosv >= 1.01:
            return ("timelike", math.acosh(cosv)) if fut else ("none", 0.0)
        if cosv <= 0.99:
            return "none", 0.0  # spacelike (or worse)
    else:
        if -0.99 <= cosv <= 0.99:
            return ("timelike", math.acos(cosv)) if fut else ("none", 0.0)
        if cosv >= 1.01 or cosv <= -1.01:
            return "none", 0.0  # spacelike, or beyond the antipodal chart
    # Near the cone (cosv ~ +1) or near the chart boundary (K<0, cosv ~ -1):
    # use the tangential component w = q - cosv*p, for which <w, w> equals
    # -r^2 sinh(sigma)^2 resp. -r^2 sin(sigma)^2 without catastrophic
    # cancellation, since w itself is small there.
    w = tuple(q[i] - cosv * p[i] for i in range(3))
    s2 = -ambient_product(K, w, w) / r2
    wmax2 = max(w[0] * w[0], w[1] * w[1], w[2] * w[2])
    noise = 1e-13 * wmax2
    if abs(s2) <= noise or wmax2 == 0.0:
        # on the cone within floating-point resolution
        if K < 0.0 and cosv < 0.0:
            return "none", 0.0  # sigma ~ pi is a chart boundary, not a cone
        return ("null", 0.0) if fut else ("none", 0.0)
    if s2 < 0.0:
        return "none", 0.0  # spacelike
    if not fut:
        return "none", 0.0
    sv = math.sqrt(s2)
    sigma = math.asinh(sv) if K > 0.0 else math.atan2(sv, cosv)
    return "timelike", sigma


def model_chron(K: float, p, q) -> bool:
    """Chronological relation of the model plane."""
    if K == 0.0:
        dt, dx = q[0] - p[0], q[1] - p[1]
        return dt > abs(dx)
    return _classify(K, p, q)[0] == "timelike"


def model_caus(K: float, p, q) -> bool:
    """Causal relation of the model plane (reflexive)."""
    if K == 0.0:
        if tuple(p) == tuple(q):
            return True
        dt, dx = q[0] - p[0], q[1] - p[1]
        return dt >= abs(dx) and dt > 0.0
    return _classify(K, p, q)[0] in ("equal", "timelike", "null")


def model_tau(K: float, p, q) -> float:
    """Time separation of the model plane (0 when not chronologically related)."""
    if K == 0.0:
        dt, dx = q[0] - p[0], q[1] - p[1]
        adx = abs(dx)
        if dt <= adx:
            return 0.0
        return math.sqrt((dt - adx) * (dt + adx))
    kind, sigma = _classify(K, p, q)
    if kind != "timelike":
        return 0.0
    return model_r(K) * sigma


def model_geodesic(K: float, p, q, n: int = 33) -> PolylineCurve:
    """The maximizing geodesic between chronologically related model points.

    Returns a polyline sampled at ``n`` points whose parameters are the time
    separation from ``p``, so the curve arrives already tau-parametrized.
    """
    sep = model_tau(K, p, q)
    if sep <= 0.0:
        raise ValueError("model geodesic requires chronologically related endpoints")
    if K == 0.0:
        pts = [(p[0] + f * (q[0] - p[0]), p[1] + f * (q[1] - p[1]))
               for f in (i / (n - 1) for i in range(n))]
    else:
        r = model_r(K)
        sigma = sep / r
        if K > 0.0:
            u = tuple((q[i] - math.cosh(sigma) * p[i]) / (r * math.sinh(sigma)) for i in range(3))
            pts = [tuple(math.cosh(s / r) * p[i] + r * math.sinh(s / r) * u[i] for i in range(3))
                   for s in (sep * j / (n - 1) for j in range(n))]
        else:
            u = tuple((q[i] - math.cos(sigma) * p[i]) / (r * math.sin(sigma)) for i in range(3))
            pts = [tuple(math.cos(s / r) * p[i] + r * math.sin(s / r) * u[i] for i in range(3))
                   for s in (sep * j / (n - 1) for j in range(n))]
    pts[0], pts[-1] = tuple(p), tuple(q)
    params = tuple(sep * j / (n - 1) for j in range(n))
    return PolylineCurve(params, tuple(pts), True)


def model_handle(K: float) -> SpaceHandle:
    """The model plane M_K as an exact space handle over coordinate tuples."""
    return SpaceHandle(
        name=f"model-K={K:g}",
        backend="model-space",
        exactness="exact",
        chron=lambda p, q: model_chron(K, p, q),
        caus=lambda p, q: model_caus(K, p, q),
        tau=lambda p, q: model_tau(K, p, q),
        dist=lambda p, q: math.dist(p, q),
        maximizer=lambda p, q: model_geodesic(K, p, q),
    )


# ---------------------------------------------------------------------------
# Realizability and triangle construction


def realizable(K: float, a: float, b: float, c: float, causal: bool = False):
    """Do (a, b, c) satisfy the timelike (or causal) size bounds for K?

    Side order: a from x to y, b from y to z, c from x to z; the reverse
    triangle inequality forces c >= a + b.  Degenerate triangles (c = a + b)
    must fit on one geodesic: c < pi/sqrt(K) (interpreted as inf for K <= 0).
    Non-degenerate triangles in K < 0 must respect the model's finite
    timelike diameter: c < pi/sqrt(-K).  The causal variant allows at most
    one side length to vanish.

    Returns ``(ok, reason)``.
    """
    sides = (a, b, c)
    if any(math.isnan(s) or math.isinf(s) or s < 0.0 for s in sides):
        return False, "side lengths must be finite and non-negative"
    zeros = sum(1 for s in sides if s == 0.0)
    if causal:
        if zeros > 1:
            return False, "at most one side of a causal triangle may vanish"
    elif zeros > 0:
        return False, "timelike triangles need strictly positive sides"
    if c < a + b:
        return False, "reverse triangle inequality requires c >= a + b"
    if c == a + b and K > 0.0 and not c < math.pi / math.sqrt(K):
        return False, "degenerate triangle too long for M_K (c >= pi/sqrt(K))"
    if c > a + b and K < 0.0 and not c < math.pi / math.sqrt(-K):
        return False, "triangle exceeds timelike diameter pi/sqrt(-K)"
    return True, "ok"


@dataclass(frozen=True)
class ModelTriangle:
    """A geodesic triangle in M_K in canonical position.

    Vertices satisfy tau(x, y) = a, tau(y, z) = b, tau(x, z) = c, with x
    chronologically (or causally) before y before z.
    """

    K: float
    x: tuple
    y: tuple
    z: tuple
    a: float
    b: float
    c: float

    def vertex(self, name: str) -> tuple:
        return {"x": self.x, "y": self.y, "z": self.z}[name]

    def side_length(self, side: str) -> float:
        return {"xy": self.a, "yz": self.b, "xz": self.c}[side]


def realize_triangle(K: float, a: float, b: float, c: float,
                     causal: bool = False, check_tol: float = 1e-10) -> ModelTriangle:
    """Construct a triangle in M_K with the given side lengths.

    The triangle is placed canonically: x at a reference point, the long side
    xz along a fixed geodesic, y on the non-negative side of it.  The
    construction is verified by recomputing the side separations; a mismatch
    beyond ``check_tol`` (relative, floored at 1) raises.
    """
    ok, why = realizable(K, a, b, c, causal=causal)
    if not ok:
        raise ValueError(f"triangle ({a}, {b}, {c}) not realizable in M_{K:g}: {why}")

    if K == 0.0:
        # realizability leaves c > 0: c >= a + b with at most one zero side
        x = (0.0, 0.0)
        z = (c, 0.0)
        ty = (c * c + a * a - b * b) / (2.0 * c)
        y = (ty, math.sqrt(max(0.0, ty * ty - a * a)))
    elif K > 0.0:
        r = model_r(K)
        x = (0.0, r, 0.0)
        z = (r * math.sinh(c / r), r * math.cosh(c / r), 0.0)
        y1 = r * math.cosh(a / r)
        y0 = (y1 * math.cosh(c / r) - r * math.cosh(b / r)) / math.sinh(c / r)
        y2 = math.sqrt(max(0.0, r * r + y0 * y0 - y1 * y1))
        y = (y0, y1, y2)
    else:
        r = model_r(K)
        if c >= math.pi * r:
            # reachable only for degenerate triples, which live on the
            # universal cover; a single quadric chart cannot hold them
            raise ValueError("degenerate triangle too long for one chart of M_K (c >= pi*r)")
        x = (r, 0.0, 0.0)
        z = (r * math.cos(c / r), r * math.sin(c / r), 0.0)
        y0 = r * math.cos(a / r)
        y1 = r * (math.cos(b / r) - math.cos(a / r) * math.cos(c / r)) / math.sin(c / r)
        y2 = math.sqrt(max(0.0, y0 * y0 + y1 * y1 - r * r))
        y = (y0, y1, y2)

    tri = ModelTriangle(K, x, y, z, float(a), float(b), float(c))
    for side, want in (("xy", a), ("yz", b), ("xz", c)):
        p, q = tri.vertex(SIDES[side][0]), tri.vertex(SIDES[side][1])
        if want == 0.0:
            # a vanished side is a null segment or a point; only causality is checkable
            if tuple(p) != tuple(q) and not model_caus(K, p, q):
                raise ValueError(f"triangle construction failed: side {side} not causal")
            continue
        got = model_tau(K, p, q)
        if abs(got - want) > check_tol * max(1.0, want):
            raise ValueError(
                f"triangle construction failed: side {side} reproduces {got}, wanted {want}")
    return tri


def side_point(tri: ModelTriangle, side: str, s: float) -> tuple:
    """Point on a side at time separation ``s`` from the side's past vertex.

    Side endpoints are returned exactly at s = 0 and s = side length.  Only
    timelike sides have interior points addressed this way.
    """
    if side not in SIDES:
        raise ValueError(f"unknown side {side!r}")
    length = tri.side_length(side)
    if not 0.0 <= s <= length:
        raise ValueError(f"parameter {s} outside [0, {length}] on side {side}")
    p = tri.vertex(SIDES[side][0])
    q = tri.vertex(SIDES[side][1])
    if s == 0.0:
        return p
    if s == length:
        return q
    if length == 0.0:
        return p
    K = tri.K
    if K == 0.0:
        f = s / length
        return (p[0] + f * (q[0] - p[0]), p[1] + f * (q[1] - p[1]))
    r = model_r(K)
    sigma = length / r
    if K > 0.0:
        u = tuple((q[i] - math.cosh(sigma) * p[i]) / (r * math.sinh(sigma)) for i in range(3))
        return tuple(math.cosh(s / r) * p[i] + r * math.sinh(s / r) * u[i] for i in range(3))
    u = tuple((q[i] - math.cos(sigma) * p[i]) / (r * math.sin(sigma)) for i in range(3))
    return tuple(math.cos(s / r) * p[i] + r * math.sin(s / r) * u[i] for i in range(3))


def _side_tangent_at(tri: ModelTriangle, side: str, s: float) -> tuple:
    """Future-pointing unit tangent of a (timelike) side at parameter s."""
    length = tri.side_length(side)
    if length <= 0.0:
        raise ValueError(f"side {side} has no timelike direction")
    p = tri.vertex(SIDES[side][0])
    q = tri.vertex(SIDES[side][1])
    K = tri.K
    if K == 0.0:
        return tuple((q[i] - p[i]) / length for i in range(2))
    r = model_r(K)
    sigma = length / r
    if K > 0.0:
        u = tuple((q[i] - math.cosh(sigma) * p[i]) / (r * math.sinh(sigma)) for i in range(3))
        return tuple(math.sinh(s / r) / r * p[i] + math.cosh(s / r) * u[i] for i in range(3))
    u = tuple((q[i] - math.cos(sigma) * p[i]) / (r * math.sin(sigma)) for i in range(3))
    return tuple(-math.sin(s / r) / r * p[i] + math.cos(s / r) * u[i] for i in range(3))


def comparison_tau(tri: ModelTriangle, side_p: str, s: float,
                   side_q: str, t: float) -> float:
    """Model time separation of two corresponding points on the triangle."""
    p = side_point(tri, side_p, s)
    q = side_point(tri, side_q, t)
    return model_tau(tri.K, p, q)


def hyperbolic_angle(tri: ModelTriangle, vertex: str = "y") -> float:
    """Hyperbolic angle between the two sides meeting at a vertex.

    The angle phi satisfies cosh(phi) = -<u1, u2> for the future unit
    tangents of the adjacent sides at the vertex.  At y in the flat plane
    this reduces to arcosh((c^2 - a^2 - b^2)/(2ab)).
    """
    at = {"x": (("xy", 0.0), ("xz", 0.0)),
          "y": (("xy", None), ("yz", 0.0)),
          "z": (("yz", None), ("xz", None))}
    if vertex not in at:
        raise ValueError(f"unknown vertex {vertex!r}")
    (s1, t1), (s2, t2) = at[vertex]
    u1 = _side_tangent_at(tri, s1, tri.side_length(s1) if t1 is None else t1)
    u2 = _side_tangent_at(tri, s2, tri.side_length(s2) if t2 is None else t2)
    coshphi = -ambient_product(tri.K, u1, u2)
    return math.acosh(max(1.0, coshphi))
