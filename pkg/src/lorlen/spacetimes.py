"""Two-dimensional spacetimes: metrics, cone fields, and exact tau oracles.

A *plane spacetime* lives on an axis-aligned coordinate rectangle with axis 0
increasing toward the future (for the black-hole interior the grid is built
with the radius descending, so this stays true).  Each plane exposes the
quadratic form of its metric (or a Lorentz-Finsler gauge), a future
orientation test, a causality test for displacement vectors, the length
density F(p, v) = sqrt(-g_p(v, v)) used by the causal lattices, and the two
null cone-edge directions used by the boundary-curve integrator.

Built-in planes: the Minkowski plane, the time-periodic Lorentz cylinder,
the "bubbling" metric -(du + (1-|u|^lam) dx)^2 + dx^2 whose light cones
degenerate on the x-axis, the interior black-hole leaf
-(2M/r - 1)^(-1) dr^2 + (2M/r - 1) dt^2, and a non-quadratic cone structure
with gauge (v0^p - |v1/s(x)|^p)^(1/p).

Exact (non-lattice) oracles: n-dimensional Minkowski space, the cylinder
(tau identically infinite), the black-hole interior patch (time separation
by shooting on the conserved quantity E), and the causal funnel obtained by
joining the past cone of a point to the future cone of another through a
connecting curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize

from .core import PolylineCurve, SpaceHandle

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Plane spacetimes (metric or cone-structure based)


class _Plane:
    """Shared behaviour of 2D plane spacetimes; subclasses define the geometry."""

    name = "plane"
    domain = ((-math.inf, math.inf), (-math.inf, math.inf))
    wrap0 = None             # time period for cyclic spacetimes
    degenerate_level = None  # axis-0 value where the cone field degenerates
    orientation = 1.0        # sign of future motion along axis 0

    # subclasses implement metric(u, x) -> (g00, g01, g11) or override the
    # three methods below directly (cone structures without a metric)

    def qform(self, u, x, v0, v1):
        g00, g01, g11 = self.metric(u, x)
        return g00 * v0 * v0 + 2.0 * g01 * v0 * v1 + g11 * v1 * v1

    def causal_mask(self, u, x, v0, v1):
        return (self.qform(u, x, v0, v1) <= 0.0) & self.future_mask(u, x, v0, v1)

    def gauge(self, u, x, v0, v1):
        return np.sqrt(np.maximum(0.0, -self.qform(u, x, v0, v1)))

    def causal(self, point, v) -> bool:
        return bool(np.all(self.causal_mask(point[0], point[1], v[0], v[1])))

    def timelike_mask(self, u, x, v0, v1, slack: float = 1e-9):
        """Strictly inside the cone, with a relative margin against roundoff."""
        scale = np.asarray(v0) ** 2 + np.asarray(v1) ** 2
        return (self.qform(u, x, v0, v1) < -slack * scale) & self.future_mask(u, x, v0, v1)

    def cone_at(self, point):
        """Future null edge directions (left, right), Euclid-normalized.

        Left/right refers to the sign of the spatial component; for metric
        planes the edges solve g00 m^2 + 2 g01 m + g11 = 0 with v = (m, +-1).
        """
        g00, g01, g11 = (float(c) for c in self.metric(point[0], point[1]))
        if g00 == 0.0:
            raise ValueError("cone edge computation needs g00 != 0")
        disc = math.sqrt(max(0.0, g01 * g01 - g00 * g11))
        edges = []
        for m in ((-g01 + disc) / g00, (-g01 - disc) / g00):
            d = (m, 1.0)
            if not bool(self.future_mask(point[0], point[1], d[0], d[1])):
                d = (-m, -1.0)
            n = math.hypot(*d)
            edges.append((d[0] / n, d[1] / n))
        edges.sort(key=lambda d: d[1])
        left, right = edges
        return left, right

    def contains(self, point) -> bool:
        (lo0, hi0), (lo1, hi1) = self.domain
        return lo0 <= point[0] <= hi0 and lo1 <= point[1] <= hi1

    def id_string(self) -> str:
        return self.name


class MinkowskiPlane(_Plane):
    name = "minkowski2"

    def metric(self, u, x):
        one = np.ones_like(np.asarray(u, dtype=float))
        return -one, 0.0 * one, one

    def future_mask(self, u, x, v0, v1):
        return (np.asarray(v0) + 0.0 * np.asarray(u, dtype=float)) > 0.0


class CylinderPlane(MinkowskiPlane):
    """Flat metric with periodic time: closed timelike curves everywhere."""

    name = "cylinder"

    def __init__(self, period: float = TWO_PI):
        self.period = float(period)
        self.wrap0 = self.period
        self.domain = ((0.0, self.period), (-math.inf, math.inf))

    def id_string(self):
        return f"cylinder(period={self.period!r})"


class BubblingPlane(_Plane):
    """g = -(du + (1 - |u|^lam) dx)^2 + dx^2 on (-u_max, u_max) x R.

    The cone field is continuous but non-Lipschitz across the x-axis, where
    the rightward null direction degenerates onto the axis itself.
    """

    name = "bubbling"

    def __init__(self, lam: float = 0.5, u_max: float = 1.0):
        if not 0.0 < lam < 1.0:
            raise ValueError("bubbling exponent must lie in (0, 1)")
        self.lam = float(lam)
        self.domain = ((-u_max, u_max), (-math.inf, math.inf))
        self.degenerate_level = 0.0

    def _s(self, u):
        return np.abs(np.asarray(u, dtype=float)) ** self.lam

    def metric(self, u, x):
        su = self._s(u)
        return -np.ones_like(su), su - 1.0, su * (2.0 - su)

    def future_mask(self, u, x, v0, v1):
        return -np.asarray(v0) + (self._s(u) - 1.0) * np.asarray(v1) < 0.0

    def degenerate_exit(self, u, x, v0, v1):
        """Closed-form continuation of a past null curve from (u, x) to the axis.

        Uniqueness of the cone-edge ODE fails at u = 0; this follows the branch
        that merges with the axis.  The tangential family obeys du/dx = -s(u)
        (left-moving, |slope| < 1), the transversal one du/dx = s(u) - 2.
        """
        if abs(v0) < abs(v1):
            run = abs(u) ** (1.0 - self.lam) / (1.0 - self.lam)
        else:
            run, _ = integrate.quad(lambda r: 1.0 / (2.0 - r ** self.lam),
                                    0.0, abs(u), epsabs=1e-13, epsrel=1e-13)
        return (0.0, x + math.copysign(run, v1))

    def id_string(self):
        return f"bubbling(lam={self.lam!r},u_max={self.domain[0][1]!r})"


class InteriorPlane(_Plane):
    """Black-hole interior leaf in (r, t): the radius is the time coordinate.

    The future points toward r = 0, so axis 0 must be sampled with r
    descending when the plane is discretized.
    """

    name = "schwarzschild-interior"

    def __init__(self, M: float = 1.0):
        if M <= 0.0:
            raise ValueError("mass must be positive")
        self.M = float(M)
        self.domain = ((0.0, 2.0 * self.M), (-math.inf, math.inf))

    def h(self, r):
        return 2.0 * self.M / np.asarray(r, dtype=float) - 1.0

    def metric(self, u, x):
        h = self.h(u)
        return -1.0 / h, 0.0 * h, h

    orientation = -1.0

    def future_mask(self, u, x, v0, v1):
        return (np.asarray(v0) + 0.0 * np.asarray(u, dtype=float)) < 0.0

    def id_string(self):
        return f"schwarzschild-interior(M={self.M!r})"


class ConePlane(_Plane):
    """Lorentz-Finsler cone structure: cone v0 >= |v1|/s(x), s(x) = s0 + s1*x.

    The length density is the p-gauge (v0^p - |v1/s(x)|^p)^(1/p), concave and
    positively homogeneous on the cone, vanishing on its boundary.  p = 2 and
    constant s = 1 reduce to the Minkowski plane.
    """

    name = "cone-structure"

    def __init__(self, p: float = 2.0, s0: float = 1.0, s1: float = 0.0):
        if p < 1.0:
            raise ValueError("gauge exponent must satisfy p >= 1")
        self.p = float(p)
        self.s0 = float(s0)
        self.s1 = float(s1)
        if s1 == 0.0:
            if s0 <= 0.0:
                raise ValueError("cone slope must be positive")
            self.domain = ((-math.inf, math.inf), (-math.inf, math.inf))
        else:
            # keep to the half-plane where s(x) > 0
            edge = -s0 / s1
            self.domain = ((-math.inf, math.inf),
                           (edge, math.inf) if s1 > 0 else (-math.inf, edge))

    def _s(self, x):
        return self.s0 + self.s1 * np.asarray(x, dtype=float)

    def causal_mask(self, u, x, v0, v1):
        s = self._s(x)
        return (np.asarray(v0) > 0.0) & (s * np.asarray(v0) >= np.abs(v1))

    def future_mask(self, u, x, v0, v1):
        return (np.asarray(v0) + 0.0 * np.asarray(u, dtype=float)) > 0.0

    def gauge(self, u, x, v0, v1):
        s = self._s(x)
        v0a = np.maximum(0.0, np.asarray(v0, dtype=float))
        core = v0a ** self.p - np.abs(np.asarray(v1) / s) ** self.p
        return np.maximum(0.0, core) ** (1.0 / self.p)

    def timelike_mask(self, u, x, v0, v1, slack: float = 1e-9):
        s = self._s(x)
        margin = slack * np.hypot(np.asarray(v0, dtype=float), np.asarray(v1, dtype=float))
        return (np.asarray(v0) > 0.0) & (s * np.asarray(v0) > np.abs(v1) + margin)

    def cone_at(self, point):
        s = float(self._s(point[1]))
        n = math.hypot(1.0, s)
        return (1.0 / n, -s / n), (1.0 / n, s / n)

    def id_string(self):
        return f"cone-structure(p={self.p!r},s0={self.s0!r},s1={self.s1!r})"


def builtin_plane(spec_id: str, **params) -> _Plane:
    """Construct a built-in plane spacetime by id."""
    makers = {
        "minkowski2": MinkowskiPlane,
        "cylinder": CylinderPlane,
        "bubbling": BubblingPlane,
        "schwarzschild-interior": InteriorPlane,
        "cone-structure": ConePlane,
    }
    if spec_id not in makers:
        raise ValueError(f"unknown spacetime id {spec_id!r}")
    return makers[spec_id](**params)


# ---------------------------------------------------------------------------
# Exact Minkowski oracles (any dimension)


def mink_tau(p, q) -> float:
    dt = q[0] - p[0]
    dx = math.dist(p[1:], q[1:])
    if dt <= dx:
        return 0.0
    return math.sqrt((dt - dx) * (dt + dx))


def mink_chron(p, q) -> bool:
    return q[0] - p[0] > math.dist(p[1:], q[1:])


def mink_caus(p, q) -> bool:
    if tuple(p) == tuple(q):
        return True
    dt = q[0] - p[0]
    return dt > 0.0 and dt >= math.dist(p[1:], q[1:])


def _mink_maximizer(p, q, n: int = 33) -> PolylineCurve:
    pts = tuple(tuple(a + (b - a) * k / (n - 1) for a, b in zip(p, q)) for k in range(n))
    return PolylineCurve(tuple(float(k) for k in range(n)), pts)


def minkowski_handle(dim: int = 2) -> SpaceHandle:
    """Flat space in dim >= 2 as an exact handle over coordinate tuples.

    The 3D variant exists for curve-length computations (e.g. sampled helices);
    lattices stay two-dimensional.
    """
    if dim < 2:
        raise ValueError("need at least one time and one space dimension")
    return SpaceHandle(
        name=f"minkowski{dim}",
        backend="model-space" if dim == 2 else "restricted-subset",
        exactness="exact",
        chron=mink_chron,
        caus=mink_caus,
        tau=mink_tau,
        dist=lambda p, q: math.dist(p, q),
        maximizer=lambda p, q: _mink_maximizer(p, q),
    )


def cylinder_handle(period: float = TWO_PI) -> SpaceHandle:
    """The Lorentz cylinder: every pair is chronological and tau is infinite."""

    def d(p, q):
        dt = abs(q[0] - p[0]) % period
        dt = min(dt, period - dt)
        return math.hypot(dt, q[1] - p[1])

    return SpaceHandle(
        name="lorentz-cylinder",
        backend="model-space",
        exactness="exact",
        chron=lambda p, q: True,
        caus=lambda p, q: True,
        tau=lambda p, q: math.inf,
        dist=d,
    )


# ---------------------------------------------------------------------------
# Black-hole interior: closed forms and the exact tau oracle


def t_plus(r, M: float = 1.0):
    """Spacelike coordinate along the E=+1 infalling pregeodesic family."""
    r = np.asarray(r, dtype=float)
    s = np.sqrt(r / (2.0 * M))
    return (2.0 / 3.0) * (6.0 * M + r) * s - 4.0 * M * np.arctanh(s)


def t_minus(r, M: float = 1.0):
    return -t_plus(r, M)


def t_plus_prime(r, M: float = 1.0):
    """dt/dr along the E=+1 family: -sqrt(r/2M) / (2M/r - 1)."""
    r = np.asarray(r, dtype=float)
    return -np.sqrt(r / (2.0 * M)) / (2.0 * M / r - 1.0)


def proper_time_unit_energy(r, M: float = 1.0):
    """Proper time marker along the E=+-1 families: sqrt(2r/M) * r / 3."""
    r = np.asarray(r, dtype=float)
    return np.sqrt(2.0 * r / M) * r / 3.0


def proper_time_zero_energy(r, M: float = 1.0):
    """Antiderivative of 1/sqrt(2M/r - 1): proper time along the t=const geodesic."""
    r = np.asarray(r, dtype=float)
    theta = np.arcsin(np.sqrt(r / (2.0 * M)))
    return 2.0 * M * theta - M * np.sin(2.0 * theta)


def _coordinate_wall(M: float, r_lo: float, r_hi: float) -> float:
    """Integral of dr/(2M/r - 1) over [r_lo, r_hi]: the null coordinate spread."""
    return (r_lo - r_hi) + 2.0 * M * math.log((2.0 * M - r_lo) / (2.0 * M - r_hi))


def interior_chron(M: float, p, q) -> bool:
    r1, t1 = p
    r2, t2 = q
    if not (0.0 < r2 < r1 < 2.0 * M):
        return False
    return abs(t2 - t1) < _coordinate_wall(M, r2, r1)


def interior_caus(M: float, p, q) -> bool:
    if tuple(p) == tuple(q):
        return True
    r1, t1 = p
    r2, t2 = q
    if not (0.0 < r2 <= r1 < 2.0 * M):
        return False
    if r2 == r1:
        return False
    return abs(t2 - t1) <= _coordinate_wall(M, r2, r1)


def interior_tau(M: float, p, q, quad_tol: float = 1e-11) -> float:
    """Time separation in the interior patch by shooting on E.

    The connecting geodesic conserves E = (2M/r - 1) dt/dtau and satisfies
    (dr/dtau)^2 = E^2 + (2M/r - 1); its coordinate spread int E/(h sqrt(E^2+h)) dr
    is strictly increasing in E, so the matching E is found by bracketing.
    """
    if not interior_chron(M, p, q):
        return 0.0
    r1, t1 = p
    r2, t2 = q
    dt = t2 - t1

    def h(r):
        return 2.0 * M / r - 1.0

    if dt == 0.0:
        return float(proper_time_zero_energy(r1, M) - proper_time_zero_energy(r2, M))

    def spread(E):
        # coordinate spread is odd in E and increasing, so solve for |dt|
        val, _ = integrate.quad(lambda r: E / (h(r) * math.sqrt(E * E + h(r))),
                                r2, r1, epsabs=quad_tol, epsrel=quad_tol, limit=200)
        return val

    target = abs(dt)
    e_hi = 1.0
    while spread(e_hi) < target:
        e_hi *= 2.0
        if e_hi > 1e12:
            raise ArithmeticError("energy bracket failed to close")
    E = optimize.brentq(lambda e: spread(e) - target, 0.0, e_hi,
                        xtol=1e-13, rtol=8.9e-16)
    tau, _ = integrate.quad(lambda r: 1.0 / math.sqrt(E * E + h(r)),
                            r2, r1, epsabs=quad_tol, epsrel=quad_tol, limit=200)
    return tau


def interior_geodesic(M: float, p, q, n: int = 33) -> PolylineCurve:
    """Sampled connecting geodesic p to q in the interior patch (p << q)."""
    if not interior_chron(M, p, q):
        raise ValueError("no connecting timelike geodesic: points not chronological")
    r1, t1 = p
    r2, t2 = q

    def h(r):
        return 2.0 * M / r - 1.0

    dt = t2 - t1
    if dt == 0.0:
        E = 0.0
    else:
        def spread(e):
            val, _ = integrate.quad(lambda r: e / (h(r) * math.sqrt(e * e + h(r))),
                                    r2, r1, epsabs=1e-12, epsrel=1e-12, limit=200)
            return val

        e_hi = 1.0
        while spread(e_hi) < abs(dt):
            e_hi *= 2.0
        E = math.copysign(
            optimize.brentq(lambda e: spread(e) - abs(dt), 0.0, e_hi,
                            xtol=1e-13, rtol=8.9e-16), dt)
    rs = np.linspace(r1, r2, n)
    ts = [t1]
    for lo, hi in zip(rs[1:], rs[:-1]):
        seg, _ = integrate.quad(lambda r: E / (h(r) * math.sqrt(E * E + h(r))),
                                lo, hi, epsabs=1e-12, epsrel=1e-12, limit=200)
        ts.append(ts[-1] + seg)
    ts[-1] = t2  # absorb the ~1e-11 cumulative quadrature residual
    pts = tuple((float(r), float(t)) for r, t in zip(rs, ts))
    return PolylineCurve(tuple(float(i) for i in range(n)), pts)


def interior_handle(M: float = 1.0) -> SpaceHandle:
    """Exact oracle bundle for the black-hole interior leaf (points are (r, t))."""
    memo = {}

    def tau(p, q):
        key = (tuple(p), tuple(q))
        if key not in memo:
            memo[key] = interior_tau(M, p, q)
        return memo[key]

    return SpaceHandle(
        name=f"schwarzschild-interior-M={M:g}",
        backend="restricted-subset",
        exactness="exact",
        chron=lambda p, q: interior_chron(M, p, q),
        caus=lambda p, q: interior_caus(M, p, q),
        tau=tau,
        dist=lambda p, q: math.dist(p, q),
        maximizer=lambda p, q: interior_geodesic(M, p, q),
        tau_abs_error=1e-9,
    )


@dataclass(frozen=True)
class InteriorTriangleRecord:
    """One member of the infalling triangle family (x, y_k, z_k).

    The vertices are intersections of three pregeodesics: gamma_minus shifted
    by -2C, gamma_plus shifted by C/k, and the t = 0 geodesic.  Sides a, b
    run along the unit-energy families (proper-time closed form); side c runs
    along t = 0.  ``scalar_product`` is the ambient product of the unit
    tangents of the c- and b-sides at z_k computed from components;
    ``scalar_product_closed_form`` is -1/sqrt(1 - t_+'(r)^2 (2M/r - 1)^2).
    """

    M: float
    C: float
    k: int
    r_x: float
    r_y: float
    r_z: float
    x: tuple
    y: tuple
    z: tuple
    a: float
    b: float
    c: float
    scalar_product: float
    scalar_product_closed_form: float
    residuals: tuple  # root residuals for (r_x, r_y, r_z)


def _solve_t_minus(M: float, value: float) -> float:
    lo, hi = 1e-12, 2.0 * M * (1.0 - 1e-12)
    return optimize.brentq(lambda r: float(t_minus(r, M)) - value, lo, hi,
                           xtol=1e-14, rtol=8.9e-16)


def schwarzschild_family(M: float, C: float, k: int) -> InteriorTriangleRecord:
    """Vertices, side lengths and the z_k tangent product for one family member."""
    if M <= 0 or C <= 0 or k < 1:
        raise ValueError("need M > 0, C > 0, k >= 1")
    r_x = _solve_t_minus(M, 2.0 * C)
    r_y = _solve_t_minus(M, C * (1.0 + 1.0 / (2.0 * k)))
    r_z = _solve_t_minus(M, C / k)
    residuals = (abs(float(t_minus(r_x, M)) - 2.0 * C),
                 abs(float(t_minus(r_y, M)) - C * (1.0 + 1.0 / (2.0 * k))),
                 abs(float(t_minus(r_z, M)) - C / k))
    x = (r_x, 0.0)
    y = (r_y, float(t_minus(r_y, M)) - 2.0 * C)
    z = (r_z, 0.0)
    a = float(proper_time_unit_energy(r_x, M) - proper_time_unit_energy(r_y, M))
    b = float(proper_time_unit_energy(r_y, M) - proper_time_unit_energy(r_z, M))
    c = float(proper_time_zero_energy(r_x, M) - proper_time_zero_energy(r_z, M))

    # unit tangents at z_k in (r, t) components, future = decreasing r
    h = 2.0 * M / r_z - 1.0
    u_c = (-math.sqrt(h), 0.0)                      # along t = 0
    tp = float(t_plus_prime(r_z, M))
    rdot = -1.0 / math.sqrt(1.0 / h - h * tp * tp)  # along gamma_plus, g-normalized
    u_b = (rdot, tp * rdot)
    dot = -(1.0 / h) * u_c[0] * u_b[0] + h * u_c[1] * u_b[1]
    closed = -1.0 / math.sqrt(1.0 - tp * tp * h * h)
    return InteriorTriangleRecord(M, C, k, r_x, r_y, r_z, x, y, z, a, b, c,
                                  dot, closed, residuals)


def interior_side_curves(record: InteriorTriangleRecord, n: int = 65):
    """Sampled pregeodesic sides (xy, yz, xz) of a family triangle."""
    M, C, k = record.M, record.C, record.k

    def sample(r_from, r_to, t_of_r):
        rs = np.linspace(r_from, r_to, n)
        return tuple((float(r), float(t_of_r(r))) for r in rs)

    xy = sample(record.r_x, record.r_y, lambda r: float(t_minus(r, M)) - 2.0 * C)
    yz = sample(record.r_y, record.r_z, lambda r: float(t_plus(r, M)) + C / k)
    xz = sample(record.r_x, record.r_z, lambda r: 0.0)
    params = tuple(float(i) for i in range(n))
    return (PolylineCurve(params, xy), PolylineCurve(params, yz), PolylineCurve(params, xz))


# ---------------------------------------------------------------------------
# Causal funnel: past cone + connecting curve + future cone


@dataclass(frozen=True)
class Funnel:
    """Two flat cones joined through a connecting curve of given tau-length.

    The space is J^-(p) in one Minkowski plane, J^+(q) in another, and the
    image of a curve lambda from p to q with L_tau(lambda) = link_length
    (timelike when positive, null when zero).  Every causal curve from the
    past piece to the future piece runs through p, lambda, q.
    """

    p: tuple = (0.0, 0.0)
    q: tuple = (0.0, 0.0)
    link_length: float = 0.25

    def canonical(self, point):
        """Identify the junctions: p with lambda(0) and q with lambda(1)."""
        tag = point[0]
        if tag == "past" and (point[1], point[2]) == tuple(self.p):
            return ("link", 0.0)
        if tag == "future" and (point[1], point[2]) == tuple(self.q):
            return ("link", 1.0)
        return point

    def member(self, point) -> bool:
        tag = point[0]
        if tag == "past":
            return mink_caus(point[1:], self.p)
        if tag == "future":
            return mink_caus(self.q, point[1:])
        if tag == "link":
            return 0.0 <= point[1] <= 1.0
        return False

    def coords(self, point):
        """Plot coordinates: cone points keep theirs, the link interpolates p->q."""
        point = self.canonical(point)
        if point[0] == "link":
            s = point[1]
            return (self.p[0] + s * (self.q[0] - self.p[0]),
                    self.p[1] + s * (self.q[1] - self.p[1]))
        return (point[1], point[2])


def _funnel_order(point):
    # ordering rank of the three pieces along the funnel
    return {"past": 0, "link": 1, "future": 2}[point[0]]


def funnel_tau(f: Funnel, a, b) -> float:
    a, b = f.canonical(a), f.canonical(b)
    ra, rb = _funnel_order(a), _funnel_order(b)
    L = f.link_length
    if ra == rb:
        if ra == 1:
            ds = b[1] - a[1]
            return L * ds if ds > 0.0 else 0.0
        return mink_tau(a[1:], b[1:])
    if ra > rb:
        return 0.0
    if ra == 0 and rb == 1:
        return mink_tau(a[1:], f.p) + L * b[1]
    if ra == 0 and rb == 2:
        return mink_tau(a[1:], f.p) + L + mink_tau(f.q, b[1:])
    return L * (1.0 - a[1]) + mink_tau(f.q, b[1:])


def funnel_chron(f: Funnel, a, b) -> bool:
    a, b = f.canonical(a), f.canonical(b)
    if _funnel_order(a) == _funnel_order(b) and _funnel_order(a) != 1:
        return mink_chron(a[1:], b[1:])
    return funnel_tau(f, a, b) > 0.0


def funnel_caus(f: Funnel, a, b) -> bool:
    a, b = f.canonical(a), f.canonical(b)
    ra, rb = _funnel_order(a), _funnel_order(b)
    if ra == rb:
        if ra == 1:
            return b[1] >= a[1]
        return mink_caus(a[1:], b[1:])
    return ra < rb  # everything upstream reaches everything downstream via p, q


def funnel_dist(f: Funnel, a, b) -> float:
    a, b = f.canonical(a), f.canonical(b)
    ra, rb = _funnel_order(a), _funnel_order(b)
    ell = f.link_length if f.link_length > 0.0 else 1.0
    if ra > rb:
        a, b, ra, rb = b, a, rb, ra
    if ra == rb:
        if ra == 1:
            return ell * abs(b[1] - a[1])
        return math.dist(a[1:], b[1:])
    if ra == 0 and rb == 1:
        return math.dist(a[1:], f.p) + ell * b[1]
    if ra == 0 and rb == 2:
        return math.dist(a[1:], f.p) + ell + math.dist(f.q, b[1:])
    return ell * (1.0 - a[1]) + math.dist(f.q, b[1:])


def funnel_maximizer(f: Funnel, a, b, n: int = 17) -> PolylineCurve:
    """A tau-length maximizer between related funnel points.

    Cross-piece maximizers are forced through the whole connecting curve;
    within a cone they are straight.
    """
    a, b = f.canonical(a), f.canonical(b)
    if not funnel_caus(f, a, b):
        raise ValueError("points are not causally related in the funnel")
    ra, rb = _funnel_order(a), _funnel_order(b)

    def straight(u, v):
        return [tuple(x + (y - x) * k / (n - 1) for x, y in zip(u, v)) for k in range(n)]

    def link_run(s0, s1):
        return [("link", s0 + (s1 - s0) * k / (n - 1)) for k in range(n)]

    pts: list = []
    if ra == rb:
        if ra == 1:
            pts = link_run(a[1], b[1])
        else:
            tag = a[0]
            pts = [(tag, t, x) for (t, x) in straight(a[1:], b[1:])]
    else:
        if ra == 0:
            pts = [("past", t, x) for (t, x) in straight(a[1:], f.p)]
        else:
            pts = [("link", a[1])]
        s_start = 0.0 if ra == 0 else a[1]
        s_end = 1.0 if rb == 2 else b[1]
        run = link_run(s_start, s_end)
        pts = pts[:-1] + run if ra == 0 else run
        if rb == 2:
            tail = [("future", t, x) for (t, x) in straight(f.q, b[1:])]
            pts = pts[:-1] + tail
    # canonicalize junctions and drop consecutive duplicates
    canon = [f.canonical(p) for p in pts]
    dedup = [canon[0]]
    for p in canon[1:]:
        if p != dedup[-1]:
            dedup.append(p)
    return PolylineCurve(tuple(float(i) for i in range(len(dedup))), tuple(dedup))


def funnel_handle(f: Funnel) -> SpaceHandle:
    return SpaceHandle(
        name=f"funnel(L={f.link_length:g})",
        backend="restricted-subset",
        exactness="exact",
        chron=lambda a, b: funnel_chron(f, a, b),
        caus=lambda a, b: funnel_caus(f, a, b),
        tau=lambda a, b: funnel_tau(f, a, b),
        dist=lambda a, b: funnel_dist(f, a, b),
        maximizer=lambda a, b: funnel_maximizer(f, a, b),
        position=lambda p: f.coords(p),
    )


# ---------------------------------------------------------------------------
# Null boundary curves


@dataclass(frozen=True)
class BoundaryCurve:
    curve: PolylineCurve
    hit_boundary: bool
    end_reason: str  # "span" | "domain" | "axis"


def null_boundary(plane: _Plane, start, branch: str, direction: str,
                  span: float = 4.0, num: int = 257, atol: float = 1e-9) -> BoundaryCurve:
    """Integrate a null cone-edge curve from a point.

    ``branch`` ('left'/'right') is the spatial direction of travel;
    ``direction`` ('future'/'past') the time orientation.  The curve is
    parametrized by Euclidean arclength and integrated adaptively (RK45,
    absolute tolerance ``atol``).  Where the cone field degenerates (the
    bubbling x-axis) the solution is non-unique; integration snaps to the
    degenerate level once within 1e-12 of it and stops there, which selects
    the boundary branch that merges with the axis.
    """
    if branch not in ("left", "right"):
        raise ValueError(f"branch must be 'left' or 'right', not {branch!r}")
    if direction not in ("future", "past"):
        raise ValueError(f"direction must be 'future' or 'past', not {direction!r}")
    if not plane.contains(start):
        raise ValueError(f"start {start!r} outside the domain of {plane.name}")

    def rhs(_s, y):
        left, right = plane.cone_at((y[0], y[1]))
        if direction == "future":
            d = left if branch == "left" else right
        else:
            d = tuple(-c for c in (right if branch == "left" else left))
        return d

    events = []
    (lo0, hi0), (lo1, hi1) = plane.domain
    margin = 1e-9

    def wall(getter, value, sign):
        def ev(_s, y):
            return sign * (getter(y) - value)
        ev.terminal = True
        return ev

    for bound, idx, sign in ((lo0, 0, 1.0), (hi0, 0, -1.0), (lo1, 1, 1.0), (hi1, 1, -1.0)):
        if math.isfinite(bound):
            events.append(wall(lambda y, i=idx: y[i], bound + sign * margin, sign))
    n_wall_events = len(events)

    # switch to the closed-form branch once within 1e-12 of the degenerate
    # level, where the ODE loses uniqueness; one signed event per approach side
    level = plane.degenerate_level
    snap_at = 1e-12
    if level is not None and abs(start[0] - level) > snap_at:
        def from_above(_s, y):
            return y[0] - (level + snap_at)
        from_above.terminal = True
        from_above.direction = -1.0

        def from_below(_s, y):
            return y[0] - (level - snap_at)
        from_below.terminal = True
        from_below.direction = 1.0

        events.extend([from_above, from_below])

    sol = integrate.solve_ivp(rhs, (0.0, span), [float(start[0]), float(start[1])],
                              rtol=1e-12, atol=min(atol, 1e-14), dense_output=True,
                              events=events, max_step=span / 64.0)
    end = float(sol.t[-1])
    reason = "span"
    hit = False
    snapped = None
    for i, t_ev in enumerate(sol.t_events):
        if len(t_ev) and float(t_ev[0]) <= end:
            end = float(t_ev[0])
            if i < n_wall_events:
                reason, hit, snapped = "domain", True, None
            else:
                reason, hit = "axis", False
                y_ev = sol.y_events[i][0]
                v = rhs(end, y_ev)
                snapped = plane.degenerate_exit(float(y_ev[0]) - level,
                                                float(y_ev[1]), v[0], v[1])

    ts = np.linspace(0.0, end, num)
    ys = sol.sol(ts)
    points = [(float(a), float(b)) for a, b in zip(ys[0], ys[1])]
    params = [float(t) for t in ts]
    if snapped is not None:
        params.append(params[-1] + math.dist(points[-1], snapped))
        points.append((float(snapped[0]) + level, float(snapped[1])))
    curve = PolylineCurve(tuple(params), tuple(points))
    return BoundaryCurve(curve, hit, reason)


# ---------------------------------------------------------------------------
# Bubbling closed forms


def bubbling_left_exit(q) -> float:
    """x-coordinate where the pastward-left null curve from q meets the axis."""
    u0, x0 = q
    return x0 - 2.0 * math.sqrt(u0)


def bubbling_nu(q, xi):
    """Closed form of the pastward-left bounding null curve from q = (u0, x0):
    nu(xi) = ((2*sqrt(u0) - xi)^2 / 4, x0 - xi) for xi in [0, 2*sqrt(u0)]."""
    u0, x0 = q
    xi = np.asarray(xi, dtype=float)
    return 0.25 * (2.0 * math.sqrt(u0) - xi) ** 2, x0 - xi


def bubbling_right_exit(q) -> float:
    """x' where the pastward-right null curve from q meets the axis.

    Solves du/dx = sqrt(u) - 2 from (u0, x0) down to u = 0:
    x' = x0 + int_0^{u0} dr / (2 - sqrt(r)), via the antiderivative
    -2 s - 4 log(2 - s) with s = sqrt(r).
    """
    u0, x0 = q

    def anti(r):
        s = math.sqrt(r)
        return -2.0 * s - 4.0 * math.log(2.0 - s)

    return x0 + (anti(u0) - anti(0.0))
