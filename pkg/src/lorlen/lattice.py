"""Causal lattices: time separation by longest paths over cone-respecting grids.

A grid lattice discretizes a rectangular region of a plane spacetime with
spacing ``h``.  Directed edges join a node to every node within ``R`` grid
steps whose displacement is future-causal for the cone at the segment
midpoint; each edge carries the Gauss-Legendre quadrature of the length
density F along the segment.  Time separation is the maximum total edge
length over directed paths, computed by dynamic programming in topological
order, which approximates tau from below (lattice paths are a subclass of
causal curves).

Time-periodic spacetimes produce cyclic edge relations; such lattices are
flagged and answer tau = +inf on cycle-connected pairs instead of running
the DP.

The causal funnel gets a graph lattice over the union of the two cone
regions and a subdivided connecting chain, with exact Minkowski edge lengths
inside the cones.
"""

from __future__ import annotations

import io
import json
import math
from collections import OrderedDict
from typing import Iterable

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .core import INF, PolylineCurve, SpaceHandle
from .spacetimes import Funnel, _Plane, mink_caus, mink_chron, mink_tau

_CACHE_VERSION = 1


def _primitive_offsets(R: int) -> list:
    offs = [(0, 1), (0, -1)]
    for d0 in range(1, R + 1):
        for d1 in range(-R, R + 1):
            if math.gcd(d0, abs(d1)) == 1:
                offs.append((d0, d1))
    return offs


def _gauss_nodes(order: int):
    xs, ws = np.polynomial.legendre.leggauss(order)
    return (xs + 1.0) / 2.0, ws / 2.0


class CausalLattice:
    """Grid discretization of a plane spacetime with longest-path tau."""

    def __init__(self, plane: _Plane, region, h: float, R: int, quad_order: int = 5,
                 _arrays=None):
        if h <= 0 or R < 1:
            raise ValueError("need h > 0 and R >= 1")
        (lo0, hi0), (lo1, hi1) = region
        (dlo0, dhi0), (dlo1, dhi1) = plane.domain
        if plane.wrap0 is None:
            if not (dlo0 <= lo0 < hi0 <= dhi0 and dlo1 <= lo1 < hi1 <= dhi1):
                raise ValueError("region must lie inside the spacetime domain")
        self.plane = plane
        self.region = ((float(lo0), float(hi0)), (float(lo1), float(hi1)))
        self.h = float(h)
        self.R = int(R)
        self.quad_order = int(quad_order)
        self.wrap = plane.wrap0 is not None
        self.offsets = _primitive_offsets(R)

        if _arrays is not None:
            self.axis0, self.axis1, self._weights, self._timelike = _arrays
            self.n0, self.n1 = len(self.axis0), len(self.axis1)
        else:
            self._build_axes()
            self._build_edges()
        self._dp_cache: OrderedDict = OrderedDict()
        self._reach_cache: OrderedDict = OrderedDict()
        self._graph = None
        self.cyclic = self._detect_cycles()

    # -- construction ------------------------------------------------------

    def _build_axes(self):
        (lo0, hi0), (lo1, hi1) = self.region
        h = self.h
        if self.wrap:
            period = self.plane.wrap0
            self.n0 = int(round(period / h))
            if abs(self.n0 * h - period) > 1e-9 * period:
                raise ValueError("spacing must divide the time period")
            start = lo0
        else:
            self.n0 = int(round((hi0 - lo0) / h)) + 1
            start = lo0 if self.plane.orientation > 0 else hi0
        self.n1 = int(round((hi1 - lo1) / h)) + 1
        sign = self.plane.orientation
        self.axis0 = start + sign * h * np.arange(self.n0)
        self.axis1 = lo1 + h * np.arange(self.n1)

    def _build_edges(self):
        nodes_u = self.axis0[:, None]
        nodes_x = self.axis1[None, :]
        ts, ws = _gauss_nodes(self.quad_order)
        self._weights = {}
        self._timelike = {}
        sign = self.plane.orientation
        for d0, d1 in self.offsets:
            v0 = sign * d0 * self.h
            v1 = d1 * self.h
            mid_u = nodes_u + 0.5 * v0
            mid_x = nodes_x + 0.5 * v1
            mask = self.plane.causal_mask(mid_u, mid_x, v0, v1)
            mask = np.broadcast_to(mask, (self.n0, self.n1)).copy()
            tmask = self.plane.timelike_mask(mid_u, mid_x, v0, v1)
            tmask = np.broadcast_to(tmask, (self.n0, self.n1)).copy()
            # target must stay inside the grid
            if not self.wrap and d0 > 0:
                mask[self.n0 - d0:, :] = False
            if d1 > 0:
                mask[:, self.n1 - d1:] = False
            elif d1 < 0:
                mask[:, :-d1] = False
            w = np.zeros((self.n0, self.n1))
            for t, wt in zip(ts, ws):
                w = w + wt * self.plane.gauge(nodes_u + t * v0, nodes_x + t * v1, v0, v1)
            w = np.where(mask, w, -np.inf)
            self._weights[(d0, d1)] = w
            self._timelike[(d0, d1)] = tmask & mask

    def _detect_cycles(self) -> bool:
        if self.wrap:
            _, labels = csgraph.connected_components(self._sparse_graph(),
                                                     connection="strong")
            return bool(np.bincount(labels).max() > 1)
        a = np.isfinite(self._weights[(0, 1)])
        b = np.isfinite(self._weights[(0, -1)])
        if (a[:, :-1] & b[:, 1:]).any():
            raise ValueError("opposing degenerate horizontal edges form a cycle")
        return False

    def _sparse_graph(self):
        if self._graph is None:
            rows, cols = [], []
            idx = np.arange(self.n0 * self.n1).reshape(self.n0, self.n1)
            for (d0, d1), w in self._weights.items():
                src0, src1 = np.nonzero(np.isfinite(w))
                t0 = (src0 + d0) % self.n0 if self.wrap else src0 + d0
                rows.append(idx[src0, src1])
                cols.append(idx[t0, src1 + d1])
            rows = np.concatenate(rows)
            cols = np.concatenate(cols)
            self._graph = sparse.csr_matrix(
                (np.ones(len(rows), bool), (rows, cols)),
                shape=(self.n0 * self.n1, self.n0 * self.n1))
        return self._graph

    # -- node lookup ---------------------------------------------------------

    def index_of(self, point):
        u, x = float(point[0]), float(point[1])
        if self.wrap:
            period = self.plane.wrap0
            u = u % period
        step0 = self.axis0[1] - self.axis0[0]
        i0 = int(round((u - self.axis0[0]) / step0))
        i1 = int(round((x - self.axis1[0]) / self.h))
        if self.wrap:
            i0 %= self.n0
        ok0 = 0 <= i0 < self.n0 and abs(self.axis0[i0] - u) <= 1e-6 * self.h
        ok1 = 0 <= i1 < self.n1 and abs(self.axis1[i1] - x) <= 1e-6 * self.h
        if not (ok0 and ok1):
            raise ValueError(f"point {point!r} is not a lattice node")
        return i0, i1

    def node_point(self, idx):
        return (float(self.axis0[idx[0]]), float(self.axis1[idx[1]]))

    def edges(self) -> Iterable:
        """Yield (source_index, target_index, length) over all edges."""
        for (d0, d1), w in self._weights.items():
            src0, src1 = np.nonzero(np.isfinite(w))
            for i0, i1 in zip(src0, src1):
                t0 = (i0 + d0) % self.n0 if self.wrap else i0 + d0
                yield (int(i0), int(i1)), (int(t0), int(i1 + d1)), float(w[i0, i1])

    @property
    def edge_count(self) -> int:
        return sum(int(np.isfinite(w).sum()) for w in self._weights.values())

    # -- dynamic programming -------------------------------------------------

    def _run_dp(self, src, kind: str):
        """Longest path ('tau') or reachability ('caus'/'chron') from src."""
        numeric = kind == "tau"
        if numeric:
            dist = np.full((self.n0, self.n1), -np.inf)
            dist[src] = 0.0
            pred = np.full((self.n0, self.n1), -1, dtype=np.int64)
        else:
            dist = np.zeros((self.n0, self.n1), dtype=bool)
            dist[src] = True
            pred = None
        if kind == "tau":
            tables = self._weights
        elif kind == "chron":
            tables = self._timelike
        else:
            tables = {o: np.isfinite(w) for o, w in self._weights.items()}
        horiz = [(d0, d1) for (d0, d1) in self.offsets
                 if d0 == 0 and self._has_edges(tables[(d0, d1)])]
        ups = [(d0, d1) for (d0, d1) in self.offsets
               if d0 > 0 and self._has_edges(tables[(d0, d1)])]
        flat = np.arange(self.n0 * self.n1).reshape(self.n0, self.n1)
        for i0 in range(src[0], self.n0):
            for d0, d1 in horiz:
                tab = tables[(0, d1)]
                cells = range(self.n1 - 1) if d1 == 1 else range(self.n1 - 1, 0, -1)
                for j in cells:
                    if numeric:
                        if np.isfinite(tab[i0, j]) and np.isfinite(dist[i0, j]):
                            cand = dist[i0, j] + tab[i0, j]
                            if cand > dist[i0, j + d1]:
                                dist[i0, j + d1] = cand
                                pred[i0, j + d1] = flat[i0, j]
                    else:
                        if tab[i0, j] and dist[i0, j] and not dist[i0, j + d1]:
                            dist[i0, j + d1] = True
            for d0, d1 in ups:
                t0 = i0 + d0
                if t0 >= self.n0:
                    continue
                tab = tables[(d0, d1)]
                if d1 >= 0:
                    s_src, s_tgt = slice(0, self.n1 - d1), slice(d1, self.n1)
                else:
                    s_src, s_tgt = slice(-d1, self.n1), slice(0, self.n1 + d1)
                if numeric:
                    cand = dist[i0, s_src] + tab[i0, s_src]
                    tgt = dist[t0, s_tgt]
                    better = cand > tgt
                    if better.any():
                        tgt[better] = cand[better]
                        dist[t0, s_tgt] = tgt
                        pt = pred[t0, s_tgt]
                        pt[better] = flat[i0, s_src][better]
                        pred[t0, s_tgt] = pt
                else:
                    step = dist[i0, s_src] & tab[i0, s_src]
                    dist[t0, s_tgt] |= step
        return dist, pred

    @staticmethod
    def _has_edges(table) -> bool:
        if table.dtype == bool:
            return bool(table.any())
        return bool(np.isfinite(table).any())

    def _dp(self, src, kind: str):
        key = (src, kind)
        cache = self._dp_cache
        if key not in cache:
            cache[key] = self._run_dp(src, kind)
            while len(cache) > 24:
                cache.popitem(last=False)
        else:
            cache.move_to_end(key)
        return cache[key]

    def _reachable(self, src_flat: int):
        cache = self._reach_cache
        if src_flat not in cache:
            order = csgraph.breadth_first_order(self._sparse_graph(), src_flat,
                                                return_predecessors=False)
            mask = np.zeros(self.n0 * self.n1, dtype=bool)
            mask[order] = True
            cache[src_flat] = mask
            while len(cache) > 24:
                cache.popitem(last=False)
        return cache[src_flat]

    # -- queries -------------------------------------------------------------

    def tau(self, x, y) -> float:
        i, j = self.index_of(x), self.index_of(y)
        if self.cyclic:
            if i == j or self._reachable(i[0] * self.n1 + i[1])[j[0] * self.n1 + j[1]]:
                return INF
            return 0.0
        if j[0] < i[0]:
            return 0.0
        dist, _ = self._dp(i, "tau")
        val = dist[j]
        return float(val) if np.isfinite(val) else 0.0

    def chron(self, x, y) -> bool:
        i, j = self.index_of(x), self.index_of(y)
        if self.cyclic:
            return bool(self._reachable(i[0] * self.n1 + i[1])[j[0] * self.n1 + j[1]])
        if j[0] < i[0]:
            return False
        return bool(self._dp(i, "chron")[0][j])

    def caus(self, x, y) -> bool:
        i, j = self.index_of(x), self.index_of(y)
        if i == j:
            return True
        if self.cyclic:
            return bool(self._reachable(i[0] * self.n1 + i[1])[j[0] * self.n1 + j[1]])
        if j[0] < i[0]:
            return False
        return bool(self._dp(i, "caus")[0][j])

    def maximizer(self, x, y) -> PolylineCurve:
        if self.cyclic:
            raise RuntimeError("no maximizers on a cyclic lattice: tau is infinite")
        i, j = self.index_of(x), self.index_of(y)
        dist, pred = self._dp(i, "tau")
        if not np.isfinite(dist[j]):
            raise ValueError(f"{y!r} is not reachable from {x!r} on the lattice")
        chain = [j]
        cur = j
        while cur != i:
            back = pred[cur]
            if back < 0:
                raise AssertionError("broken predecessor chain")
            cur = (int(back) // self.n1, int(back) % self.n1)
            chain.append(cur)
        chain.reverse()
        pts = tuple(self.node_point(c) for c in chain)
        params = tuple(float(k) for k in range(len(pts)))
        return PolylineCurve(params, pts)

    def handle(self, name=None) -> SpaceHandle:
        return SpaceHandle(
            name=name or f"lattice[{self.plane.name},h={self.h:g},R={self.R}]",
            backend="lattice-spacetime",
            exactness="lower-approximate",
            chron=self.chron,
            caus=self.caus,
            tau=self.tau,
            dist=self._node_dist,
            maximizer=self.maximizer,
            tau_rel_error=0.02,
            resolution_floor=self.R * self.h,
        )

    def _node_dist(self, x, y) -> float:
        d0 = abs(float(y[0]) - float(x[0]))
        if self.wrap:
            period = self.plane.wrap0
            d0 = d0 % period
            d0 = min(d0, period - d0)
        return math.hypot(d0, float(y[1]) - float(x[1]))


def build_lattice(spacetime, region, h: float, R: int, quad_order: int = 5):
    """Discretize a plane spacetime (or a funnel) over a region."""
    if isinstance(spacetime, Funnel):
        return FunnelLattice(spacetime, region, h, R)
    return CausalLattice(spacetime, region, h, R, quad_order)


def lattice_tau(lattice, x, y) -> float:
    """Longest-path time separation between two lattice nodes."""
    return lattice.tau(x, y)


def extract_maximizer(lattice, x, y) -> PolylineCurve:
    """Argmax path realizing ``lattice_tau(x, y)`` as a polyline curve."""
    return lattice.maximizer(x, y)


# ---------------------------------------------------------------------------
# Cache files


def save_lattice(lat: CausalLattice, path) -> None:
    meta = {
        "version": _CACHE_VERSION,
        "spacetime": lat.plane.id_string(),
        "region": lat.region,
        "h": lat.h,
        "R": lat.R,
        "quad_order": lat.quad_order,
    }
    offs = np.array(lat.offsets, dtype=np.int64)
    weights = np.stack([lat._weights[tuple(o)] for o in lat.offsets])
    timelike = np.stack([lat._timelike[tuple(o)] for o in lat.offsets])
    with open(path, "wb") as fh:
        np.savez_compressed(fh, meta=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8),
                            axis0=lat.axis0, axis1=lat.axis1, offsets=offs,
                            weights=weights, timelike=timelike)


def load_lattice(path, plane: _Plane) -> CausalLattice:
    with open(path, "rb") as fh:
        data = np.load(io.BytesIO(fh.read()))
    meta = json.loads(bytes(data["meta"]).decode())
    if meta["version"] != _CACHE_VERSION:
        raise ValueError(f"unsupported cache version {meta['version']}")
    if meta["spacetime"] != plane.id_string():
        raise ValueError(
            f"cache was built for {meta['spacetime']!r}, not {plane.id_string()!r}")
    offsets = [tuple(int(c) for c in o) for o in data["offsets"]]
    weights = {o: data["weights"][k] for k, o in enumerate(offsets)}
    timelike = {o: data["timelike"][k] for k, o in enumerate(offsets)}
    lat = CausalLattice(plane, meta["region"], meta["h"], meta["R"], meta["quad_order"],
                        _arrays=(data["axis0"], data["axis1"], weights, timelike))
    return lat


# ---------------------------------------------------------------------------
# Funnel graph lattice


class FunnelLattice:
    """Sparse DAG lattice over J^-(p), a subdivided chain, and J^+(q).

    Cone nodes carry exact Minkowski edge weights within their cone and a
    direct exact edge to (from) the junction, so cross-cone tau values are
    exact; every cross path runs through the whole chain.
    """

    def __init__(self, funnel: Funnel, region, h: float, R: int):
        if h <= 0 or R < 1:
            raise ValueError("need h > 0 and R >= 1")
        self.funnel = funnel
        self.region = region
        self.h = float(h)
        self.R = int(R)
        self.cyclic = False
        (lo0, hi0), (lo1, hi1) = region
        n0 = int(round((hi0 - lo0) / h)) + 1
        n1 = int(round((hi1 - lo1) / h)) + 1
        ts = lo0 + h * np.arange(n0)
        xs = lo1 + h * np.arange(n1)

        past, future = [], []
        for t in ts:
            for x in xs:
                pt = (round(float(t), 12), round(float(x), 12))
                if pt != tuple(funnel.p) and mink_caus(pt, funnel.p):
                    past.append(("past", pt[0], pt[1]))
                if pt != tuple(funnel.q) and mink_caus(funnel.q, pt):
                    future.append(("future", pt[0], pt[1]))
        past.sort(key=lambda n: (n[1], n[2]))
        future.sort(key=lambda n: (n[1], n[2]))
        m = max(2, int(round(1.0 / h)))
        chain = [("link", i / m) for i in range(1, m)]
        self.nodes = past + [("link", 0.0)] + chain + [("link", 1.0)] + future
        self.index = {n: k for k, n in enumerate(self.nodes)}
        self._adj = [[] for _ in self.nodes]
        self._radj = [[] for _ in self.nodes]

        def add_edge(a, b, w, timelike):
            ia, ib = self.index[a], self.index[b]
            self._adj[ia].append((ib, w, timelike))
            self._radj[ib].append((ia, w, timelike))

        offsets = [(d0, d1) for d0 in range(1, R + 1) for d1 in range(-R, R + 1)
                   if abs(d1) <= d0 and math.gcd(d0, abs(d1)) == 1]
        for tag, bucket in (("past", past), ("future", future)):
            members = {(n[1], n[2]) for n in bucket}
            for n in bucket:
                for d0, d1 in offsets:
                    tgt = (n[1] + d0 * h, n[2] + d1 * h)
                    tgt = (round(tgt[0], 12), round(tgt[1], 12))
                    if tgt in members:
                        w = mink_tau((n[1], n[2]), tgt)
                        add_edge(n, (tag, tgt[0], tgt[1]), w, d0 > abs(d1))
        p_node, q_node = ("link", 0.0), ("link", 1.0)
        for n in past:
            add_edge(n, p_node, mink_tau((n[1], n[2]), funnel.p),
                     mink_chron((n[1], n[2]), funnel.p))
        seg = funnel.link_length / m
        run = [p_node] + chain + [q_node]
        for a, b in zip(run[:-1], run[1:]):
            add_edge(a, b, seg, funnel.link_length > 0)
        for n in future:
            add_edge(q_node, n, mink_tau(funnel.q, (n[1], n[2])),
                     mink_chron(funnel.q, (n[1], n[2])))
        self._dp_cache: OrderedDict = OrderedDict()

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self._adj)

    def index_of(self, point):
        point = self.funnel.canonical(tuple(point))
        key = point if point in self.index else None
        if key is None and point[0] in ("past", "future"):
            key = (point[0], round(float(point[1]), 12), round(float(point[2]), 12))
        if key not in self.index:
            raise ValueError(f"point {point!r} is not a lattice node")
        return self.index[key]

    def _dp(self, src: int):
        cache = self._dp_cache
        if src not in cache:
            n = len(self.nodes)
            dist = np.full(n, -np.inf)
            dist[src] = 0.0
            pred = np.full(n, -1, dtype=np.int64)
            for i in range(src, n):  # node order is topological
                if not np.isfinite(dist[i]):
                    continue
                for j, w, _timelike in self._adj[i]:
                    if dist[i] + w > dist[j]:
                        dist[j] = dist[i] + w
                        pred[j] = i
            cache[src] = (dist, pred)
            while len(cache) > 64:
                cache.popitem(last=False)
        else:
            cache.move_to_end(src)
        return cache[src]

    def tau(self, x, y) -> float:
        i, j = self.index_of(x), self.index_of(y)
        if j < i:
            return 0.0
        val = self._dp(i)[0][j]
        return float(val) if np.isfinite(val) else 0.0

    def caus(self, x, y) -> bool:
        i, j = self.index_of(x), self.index_of(y)
        return i == j or (j > i and bool(np.isfinite(self._dp(i)[0][j])))

    def chron(self, x, y) -> bool:
        # the funnel's chronology is defined through tau positivity
        return self.tau(x, y) > 0.0

    def maximizer(self, x, y) -> PolylineCurve:
        i, j = self.index_of(x), self.index_of(y)
        dist, pred = self._dp(i)
        if j < i or not np.isfinite(dist[j]):
            raise ValueError(f"{y!r} is not reachable from {x!r} on the lattice")
        chain = [j]
        while chain[-1] != i:
            back = int(pred[chain[-1]])
            if back < 0:
                raise AssertionError("broken predecessor chain")
            chain.append(back)
        chain.reverse()
        pts = tuple(self.nodes[k] for k in chain)
        return PolylineCurve(tuple(float(k) for k in range(len(pts))), pts)

    def handle(self, name=None) -> SpaceHandle:
        f = self.funnel
        from .spacetimes import funnel_dist
        return SpaceHandle(
            name=name or f"lattice[funnel,h={self.h:g},R={self.R}]",
            backend="lattice-spacetime",
            exactness="lower-approximate",
            chron=self.chron,
            caus=self.caus,
            tau=self.tau,
            dist=lambda a, b: funnel_dist(f, a, b),
            maximizer=self.maximizer,
            tau_rel_error=0.02,
            resolution_floor=self.R * self.h,
            position=lambda p: f.coords(p),
        )
