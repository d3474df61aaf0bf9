"""Worst-case t-spanner builders and the weighted geometric graph type.

d=2 uses the cone construction: split directions into K cones narrow
enough that 1/(cos th - sin th) <= t and connect every point, per cone,
to the point minimizing the projection on the cone bisector.  The sweep
per cone is a Fenwick pass over a dominance ordering, O(n log n).
d>=3 reuses the fair-split tree: one edge between subtree representatives
per well-separated pair with separation s = 4(t+1)/(t-1), giving stretch
(s+4)/(s-4) <= t.  d=1 is the sorted chain.
"""

from __future__ import annotations

import math

import numpy as np

from ._kernels import kernels, prep
from .errors import InvalidInputError
from .geometry import PointSet


class Graph:
    """Undirected simple graph over point indices with Euclidean weights."""

    def __init__(self, n, eu, ev, w):
        self.n = int(n)
        self.eu = eu
        self.ev = ev
        self.w = w
        self._csr = None

    @classmethod
    def from_edges(cls, points: PointSet, u, v) -> "Graph":
        u, v = prep.dedup_edges(u, v)
        if u.size and (u.min() < 0 or max(u.max(), v.max()) >= points.n):
            raise InvalidInputError("edge endpoint out of range")
        w = np.sqrt(np.sum((points.coords[u] - points.coords[v]) ** 2, axis=1))
        return cls(points.n, u, v, w)

    @property
    def edge_count(self) -> int:
        return self.eu.shape[0]

    def csr(self):
        if self._csr is None:
            self._csr = prep.build_csr(self.n, self.eu, self.ev, self.w)
        return self._csr

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        indptr, indices, w = self.csr()
        dist = kernels.sssp_dist(indptr, indices, w, 0)
        return bool(np.all(np.isfinite(dist)))

    def edges(self):
        return self.eu, self.ev, self.w

    def relabeled(self, perm):
        """Graph with vertex i renamed to perm[i]; weights untouched."""
        perm = np.asarray(perm, np.int64)
        return Graph(self.n, perm[self.eu], perm[self.ev], self.w)


def merge_graphs(points: PointSet, edge_layers) -> Graph:
    """Union of several (u, v) edge arrays over one point set."""
    us = [np.asarray(u, np.int64) for u, _ in edge_layers]
    vs = [np.asarray(v, np.int64) for _, v in edge_layers]
    u = np.concatenate(us) if us else np.zeros(0, np.int64)
    v = np.concatenate(vs) if vs else np.zeros(0, np.int64)
    return Graph.from_edges(points, u, v)


def cone_count(t: float) -> int:
    """Cones needed so the projection rule certifies stretch <= t (d=2)."""
    theta_max = math.acos(1.0 / (math.sqrt(2.0) * t)) - math.pi / 4.0
    return max(8, int(math.ceil(2.0 * math.pi / theta_max)))


def _theta_edges_2d(coords, t):
    n = coords.shape[0]
    if n < 2:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    K = cone_count(t)
    theta = 2.0 * math.pi / K
    ids = np.arange(n, dtype=np.int64)
    us = []
    ws = []
    x = coords[:, 0]
    y = coords[:, 1]
    for c in range(K):
        phi = c * theta
        # inward normals of the cone edges and the bisector direction
        s_arr = -math.sin(phi) * x + math.cos(phi) * y
        t_arr = math.sin(phi + theta) * x - math.cos(phi + theta) * y
        b = phi + 0.5 * theta
        proj = math.cos(b) * x + math.sin(b) * y
        order = np.lexsort((ids, -t_arr, -s_arr))
        newgrp = np.ones(n, np.uint8)
        svals = s_arr[order]
        newgrp[1:] = (svals[1:] != svals[:-1]).astype(np.uint8)
        t_sorted = np.sort(t_arr)
        t_rank = np.searchsorted(t_sorted, t_arr, "left").astype(np.int64)
        out_tgt = np.full(n, -1, np.int64)
        kernels.theta_sweep(order, newgrp, t_rank, proj, out_tgt)
        hit = out_tgt >= 0
        us.append(ids[hit])
        ws.append(out_tgt[hit])
    return np.concatenate(us), np.concatenate(ws)


def _wspd_edges(coords, t):
    lo, hi, left, right, leaf_pt = kernels.fst_build(coords)
    cen = 0.5 * (lo + hi)
    rad = 0.5 * np.sqrt(np.sum((hi - lo) ** 2, axis=1))
    side = np.max(hi - lo, axis=1)
    rep = kernels.subtree_min_point(left, right, leaf_pt)
    s = 4.0 * (t + 1.0) / (t - 1.0)
    return kernels.wspd_pairs(left, right, cen, rad, side, rep, s)


def build_spanner(points: PointSet, t: float) -> Graph:
    """Geometric t-spanner with O(n) edges at fixed t and dimension."""
    if not t > 1.0:
        raise InvalidInputError("spanner stretch bound must exceed 1")
    if points.n < 1:
        raise InvalidInputError("spanner needs at least one point")
    points.require_distinct("spanner construction")
    if points.n == 1:
        return Graph.from_edges(points, np.zeros(0, np.int64), np.zeros(0, np.int64))
    if points.d == 1:
        order = np.argsort(points.coords[:, 0], kind="stable").astype(np.int64)
        return Graph.from_edges(points, order[:-1], order[1:])
    if points.d == 2:
        u, v = _theta_edges_2d(points.coords, t)
    else:
        u, v = _wspd_edges(points.coords, t)
    return Graph.from_edges(points, u, v)


def hub_gamma(k: int, d: int, fast: bool = False, n_total=None) -> float:
    """Highway slack: 1/k^(1/(d-1)), or the reduced-precision variant
    (ln^(d-2) n / k)^(1/(d-1)) for the near-linear-time build."""
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    if d < 2:
        return 1.0 / k
    if fast and d > 2:
        if n_total is None or n_total < 2:
            raise InvalidInputError("fast highway slack needs the total point count")
        return (math.log(n_total) ** (d - 2) / k) ** (1.0 / (d - 1))
    return (1.0 / k) ** (1.0 / (d - 1))


def build_hub_spanner(hubs: PointSet, k: int, d=None, fast: bool = False,
                      n_total=None) -> Graph:
    if d is None:
        d = hubs.d
    gamma = hub_gamma(k, d, fast, n_total)
    return build_spanner(hubs, 1.0 + gamma)


def verify_stretch(graph: Graph, points: PointSet) -> float:
    """Worst-case stretch by exact all-source shortest paths; inf when
    the graph is disconnected."""
    from . import evaluate
    return evaluate.worst_stretch_or_inf(graph, points)


def write_edge_list(graph: Graph, fh) -> None:
    for u, v, w in zip(graph.eu, graph.ev, graph.w):
        fh.write("%d %d %r\n" % (int(u), int(v), float(w)))
