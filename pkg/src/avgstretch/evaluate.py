"""Average and worst-case stretch measurement, exact and sampled.

Exact mode runs one shortest-path tree per vertex and folds the pair
ratios on the fly; vertices are relabeled into Morton order first so the
distance arrays stay cache-friendly.  Per-source partials are combined
with compensated addition in a fixed order, so results do not depend on
thread scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._kernels import kernels, prep
from .errors import DisconnectedGraphError, InvalidInputError
from .geometry import PointSet
from .spanners import Graph

EXACT_BUDGET = 20000
_PAIR_TAG_U = 0x70AA
_PAIR_TAG_V = 0x70AB


@dataclass
class StretchReport:
    asf: float
    pair_count: int
    method: str
    stderr: Optional[float] = None
    strf: Optional[float] = None

    def describe(self) -> str:
        if self.method == "exact":
            return "exact"
        return "sampled(%d)" % self.pair_count


@dataclass
class StretchHistogram:
    edges: np.ndarray
    counts: np.ndarray

    def write_csv(self, fh) -> None:
        for i in range(self.counts.shape[0]):
            fh.write("%r,%r,%d\n" % (float(self.edges[i]),
                                     float(self.edges[i + 1]),
                                     int(self.counts[i])))


def _kahan(values) -> float:
    total = 0.0
    comp = 0.0
    for v in values:
        y = float(v) - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def _relabeled_csr(graph: Graph, points: PointSet):
    """(indptr, indices, weights, coords, inv) with Morton-ordered ids."""
    perm = prep.morton_order(points.coords)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.shape[0])
    g2 = graph.relabeled(inv)
    indptr, indices, w = prep.build_csr(graph.n, g2.eu, g2.ev, g2.w)
    return indptr, indices, w, points.coords[perm], inv


def _check_inputs(graph: Graph, points: PointSet, context: str):
    if graph.n != points.n:
        raise InvalidInputError("%s: graph and point set sizes differ" % context)
    points.require_distinct(context)


def shortest_paths_from(graph: Graph, source: int) -> np.ndarray:
    """Exact shortest-path distances from one vertex; inf where unreachable."""
    if not 0 <= source < graph.n:
        raise InvalidInputError("source vertex out of range")
    indptr, indices, w = graph.csr()
    return kernels.sssp_dist(indptr, indices, w, source)


def _exact_stats(graph: Graph, points: PointSet):
    indptr, indices, w, coords, _ = _relabeled_csr(graph, points)
    per_sum, per_max, per_reach = kernels.asf_exact_accum(indptr, indices, w, coords)
    n = graph.n
    npairs = n * (n - 1) // 2
    reached = int(per_reach.sum())
    return _kahan(per_sum), float(per_max.max()) if n > 1 else 1.0, reached, npairs


def _budget_check(n, override, context):
    if n > EXACT_BUDGET and not override:
        raise InvalidInputError(
            "%s: n=%d exceeds the exact-mode budget (%d); pass exact_override=True "
            "or sample" % (context, n, EXACT_BUDGET))


def average_stretch_exact(graph: Graph, points: PointSet,
                          exact_override: bool = False) -> StretchReport:
    _check_inputs(graph, points, "average_stretch_exact")
    if graph.n < 2:
        raise InvalidInputError("average stretch needs at least two points")
    _budget_check(graph.n, exact_override, "average_stretch_exact")
    total, mx, reached, npairs = _exact_stats(graph, points)
    if reached != npairs:
        raise DisconnectedGraphError("graph is disconnected; stretch is infinite")
    return StretchReport(asf=total / npairs, pair_count=npairs,
                         method="exact", stderr=None, strf=mx)


def worst_stretch(graph: Graph, points: PointSet,
                  exact_override: bool = False) -> float:
    report = average_stretch_exact(graph, points, exact_override)
    return float(report.strf)


def worst_stretch_or_inf(graph: Graph, points: PointSet) -> float:
    """Worst-case stretch, inf for disconnected inputs (spanner checks)."""
    _check_inputs(graph, points, "verify_stretch")
    if graph.n < 2:
        return 1.0
    total, mx, reached, npairs = _exact_stats(graph, points)
    if reached != npairs:
        return float("inf")
    return mx


def sample_pairs(n: int, m: int, seed: int):
    """m distinct unordered pairs, uniform, deterministic in the seed."""
    npairs = n * (n - 1) // 2
    if m > npairs:
        raise InvalidInputError("cannot sample %d distinct pairs of %d" % (m, npairs))
    chosen = np.empty(0, np.int64)
    round_no = 0
    while chosen.shape[0] < m:
        need = m - chosen.shape[0]
        batch = int(need * 1.15) + 16
        uu = prep.draw_below(seed, _PAIR_TAG_U + 131 * round_no, batch, n)
        vv = prep.draw_below(seed, _PAIR_TAG_V + 131 * round_no, batch, n)
        ok = uu != vv
        uu, vv = uu[ok], vv[ok]
        a = np.minimum(uu, vv)
        b = np.maximum(uu, vv)
        code = a * n + b
        code = code[~np.isin(code, chosen)]
        _, first = np.unique(code, return_index=True)
        code = code[np.sort(first)]
        chosen = np.concatenate([chosen, code[:m - chosen.shape[0]]])
        round_no += 1
    u = chosen // n
    v = chosen % n
    return u, v


def average_stretch_sampled(graph: Graph, points: PointSet, m: int,
                            seed: int = 0) -> StretchReport:
    """Mean stretch over m uniformly sampled distinct pairs.

    Falls back to the exact evaluator (stderr 0) when m exhausts the pair
    space.  Shortest paths are grouped per sampled source, so every
    source is solved once.
    """
    _check_inputs(graph, points, "average_stretch_sampled")
    if graph.n < 2:
        raise InvalidInputError("average stretch needs at least two points")
    if m < 1:
        raise InvalidInputError("sample size must be positive")
    npairs = graph.n * (graph.n - 1) // 2
    if m >= npairs:
        report = average_stretch_exact(graph, points,
                                       exact_override=graph.n <= EXACT_BUDGET * 4)
        report.stderr = 0.0
        return report
    if not graph.is_connected():
        raise DisconnectedGraphError("graph is disconnected; stretch is infinite")
    u, v = sample_pairs(graph.n, m, seed)

    indptr, indices, w, coords, inv = _relabeled_csr(graph, points)
    ru, rv = inv[u], inv[v]
    src = np.minimum(ru, rv)
    tgt = np.maximum(ru, rv)
    order = np.argsort(src, kind="stable")
    src_sorted = src[order]
    tgt_sorted = tgt[order]
    sources, starts = np.unique(src_sorted, return_index=True)
    offsets = np.concatenate([starts, [m]]).astype(np.int64)
    ratios = kernels.pairs_ratios(indptr, indices, w, coords,
                                  sources.astype(np.int64), tgt_sorted, offsets)
    mean = float(np.sum(ratios) / m)
    if m > 1:
        var = float(np.sum((ratios - mean) ** 2) / (m - 1))
        stderr = (var / m) ** 0.5
    else:
        stderr = 0.0
    return StretchReport(asf=mean, pair_count=m, method="sampled",
                         stderr=stderr, strf=None)


def stretch_histogram(graph: Graph, points: PointSet, buckets: int = 32,
                      exact_override: bool = False) -> StretchHistogram:
    """Exact pair-ratio histogram over [1, max]; counts sum to n(n-1)/2."""
    _check_inputs(graph, points, "stretch_histogram")
    if graph.n < 2:
        raise InvalidInputError("histogram needs at least two points")
    if buckets < 1:
        raise InvalidInputError("need at least one bucket")
    _budget_check(graph.n, exact_override, "stretch_histogram")
    total, mx, reached, npairs = _exact_stats(graph, points)
    if reached != npairs:
        raise DisconnectedGraphError("graph is disconnected; stretch is infinite")
    if mx <= 1.0:
        return StretchHistogram(np.array([1.0, 1.0]),
                                np.array([npairs], np.int64))
    edges = np.linspace(1.0, mx, buckets + 1)
    indptr, indices, w, coords, _ = _relabeled_csr(graph, points)
    per_src = kernels.hist_counts(indptr, indices, w, coords, edges)
    return StretchHistogram(edges, per_src.sum(axis=0))
