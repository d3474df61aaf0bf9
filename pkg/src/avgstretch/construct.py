"""Assembly of the low-average-stretch graph.

Three layers: a 2-spanner over all points (roads), a (1+gamma)-spanner
over one hub per cluster (highways), and one edge from every cluster
point to a representative w_i inside the densest small region E_i near
the cluster.  The representative minimizes, over points of E_i, the
smallest index i(w) of a dense region containing w; that choice is what
keeps detours short when clusters of very different scales overlap.

Variants: "exhaustive" searches ball regions centered at input points;
"sampled" switches to square boxes found by random sampling against a
range tree; "fast" additionally estimates densities from a Bernoulli
sample and restricts the i(w) pass to a subsample.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._kernels import kernels, prep
from .errors import InvalidInputError
from .fairsplit import KPartition, k_partition
from .geometry import AABox, Ball, PointSet
from .rangetree import KEY_SENTINEL, CountMinTree, DualBoxTree
from .spanners import Graph, build_spanner, hub_gamma, merge_graphs

VARIANTS = ("exhaustive", "sampled", "fast")
REP_RULES = ("careful", "naive")

_TAG_COVER = 0xC0FE
_TAG_SUBSAMPLE = 0x5AB5
_TAG_BERNOULLI = 0xBE77


@dataclass
class Params:
    """Construction parameters; select_parameters fills them from n and d."""

    k: int
    c: float
    epsilon: float
    gamma: float
    variant: str = "sampled"
    seed: int = 0
    alpha_samples: float = 3.0
    kappa: Optional[int] = None

    def validate(self):
        if self.variant not in VARIANTS:
            raise InvalidInputError("variant must be one of %s" % (VARIANTS,))
        if self.k < 2:
            raise InvalidInputError("k must be at least 2")
        if self.c < 2.0:
            raise InvalidInputError("scale factor c must be at least 2")
        if not 0.0 < self.epsilon <= 1.0:
            raise InvalidInputError("epsilon must lie in (0, 1]")
        if self.gamma <= 0.0:
            raise InvalidInputError("gamma must be positive")
        if self.alpha_samples <= 0.0:
            raise InvalidInputError("alpha_samples must be positive")
        return self


def select_parameters(n: int, d: int, variant: str = "sampled",
                      kappa: Optional[int] = None, seed: int = 0,
                      alpha_samples: float = 3.0) -> Params:
    """Parameter formulas per variant (natural logarithms throughout).

    exhaustive: k = (n/ln n)^((d-1)/(2d+1)), c = (n/ln n)^(1/(2d+1)),
    eps = (k/n)^(1/3).  sampled/fast for d=2: k = c = (n/ln n)^(1/5);
    for d>=3: k = n^(1/4), c = (ln n / n^(3/4))^(-1/(d+2)).  eps is
    (ln n)^kappa / k with kappa 0 (sampled) or d-1 (fast), clamped to 1.
    k rounds to an integer >= 2 and c clamps to >= 2.
    """
    if variant not in VARIANTS:
        raise InvalidInputError("variant must be one of %s" % (VARIANTS,))
    if n < 4:
        raise InvalidInputError("parameter formulas need n >= 4")
    if d < 1:
        raise InvalidInputError("dimension must be at least 1")
    if kappa is not None and kappa < 0:
        raise InvalidInputError("kappa must be nonnegative")
    ln_n = math.log(n)
    ratio = n / ln_n
    if variant == "exhaustive":
        k_raw = ratio ** ((d - 1) / (2 * d + 1))
        c_raw = ratio ** (1.0 / (2 * d + 1))
    elif d <= 2:
        k_raw = ratio ** 0.2
        c_raw = ratio ** 0.2
    else:
        k_raw = n ** 0.25
        c_raw = (ln_n / n ** 0.75) ** (-1.0 / (d + 2))
    k = max(2, int(round(k_raw)))
    k = min(k, n)
    c = max(2.0, c_raw)
    if variant == "exhaustive":
        eps = (k / n) ** (1.0 / 3.0)
    else:
        kap = kappa if kappa is not None else (d - 1 if variant == "fast" else 0)
        eps = (ln_n ** kap) / k
    eps = min(1.0, eps)
    gamma = hub_gamma(k, max(d, 2), fast=(variant == "fast"), n_total=n)
    return Params(k=k, c=c, epsilon=eps, gamma=gamma, variant=variant,
                  seed=seed, alpha_samples=alpha_samples, kappa=kappa).validate()


def choose_hubs(partition: KPartition) -> np.ndarray:
    """One hub per ball: the lowest point index of the cluster."""
    hubs = np.empty(partition.n_balls, np.int64)
    for i in range(partition.n_balls):
        members = partition.members(i)
        if members.shape[0] == 0:
            raise AssertionError("partition invariant violated: empty cluster")
        hubs[i] = members[0]
    return hubs


@dataclass
class CoverRegions:
    """Per-ball scaled regions D_i, dense regions E_i and representatives.

    shape is "ball" (exhaustive variant: extents are radii) or "box"
    (sampled/fast: extents are half side lengths).  density holds
    |E_i cap V| (an estimate on the fast variant); w_index is -1 where no
    representative exists (empty region or zero-radius cluster).
    """

    shape: str
    e_center: np.ndarray
    e_extent: np.ndarray
    d_extent: np.ndarray
    density: np.ndarray
    chosen_point: np.ndarray
    defined: np.ndarray
    qualifying: np.ndarray = None
    w_index: np.ndarray = None
    threshold: int = 0

    def e_region(self, i: int):
        if self.shape == "ball":
            return Ball(self.e_center[i], float(self.e_extent[i]))
        return AABox(self.e_center[i] - self.e_extent[i],
                     self.e_center[i] + self.e_extent[i])

    def d_region(self, i: int, partition: KPartition):
        if self.shape == "ball":
            return Ball(partition.centers[i], float(self.d_extent[i]))
        center = 0.5 * (partition.root_lo[i] + partition.root_hi[i])
        return AABox(center - self.d_extent[i], center + self.d_extent[i])


def _cover_exhaustive(partition: KPartition, points: PointSet, params: Params) -> CoverRegions:
    best_pt, best_cnt = kernels.exh_cover_batch(
        partition.centers, partition.radii, params.c, points.coords)
    nb = partition.n_balls
    e_center = np.where(best_pt[:, None] >= 0,
                        points.coords[np.maximum(best_pt, 0)],
                        partition.centers)
    return CoverRegions(
        shape="ball",
        e_center=e_center,
        e_extent=partition.radii / params.c,
        d_extent=partition.radii * params.c,
        density=best_cnt.astype(np.float64),
        chosen_point=best_pt,
        defined=partition.radii > 0.0,
    )


def _cover_sampled(partition: KPartition, points: PointSet, params: Params,
                   tree: CountMinTree, scale: float) -> CoverRegions:
    """Square-box cover search by per-ball random sampling.

    tree counts either V (sampled) or the Bernoulli sample V' (fast);
    counts are scaled by 1/p through `scale`.  Every ball consumes its
    own substream seed^i, so results are independent of batching.
    """
    n = points.n
    nb = partition.n_balls
    sides = partition.box_sides()
    centers = 0.5 * (partition.root_lo + partition.root_hi)
    nsamp = max(1, int(math.ceil(params.alpha_samples * math.log(max(n, 2)) / params.epsilon)))
    draws = prep.draw_below_multi(params.seed, _TAG_COVER ^ np.arange(nb), nsamp, n)
    if points.d == 2 and tree.d == 2:
        r = tree._rt2
        offs = np.arange(0, (nb + 1) * nsamp, nsamp, dtype=np.int64)
        best_pt, best_cnt = kernels.cover_sample_batch(
            draws.ravel(), offs, centers, sides, params.c, points.coords,
            r.xs, r.ys_flat, r.levels, r.m, r.big_m)
    else:
        best_pt = np.full(nb, -1, np.int64)
        best_cnt = np.full(nb, -1, np.int64)
        half_dp = 0.5 * (params.c + 0.5 / params.c) * sides
        he = 0.5 * sides / params.c
        for i in range(nb):
            if sides[i] <= 0.0:
                best_cnt[i] = 0
                continue
            cand = draws[i]
            inside = np.all(np.abs(points.coords[cand] - centers[i]) <= half_dp[i], axis=1)
            cand = cand[inside]
            if cand.shape[0]:
                clo = points.coords[cand] - he[i]
                chi = points.coords[cand] + he[i]
                cnts = tree.count_batch(clo, chi)
                j = int(np.argmax(cnts))
                best_pt[i] = cand[j]
                best_cnt[i] = cnts[j]
            else:
                best_pt[i] = -1
                best_cnt[i] = int(tree.count_batch((centers[i] - he[i])[None, :],
                                                   (centers[i] + he[i])[None, :])[0])
    e_center = np.where(best_pt[:, None] >= 0,
                        points.coords[np.maximum(best_pt, 0)],
                        centers)
    return CoverRegions(
        shape="box",
        e_center=e_center,
        e_extent=0.5 * sides / params.c,
        d_extent=0.5 * sides * params.c,
        density=best_cnt.astype(np.float64) * scale,
        chosen_point=best_pt,
        defined=sides > 0.0,
    )


def find_cover_exhaustive(i: int, partition: KPartition, points: PointSet,
                          params: Params):
    """Single-ball exhaustive cover entry (see _cover_exhaustive)."""
    covers = _cover_exhaustive(partition, points, params)
    return covers.e_region(i), float(covers.density[i]), int(covers.chosen_point[i])


def find_cover_sampled(i: int, partition: KPartition, points: PointSet,
                       tree: CountMinTree, params: Params):
    covers = _cover_sampled(partition, points, params, tree, 1.0)
    return covers.e_region(i), float(covers.density[i]), int(covers.chosen_point[i])


def _encode_iw(iw: np.ndarray, n: int, n_balls: int) -> np.ndarray:
    """Pack (i(w), point id) into one sortable key; infinite i(w) sorts last."""
    idx = np.where(iw >= 0, iw, n_balls)
    return idx * np.int64(n + 1) + np.arange(n, dtype=np.int64)


def assign_representatives(covers: CoverRegions, points: PointSet,
                           params: Params, partition: KPartition,
                           rep_rule: str = "careful",
                           subsample: Optional[np.ndarray] = None) -> CoverRegions:
    """Fill covers.w_index with the representative of each region.

    careful: w_i minimizes i(w) over E_i (ties by point index), where
    i(w) is the smallest index of a qualifying region (density >=
    ceil(eps*n)) containing w; points with no qualifying region count as
    infinity, so when nothing qualifies the lowest-index point of E_i
    wins.  naive: always the lowest-index point of E_i.  On the fast
    variant the i(w) pass is restricted to `subsample`, falling back to
    the lowest-index point of E_i when the subsample misses it.
    """
    if rep_rule not in REP_RULES:
        raise InvalidInputError("rep_rule must be one of %s" % (REP_RULES,))
    if rep_rule == "naive":
        subsample = None  # the baseline rule reads E_i over all of V
    n = points.n
    nb = partition.n_balls
    threshold = max(1, int(math.ceil(params.epsilon * n)))
    qualifying = covers.defined & (covers.density >= threshold)
    covers.qualifying = qualifying
    covers.threshold = threshold
    qual_idx = np.flatnonzero(qualifying)

    if rep_rule == "naive" or qual_idx.shape[0] == 0:
        iw_full = np.full(n, -1, np.int64)
    elif covers.shape == "ball":
        pos = kernels.exh_iw(covers.e_center[qual_idx],
                             covers.e_extent[qual_idx], points.coords)
        iw_full = np.where(pos >= 0, qual_idx[np.maximum(pos, 0)], -1)
    else:
        if qual_idx.shape[0]:
            dual = DualBoxTree(covers.e_center[qual_idx] - covers.e_extent[qual_idx, None],
                               covers.e_center[qual_idx] + covers.e_extent[qual_idx, None],
                               qual_idx, key="index")
            if subsample is None:
                iw_full = dual.query_batch(points.coords)
            else:
                iw_full = np.full(n, -1, np.int64)
                iw_full[subsample] = dual.query_batch(points.coords[subsample])
        else:
            iw_full = np.full(n, -1, np.int64)

    enc = _encode_iw(iw_full, n, nb)
    defined_idx = np.flatnonzero(covers.defined)
    w_index = np.full(nb, -1, np.int64)

    if covers.shape == "ball":
        scan_enc = enc
        if subsample is not None:
            raise InvalidInputError("subsampled i(w) needs the box variant")
        got = kernels.exh_wi(covers.e_center[defined_idx],
                             covers.e_extent[defined_idx], scan_enc, points.coords)
        w_index[defined_idx] = got
    else:
        blo = covers.e_center[defined_idx] - covers.e_extent[defined_idx, None]
        bhi = covers.e_center[defined_idx] + covers.e_extent[defined_idx, None]
        if subsample is None:
            tree_v = CountMinTree(points)
            best = tree_v.min_key_batch(enc, blo, bhi)
            hit = best < KEY_SENTINEL
            w_index[defined_idx[hit]] = best[hit] % np.int64(n + 1)
        else:
            sub_points = PointSet(points.coords[subsample])
            tree_sub = CountMinTree(sub_points)
            best = tree_sub.min_key_batch(enc[subsample], blo, bhi)
            hit = best < KEY_SENTINEL
            w_index[defined_idx[hit]] = best[hit] % np.int64(n + 1)
            # subsample missed the region: lowest-index point of E_i over V
            miss = defined_idx[~hit]
            if miss.shape[0]:
                tree_v = CountMinTree(points)
                got = tree_v.min_index_batch(blo[~hit], bhi[~hit])
                ok = got < KEY_SENTINEL
                w_index[miss[ok]] = got[ok]
    covers.w_index = w_index
    return covers


@dataclass
class BuildReport:
    n: int
    d: int
    variant: str
    seed: int
    k: int
    c: float
    epsilon: float
    gamma: float
    rep_rule: str
    n_balls: int = 0
    alpha: float = 0.0
    zero_radius_clusters: int = 0
    qualifying_regions: int = 0
    density_threshold: int = 0
    max_density: float = 0.0
    edges_roads: int = 0
    edges_highways: int = 0
    edges_representative: int = 0
    edges_total: int = 0
    phase_seconds: dict = field(default_factory=dict)

    @property
    def build_seconds(self) -> float:
        return float(sum(self.phase_seconds.values()))


@dataclass
class BuildResult:
    graph: Graph
    report: BuildReport
    partition: KPartition
    covers: Optional[CoverRegions]
    hubs: np.ndarray
    layers: dict

    def graph_without(self, *drop) -> Graph:
        """Re-merge the layer edge sets, leaving some layers out."""
        points = self._points
        kept = [(u, v) for name, (u, v) in self.layers.items() if name not in drop]
        return merge_graphs(points, kept)


def build(points: PointSet, params: Params, rep_rule: str = "careful") -> BuildResult:
    """Construct roads + highways + representative edges, deduplicated."""
    params.validate()
    if points.n < 2:
        warnings.warn("construction on fewer than 2 points is trivial")
        graph = Graph.from_edges(points, np.zeros(0, np.int64), np.zeros(0, np.int64))
        report = BuildReport(points.n, points.d, params.variant, params.seed,
                             params.k, params.c, params.epsilon, params.gamma, rep_rule)
        result = BuildResult(graph, report, None, None, np.zeros(0, np.int64), {})
        result._points = points
        return result
    points.require_distinct("construction")
    if params.k > points.n:
        raise InvalidInputError("k exceeds the number of points")
    report = BuildReport(points.n, points.d, params.variant, params.seed,
                         params.k, params.c, params.epsilon, params.gamma, rep_rule)
    phases = report.phase_seconds

    t0 = time.perf_counter()
    partition = k_partition(points, params.k)
    hubs = choose_hubs(partition)
    phases["partition"] = time.perf_counter() - t0
    report.n_balls = partition.n_balls
    report.alpha = partition.alpha

    t0 = time.perf_counter()
    roads = build_spanner(points, 2.0)
    phases["roads"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if hubs.shape[0] >= 2:
        hub_points = PointSet(points.coords[hubs])
        hub_graph = build_spanner(hub_points, 1.0 + params.gamma)
        hw_u, hw_v = hubs[hub_graph.eu], hubs[hub_graph.ev]
    else:
        hw_u = hw_v = np.zeros(0, np.int64)
    phases["highways"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    subsample = None
    if params.variant == "exhaustive":
        covers = _cover_exhaustive(partition, points, params)
    else:
        if params.variant == "fast":
            p = min(1.0, params.alpha_samples / max(math.log(points.n) ** (points.d - 2), 1e-12))
        else:
            p = 1.0
        if p >= 1.0:
            count_tree = CountMinTree(points)
            scale = 1.0
        else:
            coins = prep.draw_floats(params.seed, _TAG_BERNOULLI, points.n)
            sample_v1 = np.flatnonzero(coins < p)
            if sample_v1.shape[0] == 0:
                sample_v1 = np.array([0], np.int64)
            count_tree = CountMinTree(PointSet(points.coords[sample_v1]))
            scale = 1.0 / p
        covers = _cover_sampled(partition, points, params, count_tree, scale)
        if params.variant == "fast":
            sub_size = max(1, int(math.ceil(points.n / max(math.log(points.n), 1.0) ** (points.d - 1))))
            sub_size = min(sub_size, points.n)
            subsample = np.sort(prep.sample_without_replacement(
                params.seed, _TAG_SUBSAMPLE, sub_size, points.n))
    phases["covers"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    covers = assign_representatives(covers, points, params, partition,
                                    rep_rule=rep_rule, subsample=subsample)
    rep_u = []
    rep_v = []
    for i in range(partition.n_balls):
        wi = covers.w_index[i]
        if wi < 0:
            continue
        members = partition.members(i)
        rep_u.append(members[members != wi])
        rep_v.append(np.full(rep_u[-1].shape[0], wi, np.int64))
    rep_u = np.concatenate(rep_u) if rep_u else np.zeros(0, np.int64)
    rep_v = np.concatenate(rep_v) if rep_v else np.zeros(0, np.int64)
    phases["representatives"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    layers = {
        "roads": (roads.eu, roads.ev),
        "highways": (hw_u, hw_v),
        "representatives": (rep_u, rep_v),
    }
    graph = merge_graphs(points, list(layers.values()))
    phases["merge"] = time.perf_counter() - t0

    report.zero_radius_clusters = int(np.sum(~covers.defined))
    report.qualifying_regions = int(np.sum(covers.qualifying))
    report.density_threshold = covers.threshold
    report.max_density = float(covers.density.max()) if partition.n_balls else 0.0
    report.edges_roads = roads.edge_count
    report.edges_highways = int(prep.dedup_edges(hw_u, hw_v)[0].shape[0])
    report.edges_representative = int(prep.dedup_edges(rep_u, rep_v)[0].shape[0])
    report.edges_total = graph.edge_count

    result = BuildResult(graph, report, partition, covers, hubs, layers)
    result._points = points
    return result
