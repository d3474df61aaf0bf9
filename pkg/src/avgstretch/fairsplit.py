"""Fair-split trees and the derived k-partition of a point set.

The tree recursively bisects the minimal bounding box through the middle
of its longest side (ties: lowest axis; points exactly on the cut plane
go to the lower child).  A k-partition cuts the tree into connected
components, encloses each component root's box in a ball, and assigns
every point to the ball of its leaf's component.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import kernels
from .errors import InvalidInputError
from .geometry import Ball, PointSet


@dataclass(frozen=True)
class FairSplitTree:
    """Flat array form of the tree; nodes are preorder, root is 0."""

    lo: np.ndarray          # (2n-1, d) node box lower corners
    hi: np.ndarray          # (2n-1, d) node box upper corners
    left: np.ndarray        # (2n-1,) child ids, -1 on leaves
    right: np.ndarray
    leaf_pt: np.ndarray     # (2n-1,) point id on leaves, -1 inside

    @property
    def node_count(self) -> int:
        return self.left.shape[0]

    @property
    def d(self) -> int:
        return self.lo.shape[1]

    def is_leaf(self, v: int) -> bool:
        return self.left[v] == -1

    def node_sides(self) -> np.ndarray:
        return np.max(self.hi - self.lo, axis=1)

    def node_balls(self):
        centers = 0.5 * (self.lo + self.hi)
        radii = 0.5 * np.sqrt(np.sum((self.hi - self.lo) ** 2, axis=1))
        return centers, radii


def build_tree(points: PointSet) -> FairSplitTree:
    if points.n < 1:
        raise InvalidInputError("fair-split tree needs at least one point")
    points.require_distinct("fair-split tree construction")
    lo, hi, left, right, leaf_pt = kernels.fst_build(points.coords)
    return FairSplitTree(lo, hi, left, right, leaf_pt)


def partition_components(tree: FairSplitTree, k: int):
    """Roots of the components left after cutting the tree down to <= k
    nodes apiece; roots are returned in node-id order."""
    nn = tree.node_count
    if not 1 <= k:
        raise InvalidInputError("component budget must be positive")
    if k >= nn:
        return np.zeros(1, np.int64), np.zeros(nn, np.uint8)
    cut, status = kernels.fst_split(tree.left, tree.right, k)
    if status != 0:
        raise AssertionError("no qualifying split edge found; tree corrupt")
    roots = np.flatnonzero(cut).astype(np.int64)
    roots = np.concatenate([np.zeros(1, np.int64), roots])
    return roots, cut


@dataclass(frozen=True)
class KPartition:
    """Balls sorted by increasing radius plus the point assignment."""

    centers: np.ndarray      # (n', d)
    radii: np.ndarray        # (n',)
    roots: np.ndarray        # (n',) component-root node ids
    root_lo: np.ndarray      # (n', d) component-root boxes
    root_hi: np.ndarray
    assignment: np.ndarray   # (n,) point -> ball index
    counts: np.ndarray       # (n',) points per ball
    k: int
    n: int
    cluster_points: list = field(repr=False, default=None)

    @property
    def n_balls(self) -> int:
        return self.radii.shape[0]

    @property
    def alpha(self) -> float:
        """Measured constant of the ball-count bound n' <= alpha * n / k."""
        return self.n_balls * self.k / self.n

    def ball(self, i: int) -> Ball:
        return Ball(self.centers[i], float(self.radii[i]))

    def box_sides(self) -> np.ndarray:
        """Longest side of each component-root box (square-box variant)."""
        return np.max(self.root_hi - self.root_lo, axis=1)

    def members(self, i: int) -> np.ndarray:
        return self.cluster_points[i]

    def dump_csv(self, fh) -> None:
        for i in range(self.n_balls):
            center = ",".join(repr(float(c)) for c in self.centers[i])
            fh.write("%d,%s,%r,%d\n" % (i, center, float(self.radii[i]), int(self.counts[i])))


def k_partition(points: PointSet, k: int) -> KPartition:
    """k-partition via the fair-split tree.

    Components are limited to 2k-1 tree nodes, which caps their leaves
    (and so the points per ball) at k.  Components without leaves define
    no ball.  Balls are sorted by radius, ties by component discovery
    order, so indices are reproducible.
    """
    if not 1 <= k <= points.n:
        raise InvalidInputError("k must be in [1, n]")
    tree = build_tree(points)
    return partition_from_tree(tree, points, k)


def partition_from_tree(tree: FairSplitTree, points: PointSet, k: int) -> KPartition:
    roots, cut = partition_components(tree, 2 * k - 1)
    comp_of_node = kernels.fst_components(tree.left, tree.right, cut)
    leaf_mask = tree.leaf_pt >= 0
    pt_comp = np.empty(points.n, np.int64)
    pt_comp[tree.leaf_pt[leaf_mask]] = comp_of_node[leaf_mask]
    counts_all = np.bincount(pt_comp, minlength=roots.shape[0])
    keep = np.flatnonzero(counts_all > 0)
    # components made of internal nodes only carry no points: no ball
    roots = roots[keep]
    remap = np.full(counts_all.shape[0], -1, np.int64)
    remap[keep] = np.arange(keep.shape[0])
    pt_comp = remap[pt_comp]
    counts = counts_all[keep]

    box_lo = tree.lo[roots]
    box_hi = tree.hi[roots]
    centers = 0.5 * (box_lo + box_hi)
    radii = 0.5 * np.sqrt(np.sum((box_hi - box_lo) ** 2, axis=1))
    order = np.lexsort((np.arange(roots.shape[0]), radii))
    rank = np.empty_like(order)
    rank[order] = np.arange(order.shape[0])

    assignment = rank[pt_comp]
    by_ball = np.argsort(assignment, kind="stable").astype(np.int64)
    bounds = np.cumsum(counts[order])[:-1]
    members = np.split(by_ball, bounds)
    return KPartition(
        centers=centers[order],
        radii=radii[order],
        roots=roots[order],
        root_lo=box_lo[order],
        root_hi=box_hi[order],
        assignment=assignment,
        counts=counts[order],
        k=k,
        n=points.n,
        cluster_points=members,
    )


@dataclass(frozen=True)
class PropertyReport:
    """Per-probe statistics for the bounded-overlap and bounded-density
    partition properties, plus their maxima."""

    overlap_counts: np.ndarray   # balls with radius in [r, 2r) containing p
    density_ratios: np.ndarray   # points in Ball(p, r) with big assigned balls, / k
    max_overlap: int
    max_density: float


def probe_properties(partition: KPartition, points: PointSet, probes) -> PropertyReport:
    n_probes = len(probes)
    overlap = np.zeros(n_probes, np.int64)
    density = np.zeros(n_probes)
    radii_of_assigned = partition.radii[partition.assignment]
    for t, (center, r) in enumerate(probes):
        center = np.asarray(center, dtype=np.float64)
        r = float(r)
        in_range = (partition.radii >= r) & (partition.radii < 2 * r)
        if np.any(in_range):
            dc = np.sqrt(np.sum((partition.centers[in_range] - center) ** 2, axis=1))
            overlap[t] = int(np.sum(dc <= partition.radii[in_range]))
        dp = np.sqrt(np.sum((points.coords - center) ** 2, axis=1))
        density[t] = np.sum((dp <= r) & (radii_of_assigned >= r)) / partition.k
    max_overlap = int(overlap.max()) if n_probes else 0
    max_density = float(density.max()) if n_probes else 0.0
    return PropertyReport(overlap, density, max_overlap, max_density)
