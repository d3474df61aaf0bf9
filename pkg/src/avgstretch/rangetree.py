"""Orthogonal range structures: point counting, minimum-index retrieval,
and smallest-qualifying-box lookup through box-point duality.

The d=2 structure is a layered range tree stored as per-level merge rows
(see _kernels.prep.Rt2Layout) and queried by compiled kernels; d=1 is a
sorted array with a segment tree; d>=3 falls back to a recursive python
layered tree sized for the small instances that need it.

Box duals: a square box maps to the point (corner coords, side length)
in R^{d+1}; containment queries run on the (lo, hi) corner expansion of
that dual through a bounding-volume tree with min-key pruning.
"""

from __future__ import annotations

import numpy as np

from ._kernels import kernels, prep
from .errors import InvalidInputError
from .geometry import AABox, PointSet

KEY_SENTINEL = int(np.int64(1) << np.int64(62))
_LEAF = 32


class _LastAxis:
    __slots__ = ("vals", "ids")

    def __init__(self, vals, ids):
        order = np.lexsort((ids, vals))
        self.vals = vals[order]
        self.ids = ids[order]

    def count(self, lo, hi):
        return int(np.searchsorted(self.vals, hi, "right")
                   - np.searchsorted(self.vals, lo, "left"))

    def min_key(self, lo, hi, keys):
        a = np.searchsorted(self.vals, lo, "left")
        b = np.searchsorted(self.vals, hi, "right")
        if a >= b:
            return KEY_SENTINEL
        return int(keys[self.ids[a:b]].min())


class _AxisNode:
    __slots__ = ("vals", "mid", "left", "right", "sub", "ids")

    def __init__(self, coords, ids, axis):
        d = coords.shape[1]
        vals = coords[ids, axis]
        order = np.lexsort((ids, vals))
        ids = ids[order]
        self.vals = vals[order]
        if axis == d - 2:
            self.sub = _LastAxis(coords[ids, axis + 1], ids)
        else:
            self.sub = _AxisNode(coords, ids, axis + 1)
        self.ids = ids
        if ids.shape[0] <= _LEAF:
            self.mid = None
            self.left = None
            self.right = None
            return
        h = ids.shape[0] // 2
        self.mid = self.vals[h]
        self.left = _AxisNode(coords, ids[:h], axis)
        self.right = _AxisNode(coords, ids[h:], axis)

    def _ranks(self, lo, hi):
        return (np.searchsorted(self.vals, lo, "left"),
                np.searchsorted(self.vals, hi, "right"))

    def count(self, coords, blo, bhi, axis):
        a, b = self._ranks(blo[axis], bhi[axis])
        if a >= b:
            return 0
        if a == 0 and b == self.ids.shape[0]:
            if isinstance(self.sub, _LastAxis):
                return self.sub.count(blo[axis + 1], bhi[axis + 1])
            return self.sub.count(coords, blo, bhi, axis + 1)
        if self.mid is None:
            sel = self.ids[a:b]
            sub = coords[sel, axis + 1:]
            ok = np.all((sub >= blo[axis + 1:]) & (sub <= bhi[axis + 1:]), axis=1)
            return int(np.sum(ok))
        return (self.left.count(coords, blo, bhi, axis)
                + self.right.count(coords, blo, bhi, axis))

    def min_key(self, coords, blo, bhi, axis, keys):
        a, b = self._ranks(blo[axis], bhi[axis])
        if a >= b:
            return KEY_SENTINEL
        if a == 0 and b == self.ids.shape[0]:
            if isinstance(self.sub, _LastAxis):
                return self.sub.min_key(blo[axis + 1], bhi[axis + 1], keys)
            return self.sub.min_key(coords, blo, bhi, axis + 1, keys)
        if self.mid is None:
            sel = self.ids[a:b]
            sub = coords[sel, axis + 1:]
            ok = np.all((sub >= blo[axis + 1:]) & (sub <= bhi[axis + 1:]), axis=1)
            if not np.any(ok):
                return KEY_SENTINEL
            return int(keys[sel[ok]].min())
        return min(self.left.min_key(coords, blo, bhi, axis, keys),
                   self.right.min_key(coords, blo, bhi, axis, keys))


class CountMinTree:
    """Layered d-dimensional range tree answering box count and min-key."""

    def __init__(self, points: PointSet):
        self.points = points
        self.d = points.d
        self.n = points.n
        coords = points.coords
        self._id_layer = None
        if self.d == 1:
            self._last = _LastAxis(coords[:, 0], np.arange(self.n, dtype=np.int64))
        elif self.d == 2:
            self._rt2 = prep.Rt2Layout(coords[:, 0], coords[:, 1])
            self._layers = {}
        else:
            self._root = (_AxisNode(coords, np.arange(self.n, dtype=np.int64), 0)
                          if self.n else None)

    # --- counting -----------------------------------------------------

    def count_batch(self, blo, bhi) -> np.ndarray:
        blo = np.atleast_2d(np.asarray(blo, np.float64))
        bhi = np.atleast_2d(np.asarray(bhi, np.float64))
        if blo.shape[1] != self.d:
            raise InvalidInputError("query box dimension mismatch")
        if self.n == 0:
            return np.zeros(blo.shape[0], np.int64)
        if self.d == 1:
            out = np.searchsorted(self._last.vals, bhi[:, 0], "right") \
                - np.searchsorted(self._last.vals, blo[:, 0], "left")
            return np.maximum(out, 0).astype(np.int64)
        if self.d == 2:
            r = self._rt2
            return kernels.rt2_count_batch(
                r.xs, r.ys_flat, r.levels, r.m, r.big_m,
                blo[:, 0], bhi[:, 0], blo[:, 1], bhi[:, 1])
        coords = self.points.coords
        return np.array([self._root.count(coords, blo[i], bhi[i], 0)
                         for i in range(blo.shape[0])], np.int64)

    # --- keyed minima ---------------------------------------------------

    def min_key_batch(self, keys, blo, bhi, layer_tag=None) -> np.ndarray:
        """Minimum of keys[p] over stored points p inside each box
        (KEY_SENTINEL where empty).  keys must be int64 and nonnegative."""
        blo = np.atleast_2d(np.asarray(blo, np.float64))
        bhi = np.atleast_2d(np.asarray(bhi, np.float64))
        if blo.shape[1] != self.d:
            raise InvalidInputError("query box dimension mismatch")
        if self.n == 0:
            return np.full(blo.shape[0], KEY_SENTINEL, np.int64)
        keys = np.asarray(keys, np.int64)
        if self.d == 1:
            return np.array([self._last.min_key(blo[i, 0], bhi[i, 0], keys)
                             for i in range(blo.shape[0])], np.int64)
        if self.d == 2:
            r = self._rt2
            minseg = None
            if layer_tag is not None:
                minseg = self._layers.get(layer_tag)
            if minseg is None:
                minseg = r.min_layer(keys)
                if layer_tag is not None:
                    self._layers[layer_tag] = minseg
            return kernels.rt2_minkey_batch(
                r.xs, r.ys_flat, minseg, r.levels, r.m, r.big_m,
                blo[:, 0], bhi[:, 0], blo[:, 1], bhi[:, 1])
        coords = self.points.coords
        return np.array([self._root.min_key(coords, blo[i], bhi[i], 0, keys)
                         for i in range(blo.shape[0])], np.int64)

    def min_index_batch(self, blo, bhi) -> np.ndarray:
        if self._id_layer is None:
            self._id_layer = np.arange(self.n, dtype=np.int64)
        return self.min_key_batch(self._id_layer, blo, bhi, layer_tag="ids")


def build_count_min(points: PointSet) -> CountMinTree:
    return CountMinTree(points)


def count(tree: CountMinTree, box: AABox) -> int:
    return int(tree.count_batch(box.lo[None, :], box.hi[None, :])[0])


def min_index(tree: CountMinTree, box: AABox):
    """Smallest stored point index inside the box, or None."""
    got = int(tree.min_index_batch(box.lo[None, :], box.hi[None, :])[0])
    return None if got >= KEY_SENTINEL else got


class DualBoxTree:
    """Square boxes searchable by containment of a query point.

    key="side" orders answers by (side length, box index); key="index"
    by box index alone (the construction keys regions by their partition
    index, whose order matches radii by definition).
    """

    def __init__(self, blo, bhi, box_index, key="side"):
        blo = np.atleast_2d(np.asarray(blo, np.float64))
        bhi = np.atleast_2d(np.asarray(bhi, np.float64))
        box_index = np.asarray(box_index, np.int64)
        m, d = blo.shape
        sides = bhi - blo
        if m:
            spread = np.max(sides, axis=1) - np.min(sides, axis=1)
            scale = np.maximum(np.max(sides, axis=1), 1.0)
            if np.any(spread > 1e-9 * scale):
                raise InvalidInputError("dual box tree requires square boxes")
        self.d = d
        self.m = m
        self.box_index = box_index
        self.side = sides[:, 0] if m else np.zeros(0)
        # dual encoding kept explicit: d corner coordinates plus side length
        self.dual_points = np.hstack([blo, self.side[:, None]]) if m else np.zeros((0, d + 1))
        if key == "side":
            order = np.lexsort((box_index, self.side))
        elif key == "index":
            order = np.lexsort((np.arange(m), box_index))
        else:
            raise InvalidInputError("key must be 'side' or 'index'")
        rank = np.empty(m, np.int64)
        rank[order] = np.arange(m)
        self._rank_to_pos = order
        duals = np.hstack([blo, bhi]) if m else np.zeros((0, 2 * d))
        self._kd = prep.DualKdLayout(duals, rank) if m else None

    def query_batch(self, qpts) -> np.ndarray:
        """Box index of the minimum-key box containing each query, -1 if none."""
        qpts = np.atleast_2d(np.asarray(qpts, np.float64))
        if qpts.shape[1] != self.d:
            raise InvalidInputError("query point dimension mismatch")
        if self.m == 0:
            return np.full(qpts.shape[0], -1, np.int64)
        kd = self._kd
        got = kernels.dualkd_query_batch(
            kd.nlo, kd.nhi, kd.nleft, kd.nright, kd.nkeymin,
            kd.nstart, kd.ncount, kd.order, kd.duals, kd.keys, qpts)
        out = np.full(qpts.shape[0], -1, np.int64)
        hit = got < KEY_SENTINEL
        out[hit] = self.box_index[self._rank_to_pos[got[hit]]]
        return out

    def query_positions(self, qpts) -> np.ndarray:
        """Like query_batch but returns storage positions instead of box ids."""
        qpts = np.atleast_2d(np.asarray(qpts, np.float64))
        if self.m == 0:
            return np.full(qpts.shape[0], -1, np.int64)
        kd = self._kd
        got = kernels.dualkd_query_batch(
            kd.nlo, kd.nhi, kd.nleft, kd.nright, kd.nkeymin,
            kd.nstart, kd.ncount, kd.order, kd.duals, kd.keys, qpts)
        out = np.full(qpts.shape[0], -1, np.int64)
        hit = got < KEY_SENTINEL
        out[hit] = self._rank_to_pos[got[hit]]
        return out


def build_dual(boxes, key="side") -> DualBoxTree:
    """boxes: iterable of (AABox, box index) with square boxes."""
    blo, bhi, idx = [], [], []
    d = None
    for box, i in boxes:
        if d is None:
            d = box.d
        elif box.d != d:
            raise InvalidInputError("mixed dimensions in dual box tree")
        blo.append(box.lo)
        bhi.append(box.hi)
        idx.append(int(i))
    if d is None:
        return DualBoxTree(np.zeros((0, 1)), np.zeros((0, 1)), np.zeros(0, np.int64), key)
    return DualBoxTree(np.array(blo), np.array(bhi), np.array(idx, np.int64), key)


def smallest_containing_box(tree: DualBoxTree, p):
    """Index of the smallest stored box containing p (ties by box index),
    or None when nothing contains it."""
    got = int(tree.query_batch(np.asarray(p, np.float64)[None, :])[0])
    return None if got < 0 else got
