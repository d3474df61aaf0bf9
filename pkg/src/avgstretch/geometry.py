"""Core geometric primitives: point sets, axis-aligned boxes, balls.

Everything here is immutable after construction and safe to share across
threads; the module-level operations are pure functions on numpy arrays.
Coordinates are 64-bit floats, containment predicates are closed
(boundaries count as inside) and comparisons are exact.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError


class Point(NamedTuple):
    index: int
    coords: np.ndarray


class PointSet:
    """An indexed set of n points in R^d, stored as an (n, d) float array."""

    def __init__(self, coords):
        coords = np.ascontiguousarray(coords, dtype=np.float64)
        if coords.ndim != 2:
            raise InvalidInputError("point set needs a 2-d (n, d) coordinate array")
        if coords.shape[1] < 1:
            raise InvalidInputError("ambient dimension must be at least 1")
        if coords.size and not np.all(np.isfinite(coords)):
            raise InvalidInputError("point coordinates must be finite")
        self.coords = coords
        self.coords.setflags(write=False)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    def __len__(self):
        return self.n

    def point(self, i: int) -> Point:
        return Point(int(i), self.coords[i])

    def has_duplicates(self) -> bool:
        if self.n < 2:
            return False
        order = np.lexsort(self.coords.T)
        sorted_coords = self.coords[order]
        return bool(np.any(np.all(sorted_coords[1:] == sorted_coords[:-1], axis=1)))

    def require_distinct(self, context: str) -> None:
        if self.has_duplicates():
            raise InvalidInputError("%s requires pairwise distinct points" % context)

    def __repr__(self):
        return "PointSet(n=%d, d=%d)" % (self.n, self.d)


class AABox:
    """Closed axis-aligned box given by its lower and upper corners."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise InvalidInputError("box corners must be 1-d arrays of equal length")
        if np.any(lo > hi):
            raise InvalidInputError("box needs lo[i] <= hi[i] on every axis")
        self.lo = lo
        self.hi = hi

    @property
    def d(self) -> int:
        return self.lo.shape[0]

    def side_lengths(self) -> np.ndarray:
        return self.hi - self.lo

    def longest_side(self) -> float:
        return float(np.max(self.hi - self.lo))

    def is_square(self, rel_tol: float = 0.0) -> bool:
        sides = self.side_lengths()
        spread = float(np.max(sides) - np.min(sides))
        return spread <= rel_tol * max(float(np.max(sides)), 1.0)

    def __repr__(self):
        return "AABox(%s, %s)" % (self.lo.tolist(), self.hi.tolist())


class Ball:
    """Closed ball with a center and a nonnegative radius."""

    __slots__ = ("center", "radius")

    def __init__(self, center, radius):
        center = np.asarray(center, dtype=np.float64)
        if center.ndim != 1:
            raise InvalidInputError("ball center must be a 1-d array")
        radius = float(radius)
        if radius < 0.0:
            raise InvalidInputError("ball radius must be nonnegative")
        self.center = center
        self.radius = radius

    @property
    def d(self) -> int:
        return self.center.shape[0]

    def __repr__(self):
        return "Ball(center=%s, radius=%r)" % (self.center.tolist(), self.radius)


def _as_coords(p):
    if isinstance(p, Point):
        return p.coords
    return np.asarray(p, dtype=np.float64)


def _check_dim(da, db):
    if da != db:
        raise InvalidInputError("dimension mismatch: %d vs %d" % (da, db))


def distance(a, b) -> float:
    """Euclidean distance between two points."""
    ca, cb = _as_coords(a), _as_coords(b)
    _check_dim(ca.shape[0], cb.shape[0])
    return float(np.sqrt(np.sum((ca - cb) ** 2)))


def enclosing_ball(box: AABox) -> Ball:
    """Smallest ball containing the box: center at the midpoint, radius half the diagonal."""
    center = (box.lo + box.hi) * 0.5
    radius = 0.5 * float(np.sqrt(np.sum((box.hi - box.lo) ** 2)))
    return Ball(center, radius)


def box_contains(box: AABox, p) -> bool:
    c = _as_coords(p)
    _check_dim(box.d, c.shape[0])
    return bool(np.all(box.lo <= c) and np.all(c <= box.hi))


def ball_contains(ball: Ball, p) -> bool:
    c = _as_coords(p)
    _check_dim(ball.d, c.shape[0])
    return float(np.sqrt(np.sum((c - ball.center) ** 2))) <= ball.radius


def boxes_intersect(a: AABox, b: AABox) -> bool:
    _check_dim(a.d, b.d)
    return bool(np.all(a.lo <= b.hi) and np.all(b.lo <= a.hi))
