import math

import numpy as np
import pytest

from avgstretch.errors import InvalidInputError
from avgstretch.geometry import (AABox, Ball, PointSet, ball_contains,
                                 box_contains, boxes_intersect, distance,
                                 enclosing_ball)


def test_distance_examples():
    assert distance([0, 0], [0, 0]) == 0.0
    assert distance([0, 0], [3, 4]) == 5.0
    # direct formula against a sum-of-squares oracle
    oracle = math.sqrt(sum((a - b) ** 2 for a, b in zip((1, 1), (2, 2))))
    assert distance([1, 1], [2, 2]) == pytest.approx(oracle, abs=0)
    assert distance([1, 1], [2, 2]) == pytest.approx(math.sqrt(2.0))


def test_distance_dimension_mismatch():
    with pytest.raises(InvalidInputError):
        distance([0, 0], [1, 2, 3])


def test_distance_symmetry_and_triangle(rng):
    for _ in range(300):
        a, b, c = rng.normal(size=(3, 3))
        assert distance(a, b) == distance(b, a)
        assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12


def test_enclosing_ball_examples():
    ball = enclosing_ball(AABox([0, 0], [4, 3]))
    assert np.allclose(ball.center, [2, 1.5])
    assert ball.radius == pytest.approx(2.5)
    degenerate = enclosing_ball(AABox([1, 1], [1, 1]))
    assert np.allclose(degenerate.center, [1, 1])
    assert degenerate.radius == 0.0
    cube = enclosing_ball(AABox([0, 0, 0], [1, 1, 1]))
    assert cube.radius == pytest.approx(math.sqrt(3) / 2)


def test_enclosing_ball_covers_corners_and_is_minimal(rng):
    for _ in range(25):
        lo = rng.normal(size=2)
        hi = lo + rng.random(2) + 0.1
        box = AABox(lo, hi)
        ball = enclosing_ball(box)
        corners = np.array([[lo[0], lo[1]], [lo[0], hi[1]],
                            [hi[0], lo[1]], [hi[0], hi[1]]])
        for corner in corners:
            assert ball_contains(ball, corner)
        # no perturbed center covers all corners with a smaller radius
        for shift in rng.normal(scale=0.05, size=(40, 2)):
            center = ball.center + shift
            need = np.max(np.sqrt(np.sum((corners - center) ** 2, axis=1)))
            assert need >= ball.radius - 1e-12


def test_containment_closed_boundaries():
    assert box_contains(AABox([0, 0], [1, 1]), [1, 1])
    assert ball_contains(Ball([0, 0], 1.0), [0, 1])
    assert not ball_contains(Ball([0, 0], 1.0), [1, 1])


def test_boxes_intersect_examples():
    assert boxes_intersect(AABox([0, 0], [1, 1]), AABox([1, 1], [2, 2]))
    assert not boxes_intersect(AABox([0, 0], [1, 1]), AABox([1.5, 1.5], [2, 2]))
    assert boxes_intersect(AABox([0, 0], [3, 3]), AABox([1, 1], [2, 2]))


def test_containment_against_direct_comparison(rng):
    lo = rng.normal(size=3)
    hi = lo + rng.random(3)
    box = AABox(lo, hi)
    ball = Ball(rng.normal(size=3), 0.8)
    pts = rng.normal(scale=1.2, size=(10000, 3))
    in_box = np.all((pts >= lo) & (pts <= hi), axis=1)
    in_ball = np.sqrt(np.sum((pts - ball.center) ** 2, axis=1)) <= ball.radius
    for i in range(0, 10000, 7):
        assert box_contains(box, pts[i]) == bool(in_box[i])
        assert ball_contains(ball, pts[i]) == bool(in_ball[i])


def test_pointset_validation():
    with pytest.raises(InvalidInputError):
        PointSet([[np.inf, 0.0]])
    with pytest.raises(InvalidInputError):
        PointSet(np.zeros((3,)))
    ps = PointSet([[0, 0], [1, 0], [0, 0]])
    assert ps.has_duplicates()
    with pytest.raises(InvalidInputError):
        ps.require_distinct("test")
    assert not PointSet([[0, 0], [1, 0]]).has_duplicates()


def test_bad_box_and_ball():
    with pytest.raises(InvalidInputError):
        AABox([1, 0], [0, 1])
    with pytest.raises(InvalidInputError):
        Ball([0, 0], -1.0)
